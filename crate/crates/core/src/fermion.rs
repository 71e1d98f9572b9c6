//! Second-quantized operators and their Majorana expansion.
//!
//! Majorana operators are `m_{2i} = a_i† + a_i` and `m_{2i+1} = i(a_i† - a_i)`,
//! so `a_i = (m_{2i} + i m_{2i+1}) / 2` and `a_i† = (m_{2i} - i m_{2i+1}) / 2`.
//! Products are normal-ordered with `{m_i, m_j} = 2 δ_ij`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::pauli::PRUNE_TOLERANCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub mode: usize,
    /// Creation when true.
    pub dagger: bool,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermionTerm {
    pub coefficient: Complex64,
    /// Written left to right as in the Hamiltonian.
    pub ops: Vec<LadderOp>,
}

/// A sum of ladder-operator monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: Vec<FermionTerm>,
}

impl FermionOperator {
    pub fn new(n_modes: usize) -> Self {
        Self {
            n_modes,
            terms: Vec::new(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, coefficient: Complex64, ops: Vec<LadderOp>) -> Result<()> {
        if !(coefficient.re.is_finite() && coefficient.im.is_finite()) {
            return Err(Error::NonFinite(format!(
                "fermion term {}",
                self.terms.len()
            )));
        }
        if let Some(op) = ops.iter().find(|op| op.mode >= self.n_modes) {
            return Err(Error::ModeOutOfRange {
                mode: op.mode,
                n_modes: self.n_modes,
            });
        }
        self.terms.push(FermionTerm { coefficient, ops });
        Ok(())
    }

    pub fn push_real(&mut self, coefficient: f64, ops: Vec<LadderOp>) -> Result<()> {
        self.push(Complex64::new(coefficient, 0.0), ops)
    }

    pub fn to_file(&self) -> FermionFile {
        FermionFile {
            n_modes: self.n_modes,
            terms: self
                .terms
                .iter()
                .map(|t| FermionTermRecord {
                    re: t.coefficient.re,
                    im: t.coefficient.im,
                    ops: t
                        .ops
                        .iter()
                        .map(|op| [op.mode, op.dagger as usize])
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &FermionFile) -> Result<Self> {
        let mut out = Self::new(file.n_modes);
        for (i, t) in file.terms.iter().enumerate() {
            let ops = t
                .ops
                .iter()
                .map(|&[mode, dagger]| match dagger {
                    0 => Ok(LadderOp::annihilate(mode)),
                    1 => Ok(LadderOp::create(mode)),
                    d => Err(Error::Parse(format!(
                        "term {i}: dagger flag must be 0 or 1, got {d}"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Complex64::new(t.re, t.im), ops)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: FermionFile = serde_json::from_str(s)?;
        Self::from_file(&file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Interchange format: `{"n_modes": n, "terms": [{"re", "im", "ops": [[mode, dagger], ..]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FermionFile {
    pub n_modes: usize,
    pub terms: Vec<FermionTermRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FermionTermRecord {
    pub re: f64,
    pub im: f64,
    pub ops: Vec<[usize; 2]>,
}

/// A coefficient times a product of Majorana operators with strictly
/// increasing indices. The empty product is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct MajoranaMonomial {
    pub coefficient: Complex64,
    pub indices: Vec<usize>,
}

/// Sorts a Majorana product into strictly increasing order.
///
/// Returns `(negated, indices)`. Each transposition of distinct neighbours
/// flips the sign; equal neighbours square to the identity and vanish.
pub fn normal_order(indices: &[usize]) -> (bool, Vec<usize>) {
    let mut v = indices.to_vec();
    let mut negated = false;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < v.len() {
            if v[i] > v[i + 1] {
                v.swap(i, i + 1);
                negated = !negated;
                changed = true;
                i += 1;
            } else if v[i] == v[i + 1] {
                v.drain(i..i + 2);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            return (negated, v);
        }
    }
}

fn expand_term(term: &FermionTerm) -> Vec<(Vec<usize>, Complex64)> {
    let half = Complex64::new(0.5, 0.0);
    let mut partial: Vec<(Vec<usize>, Complex64)> = vec![(Vec::new(), term.coefficient)];
    for op in &term.ops {
        // a = (m_2i + i m_2i+1)/2, a† = (m_2i - i m_2i+1)/2
        let odd = if op.dagger {
            Complex64::new(0.0, -0.5)
        } else {
            Complex64::new(0.0, 0.5)
        };
        let mut next = Vec::with_capacity(partial.len() * 2);
        for (idx, c) in partial {
            let mut even_idx = idx.clone();
            even_idx.push(2 * op.mode);
            next.push((even_idx, c * half));
            let mut odd_idx = idx;
            odd_idx.push(2 * op.mode + 1);
            next.push((odd_idx, c * odd));
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(idx, c)| {
            let (neg, sorted) = normal_order(&idx);
            (sorted, if neg { -c } else { c })
        })
        .collect()
}

/// Expands every term into canonical Majorana monomials and combines like terms.
///
/// Output is sorted by index list; monomials whose coefficient falls below the
/// pruning tolerance are dropped.
pub fn to_majorana(f: &FermionOperator) -> Vec<MajoranaMonomial> {
    let expanded = par::map(f.terms(), expand_term);
    let mut acc: BTreeMap<Vec<usize>, Complex64> = BTreeMap::new();
    for (idx, c) in expanded.into_iter().flatten() {
        *acc.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += c;
    }
    acc.into_iter()
        .filter(|(_, c)| c.norm() >= PRUNE_TOLERANCE)
        .map(|(indices, coefficient)| MajoranaMonomial {
            coefficient,
            indices,
        })
        .collect()
}

/// Self-test of the ordering algebra: for every pair of indices occurring in
/// `monomials`, `m_i m_j + m_j m_i` must reduce to `2 δ_ij`.
pub fn anticommutation_check(monomials: &[MajoranaMonomial]) -> bool {
    let mut seen: Vec<usize> = monomials
        .iter()
        .flat_map(|m| m.indices.iter().copied())
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.iter().all(|&i| {
        seen.iter().all(|&j| {
            let (neg_a, a) = normal_order(&[i, j]);
            let (neg_b, b) = normal_order(&[j, i]);
            if i == j {
                a.is_empty() && b.is_empty() && !neg_a && !neg_b
            } else {
                a == b && neg_a != neg_b
            }
        })
    })
}
