//! Bit-packed Pauli strings, phased products, and sparse qubit Hamiltonians.
//!
//! A Pauli word on `n` qubits is stored in symplectic form as two bitvectors
//! packed into 64-bit limbs: bit `q` of `x` is set when the letter at qubit
//! `q` has an X component, bit `q` of `z` when it has a Z component.
//!
//! | (x, z) | letter |
//! |--------|--------|
//! | (0, 0) | I      |
//! | (1, 0) | X      |
//! | (1, 1) | Y      |
//! | (0, 1) | Z      |
//!
//! Qubit 0 is the leftmost character of the textual form.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::par;

/// Coefficients with magnitude below this are dropped.
pub const PRUNE_TOLERANCE: f64 = 1e-12;

pub(crate) type Limbs = SmallVec<[u64; 2]>;

#[inline]
pub(crate) fn limb_count(n_qubits: usize) -> usize {
    n_qubits.div_ceil(64)
}

/// A Hermitian Pauli word in symplectic (x, z) form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: Limbs,
    z: Limbs,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        let limbs = limb_count(n_qubits);
        Self {
            n_qubits,
            x: smallvec![0; limbs],
            z: smallvec![0; limbs],
        }
    }

    /// Parses a word such as `"XIZY"`; qubit 0 is the first character.
    pub fn from_letters(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut p = Self::identity(n);
        for (q, c) in s.chars().enumerate() {
            let (x, z) = match c {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                other => return Err(Error::Parse(format!("invalid Pauli letter {other:?}"))),
            };
            p.set_bits(q, x, z);
        }
        Ok(p)
    }

    /// Single-letter word `letter` on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: char) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit, n_qubits });
        }
        let mut p = Self::identity(n_qubits);
        let (x, z) = match letter {
            'I' => (false, false),
            'X' => (true, false),
            'Y' => (true, true),
            'Z' => (false, true),
            other => return Err(Error::Parse(format!("invalid Pauli letter {other:?}"))),
        };
        p.set_bits(qubit, x, z);
        Ok(p)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    /// Overwrites the (x, z) pair at qubit `q`.
    #[inline]
    pub fn set_bits(&mut self, q: usize, x: bool, z: bool) {
        let (limb, bit) = (q / 64, q % 64);
        let mask = 1u64 << bit;
        self.x[limb] = (self.x[limb] & !mask) | ((x as u64) << bit);
        self.z[limb] = (self.z[limb] & !mask) | ((z as u64) << bit);
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn x_limbs(&self) -> &[u64] {
        &self.x
    }

    pub fn z_limbs(&self) -> &[u64] {
        &self.z
    }

    pub(crate) fn limbs_mut(&mut self) -> (&mut [u64], &mut [u64]) {
        (&mut self.x, &mut self.z)
    }

    /// Number of non-identity letters.
    #[inline]
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&l| l == 0)
    }

    /// True when the two words anticommute (odd symplectic product).
    pub fn anticommutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        let ones: u32 = self
            .x
            .iter()
            .zip(&self.z)
            .zip(other.x.iter().zip(&other.z))
            .map(|((xa, za), (xb, zb))| ((xa & zb) ^ (xb & za)).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn to_letters(&self) -> String {
        (0..self.n_qubits).map(|q| self.letter(q)).collect()
    }

    /// Iterates the qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.x
            .iter()
            .zip(&self.z)
            .enumerate()
            .flat_map(|(limb, (x, z))| {
                let mut bits = x | z;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        return None;
                    }
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(limb * 64 + b)
                })
            })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_letters())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({})", self.to_letters())
    }
}

/// Lexicographic order on the letter string with I < X < Y < Z.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits.cmp(&other.n_qubits).then_with(|| {
            // letter code: high bit = z, low bit = x ^ z  (I=0, X=1, Y=2, Z=3)
            for i in 0..self.x.len() {
                let (xa, za, xb, zb) = (self.x[i], self.z[i], other.x[i], other.z[i]);
                let diff = (za ^ zb) | ((xa ^ za) ^ (xb ^ zb));
                if diff != 0 {
                    let b = diff.trailing_zeros();
                    let code = |x: u64, z: u64| (((z >> b) & 1) << 1) | (((x ^ z) >> b) & 1);
                    return code(xa, za).cmp(&code(xb, zb));
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A Pauli word with a global phase `i^phase_power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub pauli: PauliString,
    pub phase_power: u8,
}

impl PhasedPauli {
    pub fn new(pauli: PauliString, phase_power: u8) -> Self {
        Self {
            pauli,
            phase_power: phase_power % 4,
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(PauliString::identity(n_qubits), 0)
    }

    /// The phase as a complex number.
    pub fn phase(&self) -> num_complex::Complex64 {
        use num_complex::Complex64;
        match self.phase_power {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn mul(&self, other: &PhasedPauli) -> Result<PhasedPauli> {
        let prod = pauli_product(&self.pauli, &other.pauli)?;
        Ok(PhasedPauli::new(
            prod.pauli,
            (self.phase_power + other.phase_power + prod.phase_power) % 4,
        ))
    }
}

/// Matrix product `a · b` as a phased Pauli word.
///
/// Writing each letter as `i^(x·z) X^x Z^z`, the product picks up
/// `(-1)^(z_a·x_b)` from commuting `Z^z_a` past `X^x_b`, and the phase is
/// renormalised against the result's own `i^(x·z)` factor.
pub fn pauli_product(a: &PauliString, b: &PauliString) -> Result<PhasedPauli> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::DimensionMismatch {
            left: a.n_qubits,
            right: b.n_qubits,
        });
    }
    let mut out = PauliString::identity(a.n_qubits);
    let mut e: i64 = 0;
    for i in 0..a.x.len() {
        let (xa, za, xb, zb) = (a.x[i], a.z[i], b.x[i], b.z[i]);
        let (xc, zc) = (xa ^ xb, za ^ zb);
        out.x[i] = xc;
        out.z[i] = zc;
        e += (xa & za).count_ones() as i64
            + (xb & zb).count_ones() as i64
            + 2 * (za & xb).count_ones() as i64
            - (xc & zc).count_ones() as i64;
    }
    Ok(PhasedPauli::new(out, e.rem_euclid(4) as u8))
}

/// Number of non-identity letters of `p`.
pub fn weight(p: &PauliString) -> usize {
    p.weight()
}

/// Which metric the optimizer minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    /// Total Pauli weight, `Σ wt(P_j)`.
    Pw,
    /// Weighted Pauli weight, `Σ |c_j| wt(P_j)`.
    Wpw,
}

impl CostKind {
    pub fn evaluate(self, h: &QubitHamiltonian) -> f64 {
        match self {
            CostKind::Pw => h.pauli_weight() as f64,
            CostKind::Wpw => h.weighted_pauli_weight(),
        }
    }

    /// Slack below which two costs are treated as equal.
    pub fn margin(self) -> f64 {
        match self {
            CostKind::Pw => 0.0,
            CostKind::Wpw => 1e-9,
        }
    }
}

impl std::str::FromStr for CostKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pw" => Ok(CostKind::Pw),
            "wpw" => Ok(CostKind::Wpw),
            other => Err(Error::Parse(format!("unknown cost kind {other:?}"))),
        }
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostKind::Pw => "pw",
            CostKind::Wpw => "wpw",
        })
    }
}

/// Sparse real combination of Pauli words.
///
/// Terms are kept sorted lexicographically by letter string with unique keys
/// and no coefficient below [`PRUNE_TOLERANCE`].
#[derive(Clone, Debug, PartialEq)]
pub struct QubitHamiltonian {
    n_qubits: usize,
    terms: Vec<(PauliString, f64)>,
}

impl QubitHamiltonian {
    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    /// Builds a Hamiltonian, summing duplicate words and pruning tiny terms.
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        let mut acc: HashMap<PauliString, f64> = HashMap::new();
        for (p, c) in terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    left: n_qubits,
                    right: p.n_qubits(),
                });
            }
            if !c.is_finite() {
                return Err(Error::NonFinite(p.to_letters()));
            }
            *acc.entry(p).or_insert(0.0) += c;
        }
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| c.abs() >= PRUNE_TOLERANCE)
            .collect();
        par::sort_by(&mut terms, |a, b| a.0.cmp(&b.0));
        Ok(Self { n_qubits, terms })
    }

    /// Parses `(coefficient, letters)` pairs.
    pub fn from_letter_terms(n_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|&(c, s)| PauliString::from_letters(s).map(|p| (p, c)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n_qubits, parsed)
    }

    /// Caller guarantees the keys are unique; terms are re-sorted.
    pub(crate) fn from_unique_terms(n_qubits: usize, mut terms: Vec<(PauliString, f64)>) -> Self {
        par::sort_by(&mut terms, |a, b| a.0.cmp(&b.0));
        assert!(
            terms.windows(2).all(|w| w[0].0 != w[1].0),
            "duplicate Pauli word after a bijective map"
        );
        Self { n_qubits, terms }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &PauliString) -> Option<f64> {
        self.terms
            .binary_search_by(|(q, _)| q.cmp(p))
            .ok()
            .map(|i| self.terms[i].1)
    }

    /// Total Pauli weight.
    pub fn pauli_weight(&self) -> usize {
        self.terms.iter().map(|(p, _)| p.weight()).sum()
    }

    /// Weighted Pauli weight.
    pub fn weighted_pauli_weight(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| c.abs() * p.weight() as f64)
            .sum()
    }

    /// Pauli weight per term; 0 for an empty Hamiltonian.
    pub fn average_pauli_weight(&self) -> f64 {
        if self.terms.is_empty() {
            0.0
        } else {
            self.pauli_weight() as f64 / self.terms.len() as f64
        }
    }

    /// Entry `q` counts the terms acting non-trivially on qubit `q`.
    pub fn hamming_profile(&self) -> Vec<usize> {
        let mut profile = vec![0usize; self.n_qubits];
        for (p, _) in &self.terms {
            for q in p.support() {
                profile[q] += 1;
            }
        }
        profile
    }

    pub fn to_file(&self) -> HamiltonianFile {
        HamiltonianFile {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| TermRecord {
                    c: *c,
                    p: p.to_letters(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &HamiltonianFile) -> Result<Self> {
        let mut terms = Vec::with_capacity(file.terms.len());
        for t in &file.terms {
            let p = PauliString::from_letters(&t.p)?;
            if p.n_qubits() != file.n_qubits {
                return Err(Error::Parse(format!(
                    "term {:?} has {} letters, expected {}",
                    t.p,
                    p.n_qubits(),
                    file.n_qubits
                )));
            }
            terms.push((p, t.c));
        }
        Self::from_terms(file.n_qubits, terms)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: HamiltonianFile = serde_json::from_str(s)?;
        Self::from_file(&file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Free-function form of [`QubitHamiltonian::pauli_weight`].
pub fn total_pauli_weight(h: &QubitHamiltonian) -> usize {
    h.pauli_weight()
}

/// Free-function form of [`QubitHamiltonian::weighted_pauli_weight`].
pub fn weighted_pauli_weight(h: &QubitHamiltonian) -> f64 {
    h.weighted_pauli_weight()
}

/// Free-function form of [`QubitHamiltonian::hamming_profile`].
pub fn hamming_profile(h: &QubitHamiltonian) -> Vec<usize> {
    h.hamming_profile()
}

/// On-disk qubit Hamiltonian: `{"n_qubits": n, "terms": [{"c": .., "p": ".."}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub n_qubits: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermRecord {
    pub c: f64,
    pub p: String,
}
