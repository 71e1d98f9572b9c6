//! Fermion-to-qubit mapping tables and their application to Majorana sums.
//!
//! Jordan–Wigner and Bravyi–Kitaev are both linear parity encodings: the
//! qubit register stores `b = A f (mod 2)` for an invertible binary matrix
//! `A`. For mode `j`,
//!
//! * `m_{2j} = X[col_j(A)] · Z[ρ_j A⁻¹]`, where `ρ_j` selects modes `< j`,
//! * `m_{2j+1} = i · m_{2j} · Z[row_j(A⁻¹)]`.
//!
//! The ternary-tree mapping reads Majorana images off root-to-leaf paths.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{to_majorana, FermionOperator, MajoranaMonomial};
use crate::par;
use crate::pauli::{pauli_product, PauliString, PhasedPauli, QubitHamiltonian};

/// Imaginary parts above this after mapping indicate a non-Hermitian input.
pub const IMAGINARY_TOLERANCE: f64 = 1e-9;

/// Images of the `2n` Majorana operators on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct MappingTable {
    n_modes: usize,
    images: Vec<PhasedPauli>,
}

impl MappingTable {
    /// Wraps explicit images; use [`MappingTable::validate`] to check them.
    pub fn from_images(n_modes: usize, images: Vec<PhasedPauli>) -> Result<Self> {
        if images.len() != 2 * n_modes {
            return Err(Error::InvalidConfig(format!(
                "{} images supplied for {} modes",
                images.len(),
                n_modes
            )));
        }
        if let Some(img) = images.iter().find(|p| p.pauli.n_qubits() != n_modes) {
            return Err(Error::DimensionMismatch {
                left: n_modes,
                right: img.pauli.n_qubits(),
            });
        }
        Ok(Self { n_modes, images })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn images(&self) -> &[PhasedPauli] {
        &self.images
    }

    pub fn image(&self, k: usize) -> &PhasedPauli {
        &self.images[k]
    }

    /// Checks Hermiticity, pairwise anticommutation and symplectic independence.
    pub fn validate(&self) -> Result<()> {
        for (k, img) in self.images.iter().enumerate() {
            if img.phase_power % 2 != 0 {
                return Err(Error::InvalidConfig(format!("image {k} is anti-Hermitian")));
            }
        }
        for a in 0..self.images.len() {
            for b in a + 1..self.images.len() {
                if !self.images[a]
                    .pauli
                    .anticommutes_with(&self.images[b].pauli)
                {
                    return Err(Error::InvalidConfig(format!("images {a} and {b} commute")));
                }
            }
        }
        let rows: Vec<Vec<bool>> = self
            .images
            .iter()
            .map(|img| {
                (0..self.n_modes)
                    .map(|q| img.pauli.x_bit(q))
                    .chain((0..self.n_modes).map(|q| img.pauli.z_bit(q)))
                    .collect()
            })
            .collect();
        if gf2_rank(rows) != self.images.len() {
            return Err(Error::InvalidConfig("images are linearly dependent".into()));
        }
        Ok(())
    }

    pub fn max_weight(&self) -> usize {
        self.images
            .iter()
            .map(|p| p.pauli.weight())
            .max()
            .unwrap_or(0)
    }

    pub fn average_weight(&self) -> f64 {
        if self.images.is_empty() {
            return 0.0;
        }
        self.images.iter().map(|p| p.pauli.weight()).sum::<usize>() as f64
            / self.images.len() as f64
    }
}

type BitMatrix = Vec<Vec<bool>>;

fn gf2_rank(mut rows: BitMatrix) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(pivot_row) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gf2_inverse(a: &BitMatrix) -> BitMatrix {
    let n = a.len();
    let mut m: BitMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| i == j));
            r
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n)
            .find(|&r| m[r][c])
            .expect("encoding matrix must be invertible");
        m.swap(c, pivot);
        for r in 0..n {
            if r != c && m[r][c] {
                let pivot_row = m[c].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row) {
                    *x ^= p;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn word(n: usize, support: impl IntoIterator<Item = usize>, letter: char) -> PauliString {
    let mut p = PauliString::identity(n);
    for q in support {
        match letter {
            'X' => p.set_bits(q, true, false),
            _ => p.set_bits(q, false, true),
        }
    }
    p
}

/// Mapping table of a linear parity encoding `b = A f`.
fn linear_encoding(encoding: &BitMatrix) -> MappingTable {
    let n = encoding.len();
    let inverse = gf2_inverse(encoding);
    let mut images = Vec::with_capacity(2 * n);
    for j in 0..n {
        let flip = word(n, (0..n).filter(|&i| encoding[i][j]), 'X');
        // parity of modes < j as a function of the qubit register
        let parity = word(
            n,
            (0..n).filter(|&q| (0..j).fold(false, |acc, l| acc ^ inverse[l][q])),
            'Z',
        );
        let occupation = word(n, (0..n).filter(|&q| inverse[j][q]), 'Z');
        let even = pauli_product(&flip, &parity).expect("same width");
        let odd = even
            .mul(&PhasedPauli::new(occupation, 0))
            .expect("same width");
        let odd = PhasedPauli::new(odd.pauli, odd.phase_power + 1);
        images.push(even);
        images.push(odd);
    }
    MappingTable { n_modes: n, images }
}

/// `m_{2i} = Z_0 … Z_{i-1} X_i`, `m_{2i+1} = Z_0 … Z_{i-1} Y_i`.
pub fn jordan_wigner(n_modes: usize) -> MappingTable {
    let mut images = Vec::with_capacity(2 * n_modes);
    for i in 0..n_modes {
        let mut even = PauliString::identity(n_modes);
        for q in 0..i {
            even.set_bits(q, false, true);
        }
        let mut odd = even.clone();
        even.set_bits(i, true, false);
        odd.set_bits(i, true, true);
        images.push(PhasedPauli::new(even, 0));
        images.push(PhasedPauli::new(odd, 0));
    }
    MappingTable { n_modes, images }
}

/// Bravyi–Kitaev via the Fenwick-tree encoding: qubit `i` stores the parity of
/// modes `i + 1 - lowbit(i + 1) ..= i`. Works for any mode count.
pub fn bravyi_kitaev(n_modes: usize) -> MappingTable {
    let encoding: BitMatrix = (0..n_modes)
        .map(|i| {
            let one_based = i + 1;
            let lo = one_based - (one_based & one_based.wrapping_neg());
            (0..n_modes).map(|j| j >= lo && j <= i).collect()
        })
        .collect();
    linear_encoding(&encoding)
}

/// Balanced ternary tree with nodes labelled breadth-first (children of node
/// `q` are `3q+1`, `3q+2`, `3q+3` along X, Y, Z edges).
///
/// Each of the `2n + 1` missing children is a leaf whose root path defines a
/// Pauli word. The path that follows Z edges from the root is dropped and the
/// remaining leaves, in breadth-first order, become `m_0 … m_{2n-1}`.
pub fn ternary_tree(n_modes: usize) -> MappingTable {
    let n = n_modes;
    let mut dropped = 0usize;
    while 3 * dropped + 3 < n {
        dropped = 3 * dropped + 3;
    }
    let mut images = Vec::with_capacity(2 * n);
    for node in 0..n {
        for branch in 0..3usize {
            if 3 * node + 1 + branch < n || (node == dropped && branch == 2) {
                continue;
            }
            let mut p = PauliString::identity(n);
            let (mut v, mut letter) = (node, branch);
            loop {
                match letter {
                    0 => p.set_bits(v, true, false),
                    1 => p.set_bits(v, true, true),
                    _ => p.set_bits(v, false, true),
                }
                if v == 0 {
                    break;
                }
                letter = (v - 1) % 3;
                v = (v - 1) / 3;
            }
            images.push(PhasedPauli::new(p, 0));
        }
    }
    debug_assert_eq!(images.len(), 2 * n);
    MappingTable { n_modes, images }
}

/// The built-in mappers, with CLI names `jw`, `bk`, `ternary`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mapper {
    JordanWigner,
    BravyiKitaev,
    TernaryTree,
}

impl Mapper {
    pub const ALL: [Mapper; 3] = [
        Mapper::JordanWigner,
        Mapper::BravyiKitaev,
        Mapper::TernaryTree,
    ];

    pub fn table(self, n_modes: usize) -> MappingTable {
        match self {
            Mapper::JordanWigner => jordan_wigner(n_modes),
            Mapper::BravyiKitaev => bravyi_kitaev(n_modes),
            Mapper::TernaryTree => ternary_tree(n_modes),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mapper::JordanWigner => "jw",
            Mapper::BravyiKitaev => "bk",
            Mapper::TernaryTree => "ternary",
        }
    }
}

impl fmt::Display for Mapper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mapper {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jw" => Ok(Mapper::JordanWigner),
            "bk" => Ok(Mapper::BravyiKitaev),
            "ternary" | "tt" => Ok(Mapper::TernaryTree),
            other => Err(Error::Parse(format!("unknown mapper {other:?}"))),
        }
    }
}

/// Replaces each Majorana by its image and collects like Pauli words.
///
/// Fails when a combined coefficient keeps an imaginary part above
/// [`IMAGINARY_TOLERANCE`].
pub fn apply_mapping(
    table: &MappingTable,
    monomials: &[MajoranaMonomial],
) -> Result<QubitHamiltonian> {
    let n = table.n_modes;
    if let Some(&index) = monomials
        .iter()
        .flat_map(|m| m.indices.iter())
        .find(|&&k| k >= 2 * n)
    {
        return Err(Error::MajoranaOutOfRange { index, n_modes: n });
    }
    let mapped = par::map(monomials, |m| {
        let mut acc = PhasedPauli::identity(n);
        for &k in &m.indices {
            acc = acc.mul(&table.images[k]).expect("table width matches");
        }
        let coefficient = m.coefficient * acc.phase();
        (acc.pauli, coefficient)
    });
    let mut combined: HashMap<PauliString, Complex64> = HashMap::with_capacity(mapped.len());
    for (p, c) in mapped {
        *combined.entry(p).or_insert(Complex64::new(0.0, 0.0)) += c;
    }
    let mut worst: Option<(&PauliString, f64)> = None;
    for (p, c) in &combined {
        if c.im.abs() > IMAGINARY_TOLERANCE && worst.is_none_or(|(_, w)| c.im.abs() > w) {
            worst = Some((p, c.im.abs()));
        }
    }
    if let Some((p, imag)) = worst {
        return Err(Error::ImaginaryResidue {
            pauli: p.to_letters(),
            imag,
        });
    }
    QubitHamiltonian::from_terms(n, combined.into_iter().map(|(p, c)| (p, c.re)))
}

/// Majorana-expands `f` and maps it with `mapper`.
pub fn map_operator(mapper: Mapper, f: &FermionOperator) -> Result<QubitHamiltonian> {
    apply_mapping(&mapper.table(f.n_modes()), &to_majorana(f))
}
