//! Dense matrix oracle shared by the integration tests and acceptance suite.
//!
//! Qubit 0 is the most significant tensor factor, matching the leftmost
//! letter of a Pauli string.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use rsd_core::{
    CliffordGate, FermionOperator, GateSequence, PauliString, QubitHamiltonian, SubsystemView,
};

pub type Mat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter(ch: char) -> Mat {
    let v = match ch {
        'I' => [ONE, ZERO, ZERO, ONE],
        'X' => [ZERO, ONE, ONE, ZERO],
        'Y' => [ZERO, -I, I, ZERO],
        'Z' => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("bad letter {ch}"),
    };
    Mat::from_row_slice(2, 2, &v)
}

pub fn kron_all(factors: &[Mat]) -> Mat {
    factors
        .iter()
        .fold(Mat::identity(1, 1), |acc, f| acc.kronecker(f))
}

pub fn pauli_matrix(letters: &str) -> Mat {
    let factors: Vec<Mat> = letters.chars().map(letter).collect();
    kron_all(&factors)
}

pub fn pauli_string_matrix(p: &PauliString) -> Mat {
    pauli_matrix(&p.to_letters())
}

fn embed(n: usize, q: usize, m: &Mat) -> Mat {
    let factors: Vec<Mat> = (0..n)
        .map(|i| {
            if i == q {
                m.clone()
            } else {
                Mat::identity(2, 2)
            }
        })
        .collect();
    kron_all(&factors)
}

fn bit(idx: usize, n: usize, q: usize) -> usize {
    (idx >> (n - 1 - q)) & 1
}

pub fn gate_matrix(n: usize, g: &CliffordGate) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match *g {
        CliffordGate::H(q) => embed(
            n,
            q,
            &Mat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]),
        ),
        CliffordGate::S(q) => embed(n, q, &Mat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, I])),
        CliffordGate::Cnot { control, target } => {
            let dim = 1 << n;
            let mut m = Mat::zeros(dim, dim);
            for col in 0..dim {
                let row = if bit(col, n, control) == 1 {
                    col ^ (1 << (n - 1 - target))
                } else {
                    col
                };
                m[(row, col)] = ONE;
            }
            m
        }
    }
}

/// `U` such that the sequence acts as `P -> U† P U`.
pub fn sequence_unitary(n: usize, seq: &GateSequence) -> Mat {
    seq.gates
        .iter()
        .fold(Mat::identity(1 << n, 1 << n), |u, g| u * gate_matrix(n, g))
}

pub fn conjugate_dense(n: usize, seq: &GateSequence, m: &Mat) -> Mat {
    let u = sequence_unitary(n, seq);
    u.adjoint() * m * u
}

pub fn hamiltonian_matrix(h: &QubitHamiltonian) -> Mat {
    let dim = 1 << h.n_qubits();
    let mut m = Mat::zeros(dim, dim);
    for (p, coeff) in h.terms() {
        m += pauli_string_matrix(p) * c(*coeff, 0.0);
    }
    m
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Annihilation operator on the occupation basis, occupied = |1>, with the
/// sign `(-1)^(occupied modes before j)`.
pub fn annihilation(n_modes: usize, j: usize) -> Mat {
    let dim = 1 << n_modes;
    let mut m = Mat::zeros(dim, dim);
    for col in 0..dim {
        if bit(col, n_modes, j) == 0 {
            continue;
        }
        let parity = (0..j).filter(|&i| bit(col, n_modes, i) == 1).count();
        let row = col ^ (1 << (n_modes - 1 - j));
        m[(row, col)] = if parity % 2 == 0 { ONE } else { -ONE };
    }
    m
}

pub fn fermion_matrix(f: &FermionOperator) -> Mat {
    let n = f.n_modes();
    let dim = 1 << n;
    let lowers: Vec<Mat> = (0..n).map(|j| annihilation(n, j)).collect();
    let mut total = Mat::zeros(dim, dim);
    for term in f.terms() {
        let mut prod = Mat::identity(dim, dim);
        for op in &term.ops {
            let a = &lowers[op.mode];
            prod = if op.dagger {
                prod * a.adjoint()
            } else {
                prod * a
            };
        }
        total += prod * term.coefficient;
    }
    total
}

pub fn is_hermitian(m: &Mat, tol: f64) -> bool {
    max_abs_diff(m, &m.adjoint()) <= tol
}

pub fn eigenvalues(m: &Mat) -> Vec<f64> {
    let mut v: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn same_spectrum(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Expands a Hermitian matrix on `n` qubits in the Pauli basis.
pub fn pauli_decompose(n: usize, m: &Mat) -> Vec<(String, Complex64)> {
    let dim = (1usize << n) as f64;
    let mut out = Vec::new();
    for code in 0..(1usize << (2 * n)) {
        let letters: String = (0..n)
            .map(|q| ['I', 'X', 'Y', 'Z'][(code >> (2 * (n - 1 - q))) & 3])
            .collect();
        let coeff = (pauli_matrix(&letters) * m).trace() / c(dim, 0.0);
        if coeff.norm() > 1e-12 {
            out.push((letters, coeff));
        }
    }
    out
}

pub fn random_letters(rng: &mut impl Rng, n: usize) -> String {
    (0..n)
        .map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)])
        .collect()
}

pub fn random_gate(rng: &mut impl Rng, n: usize) -> CliffordGate {
    let kind = if n < 2 {
        rng.random_range(0..2)
    } else {
        rng.random_range(0..3)
    };
    match kind {
        0 => CliffordGate::H(rng.random_range(0..n)),
        1 => CliffordGate::S(rng.random_range(0..n)),
        _ => {
            let control = rng.random_range(0..n);
            let mut target = rng.random_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            CliffordGate::cnot(control, target)
        }
    }
}

pub fn random_sequence(rng: &mut impl Rng, n: usize, max_len: usize) -> GateSequence {
    let len = rng.random_range(0..=max_len);
    GateSequence::new((0..len).map(|_| random_gate(rng, n)).collect())
}

pub fn random_hamiltonian(rng: &mut impl Rng, n: usize, terms: usize) -> QubitHamiltonian {
    let raw: Vec<(f64, String)> = (0..terms)
        .map(|_| (rng.random_range(-2.0..2.0), random_letters(rng, n)))
        .collect();
    let refs: Vec<(f64, &str)> = raw.iter().map(|(c, s)| (*c, s.as_str())).collect();
    QubitHamiltonian::from_letter_terms(n, &refs).unwrap()
}

/// Every gate sequence of length at most `depth` over H, S and CNOT on `k`
/// qubits, with no pruning at all.
pub fn all_sequences(k: usize, depth: usize) -> Vec<GateSequence> {
    let mut alphabet: Vec<CliffordGate> = (0..k).map(CliffordGate::H).collect();
    alphabet.extend((0..k).map(CliffordGate::S));
    for c in 0..k {
        for t in 0..k {
            if c != t {
                alphabet.push(CliffordGate::cnot(c, t));
            }
        }
    }
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for seq in &frontier {
            for g in &alphabet {
                let mut s: Vec<CliffordGate> = seq.clone();
                s.push(*g);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.into_iter().map(GateSequence::new).collect()
}

/// Lowest restricted cost reachable from `view` by brute force over dense
/// conjugation. Each entry contributes its weight times `count` (PW) or its
/// absolute coefficient sum (wPW).
pub fn naive_min_cost(view: &SubsystemView, depth: usize, weighted: bool) -> f64 {
    let k = view.width();
    let words: Vec<(Mat, f64)> = view
        .entries()
        .iter()
        .map(|e| {
            let w = if weighted {
                e.abs_coeff_sum
            } else {
                e.count as f64
            };
            (pauli_string_matrix(&view.entry_word(e)), w)
        })
        .collect();
    let mut best = f64::INFINITY;
    for seq in all_sequences(k, depth) {
        let u = sequence_unitary(k, &seq);
        let ud = u.adjoint();
        let mut cost = 0.0;
        for (m, w) in &words {
            let out = &ud * m * &u;
            let decomposition = pauli_decompose(k, &out);
            assert_eq!(decomposition.len(), 1, "Clifford image is a single Pauli");
            let weight = decomposition[0].0.chars().filter(|&ch| ch != 'I').count();
            cost += weight as f64 * w;
        }
        best = best.min(cost);
    }
    best
}

/// Checks a descent run: non-increasing trajectory, strict drops on
/// acceptance, conserved term count and coefficient magnitudes, and a gate
/// log that replays the input onto the output.
pub fn check_run(
    h0: &QubitHamiltonian,
    cfg: &rsd_core::RsdConfig,
    run: &rsd_core::RsdResult,
) -> Result<(), String> {
    let kind = cfg.cost_kind;
    let mut prev = kind.evaluate(h0);
    for r in &run.trajectory {
        if (r.cost_before - prev).abs() > 1e-9 {
            return Err(format!(
                "iteration {} starts at {} but previous cost was {prev}",
                r.iteration, r.cost_before
            ));
        }
        if r.accepted {
            if r.cost_after >= r.cost_before - kind.margin() {
                return Err(format!(
                    "iteration {} accepted without a strict drop",
                    r.iteration
                ));
            }
        } else if r.cost_after != r.cost_before {
            return Err(format!("iteration {} rejected but cost moved", r.iteration));
        }
        prev = r.cost_after;
    }
    let h = &run.hamiltonian;
    if (kind.evaluate(h) - prev).abs() > 1e-9 {
        return Err("final cost disagrees with trajectory".into());
    }
    if h.len() != h0.len() {
        return Err(format!("term count {} -> {}", h0.len(), h.len()));
    }
    let mut a: Vec<f64> = h0.terms().iter().map(|t| t.1.abs()).collect();
    let mut b: Vec<f64> = h.terms().iter().map(|t| t.1.abs()).collect();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    if a.iter().zip(&b).any(|(x, y)| (x - y).abs() > 1e-12) {
        return Err("coefficient magnitudes changed".into());
    }
    let replay = rsd_core::conjugate_hamiltonian(&run.gates, h0).map_err(|e| e.to_string())?;
    if replay.terms().len() != h.terms().len()
        || replay
            .terms()
            .iter()
            .zip(h.terms())
            .any(|((p, x), (q, y))| p != q || (x - y).abs() > 1e-12)
    {
        return Err("gate log does not reproduce the output".into());
    }
    Ok(())
}
