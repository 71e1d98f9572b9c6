//! Conjugation of Pauli words and Hamiltonians by H, S and CNOT.
//!
//! Every gate `V` acts as `P -> V† P V`. The symplectic updates, with the
//! sign flip condition evaluated on the input bits, are:
//!
//! * `H_q`: swap `x_q`, `z_q`; flip when the letter is Y.
//! * `S_q`: `z_q ^= x_q`; flip when the letter is X (`S† X S = -Y`).
//! * `CNOT_ct`: `x_t ^= x_c`, `z_c ^= z_t`; flip when
//!   `x_c & z_t & !(x_t ^ z_c)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::par;
use crate::pauli::{PauliString, QubitHamiltonian};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
}

impl CliffordGate {
    pub fn cnot(control: usize, target: usize) -> Self {
        CliffordGate::Cnot { control, target }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q < n_qubits {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange { qubit: q, n_qubits })
            }
        };
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) => check(q),
            CliffordGate::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::DegenerateCnot(control));
                }
                Ok(())
            }
        }
    }

    /// Relabels the gate's qubits through `map` (local index -> global index).
    pub fn relabel(&self, map: &[usize]) -> Self {
        match *self {
            CliffordGate::H(q) => CliffordGate::H(map[q]),
            CliffordGate::S(q) => CliffordGate::S(map[q]),
            CliffordGate::Cnot { control, target } => CliffordGate::Cnot {
                control: map[control],
                target: map[target],
            },
        }
    }

    /// Conjugates `p` in place; returns true when the sign flips.
    ///
    /// Indices must already be validated.
    #[inline]
    pub fn apply(&self, p: &mut PauliString) -> bool {
        let (x, z) = p.limbs_mut();
        match *self {
            CliffordGate::H(q) => {
                let (l, b) = (q / 64, q % 64);
                let xb = (x[l] >> b) & 1;
                let zb = (z[l] >> b) & 1;
                x[l] ^= (xb ^ zb) << b;
                z[l] ^= (xb ^ zb) << b;
                xb & zb == 1
            }
            CliffordGate::S(q) => {
                let (l, b) = (q / 64, q % 64);
                let xb = (x[l] >> b) & 1;
                let zb = (z[l] >> b) & 1;
                z[l] ^= xb << b;
                xb & !zb & 1 == 1
            }
            CliffordGate::Cnot { control, target } => {
                let (lc, bc) = (control / 64, control % 64);
                let (lt, bt) = (target / 64, target % 64);
                let xc = (x[lc] >> bc) & 1;
                let zc = (z[lc] >> bc) & 1;
                let xt = (x[lt] >> bt) & 1;
                let zt = (z[lt] >> bt) & 1;
                x[lt] ^= xc << bt;
                z[lc] ^= zt << bc;
                xc & zt & !(xt ^ zc) & 1 == 1
            }
        }
    }

    fn inverse_into(&self, out: &mut Vec<CliffordGate>) {
        match *self {
            // S^-1 = S^3
            CliffordGate::S(q) => out.extend([CliffordGate::S(q); 3]),
            g => out.push(g),
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliffordGate::H(q) => write!(f, "H {q}"),
            CliffordGate::S(q) => write!(f, "S {q}"),
            CliffordGate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
        }
    }
}

impl FromStr for CliffordGate {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let idx = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad qubit index {s:?} in {line:?}")))
        };
        match parts.as_slice() {
            ["H", q] => Ok(CliffordGate::H(idx(q)?)),
            ["S", q] => Ok(CliffordGate::S(idx(q)?)),
            ["CNOT", c, t] => {
                let (control, target) = (idx(c)?, idx(t)?);
                if control == target {
                    return Err(Error::DegenerateCnot(control));
                }
                Ok(CliffordGate::Cnot { control, target })
            }
            _ => Err(Error::Parse(format!("unrecognised gate line {line:?}"))),
        }
    }
}

/// Ordered gate list; `U = V_1 V_2 ... V_m`, so conjugation applies `V_1` first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GateSequence {
    pub gates: Vec<CliffordGate>,
}

impl GateSequence {
    pub fn new(gates: Vec<CliffordGate>) -> Self {
        Self { gates }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.validate(n_qubits))
    }

    /// The sequence whose conjugation undoes this one.
    pub fn inverse(&self) -> Self {
        let mut out = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            g.inverse_into(&mut out);
        }
        Self { gates: out }
    }

    pub fn relabel(&self, map: &[usize]) -> Self {
        Self {
            gates: self.gates.iter().map(|g| g.relabel(map)).collect(),
        }
    }

    pub fn extend(&mut self, other: &GateSequence) {
        self.gates.extend_from_slice(&other.gates);
    }

    /// Conjugates `p` in place; returns true when the overall sign is negative.
    pub fn apply(&self, p: &mut PauliString) -> bool {
        self.gates.iter().fold(false, |neg, g| neg ^ g.apply(p))
    }

    /// One gate per line: `H q`, `S q`, `CNOT c t`.
    pub fn to_log(&self) -> String {
        let mut s = String::new();
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the gate-log format; blank lines and `#` comments are skipped.
    pub fn from_log(text: &str) -> Result<Self> {
        let gates = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { gates })
    }
}

/// `g† p g` as a word and a sign in {+1, -1}.
pub fn conjugate_pauli(g: &CliffordGate, p: &PauliString) -> Result<(PauliString, i8)> {
    g.validate(p.n_qubits())?;
    let mut out = p.clone();
    let neg = g.apply(&mut out);
    Ok((out, if neg { -1 } else { 1 }))
}

/// `U† H U` for `U` given by `seq`. Term count is preserved.
pub fn conjugate_hamiltonian(seq: &GateSequence, h: &QubitHamiltonian) -> Result<QubitHamiltonian> {
    seq.validate(h.n_qubits())?;
    if seq.is_empty() {
        return Ok(h.clone());
    }
    let terms = par::map(h.terms(), |(p, c)| {
        let mut q = p.clone();
        let neg = seq.apply(&mut q);
        (q, if neg { -c } else { *c })
    });
    Ok(QubitHamiltonian::from_unique_terms(h.n_qubits(), terms))
}
