//! Benchmark fermionic Hamiltonians: range-r hopping chains, square-grid
//! hopping and the square-lattice Hubbard model.
//!
//! Sites on a grid are numbered row-major. Hubbard modes interleave spin,
//! `mode = 2 * site + σ`. Periodic boundaries add one bond per site and
//! direction, so a side length of 2 doubles every bond.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{FermionOperator, LadderOp};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::Parse(format!("unknown boundary {other:?}"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    ChainHopping,
    AllToAll,
    GridHopping,
    Hubbard,
}

/// Parameters of one benchmark model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    /// Chain length, or grid side length.
    pub sites: usize,
    /// Hopping range for chains.
    pub range: usize,
    pub t_hop: f64,
    pub u_int: f64,
    pub boundary: Boundary,
}

impl LatticeSpec {
    pub fn chain(sites: usize, range: usize) -> Self {
        Self {
            kind: LatticeKind::ChainHopping,
            sites,
            range,
            t_hop: 1.0,
            u_int: 4.0,
            boundary: Boundary::Open,
        }
    }

    pub fn all_to_all(sites: usize) -> Self {
        Self {
            kind: LatticeKind::AllToAll,
            range: sites.saturating_sub(1),
            ..Self::chain(sites, 1)
        }
    }

    pub fn grid(side: usize) -> Self {
        Self {
            kind: LatticeKind::GridHopping,
            ..Self::chain(side, 1)
        }
    }

    pub fn hubbard(side: usize, t_hop: f64, u_int: f64) -> Self {
        Self {
            kind: LatticeKind::Hubbard,
            t_hop,
            u_int,
            ..Self::chain(side, 1)
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn build(&self) -> Result<FermionOperator> {
        match self.kind {
            LatticeKind::ChainHopping => build_chain_hopping(self.sites, self.range, self.boundary),
            LatticeKind::AllToAll => {
                build_chain_hopping(self.sites, self.sites.saturating_sub(1), self.boundary)
            }
            LatticeKind::GridHopping => build_grid_hopping(self.sites, self.boundary),
            LatticeKind::Hubbard => {
                build_hubbard(self.sites, self.t_hop, self.u_int, self.boundary)
            }
        }
    }
}

fn hop(f: &mut FermionOperator, coefficient: f64, i: usize, j: usize) -> Result<()> {
    f.push_real(
        coefficient,
        vec![LadderOp::create(i), LadderOp::annihilate(j)],
    )
}

/// Undirected chain bonds `(i, j)` with `i < j`.
fn chain_bonds(n: usize, range: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    match boundary {
        Boundary::Open => (0..n)
            .flat_map(|i| (i + 1..n.min(i + range + 1)).map(move |j| (i, j)))
            .collect(),
        Boundary::Periodic => (1..=range)
            .flat_map(|d| (0..n).map(move |i| (i, (i + d) % n)))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect(),
    }
}

/// Undirected nearest-neighbour bonds of a row-major `side × side` grid.
fn grid_bonds(side: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut bonds = Vec::new();
    let site = |r: usize, c: usize| r * side + c;
    for r in 0..side {
        for c in 0..side {
            match boundary {
                Boundary::Open => {
                    if c + 1 < side {
                        bonds.push((site(r, c), site(r, c + 1)));
                    }
                    if r + 1 < side {
                        bonds.push((site(r, c), site(r + 1, c)));
                    }
                }
                Boundary::Periodic => {
                    bonds.push((site(r, c), site(r, (c + 1) % side)));
                    bonds.push((site(r, c), site((r + 1) % side, c)));
                }
            }
        }
    }
    bonds
}

/// `Σ_{0 < |i-j| ≤ r} a_i† a_j`, one term per ordered pair.
pub fn build_chain_hopping(n: usize, range: usize, boundary: Boundary) -> Result<FermionOperator> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "chain needs at least 2 sites, got {n}"
        )));
    }
    if range == 0 || range > n - 1 {
        return Err(Error::InvalidConfig(format!(
            "hopping range {range} outside 1..={} for {n} sites",
            n - 1
        )));
    }
    let mut f = FermionOperator::new(n);
    for (i, j) in chain_bonds(n, range, boundary) {
        hop(&mut f, 1.0, i, j)?;
        hop(&mut f, 1.0, j, i)?;
    }
    Ok(f)
}

/// Nearest-neighbour hopping `Σ_<i,j> a_i† a_j` on a `side × side` grid.
pub fn build_grid_hopping(side: usize, boundary: Boundary) -> Result<FermionOperator> {
    if side < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid side must be at least 2, got {side}"
        )));
    }
    let mut f = FermionOperator::new(side * side);
    for (i, j) in grid_bonds(side, boundary) {
        hop(&mut f, 1.0, i, j)?;
        hop(&mut f, 1.0, j, i)?;
    }
    Ok(f)
}

/// `-t Σ_<i,j>,σ (a_iσ† a_jσ + h.c.) + U Σ_i n_i↑ n_i↓` on a `side × side` grid.
pub fn build_hubbard(
    side: usize,
    t_hop: f64,
    u_int: f64,
    boundary: Boundary,
) -> Result<FermionOperator> {
    if side < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid side must be at least 2, got {side}"
        )));
    }
    if !t_hop.is_finite() || !u_int.is_finite() {
        return Err(Error::NonFinite("Hubbard parameters".into()));
    }
    let n_sites = side * side;
    let mut f = FermionOperator::new(2 * n_sites);
    for (i, j) in grid_bonds(side, boundary) {
        for spin in 0..2 {
            let (a, b) = (2 * i + spin, 2 * j + spin);
            hop(&mut f, -t_hop, a, b)?;
            hop(&mut f, -t_hop, b, a)?;
        }
    }
    if u_int != 0.0 {
        for s in 0..n_sites {
            let (up, down) = (2 * s, 2 * s + 1);
            f.push_real(
                u_int,
                vec![
                    LadderOp::create(up),
                    LadderOp::annihilate(up),
                    LadderOp::create(down),
                    LadderOp::annihilate(down),
                ],
            )?;
        }
    }
    Ok(f)
}

/// Reads a fermionic interchange file, validating mode bounds and finiteness.
pub fn load_fermion_file(path: impl AsRef<Path>) -> Result<FermionOperator> {
    FermionOperator::load(path)
}
