//! Fermion-to-qubit mapping optimization by randomized subsystem descent.
//!
//! The pipeline is: build a [`FermionOperator`](fermion::FermionOperator),
//! expand it into Majorana monomials, map it to a
//! [`QubitHamiltonian`](pauli::QubitHamiltonian) with one of the
//! [`mappers`], then lower its (weighted) Pauli weight with
//! [`rsd_optimize`](rsd::rsd_optimize), which repeatedly conjugates small
//! qubit subsystems by short H/S/CNOT sequences.

pub mod clifford;
pub mod error;
pub mod fermion;
pub mod mappers;
pub mod models;
pub mod par;
pub mod pauli;
pub mod rsd;
pub mod solver;

pub use clifford::{conjugate_hamiltonian, conjugate_pauli, CliffordGate, GateSequence};
pub use error::{Error, Result};
pub use fermion::{
    anticommutation_check, to_majorana, FermionOperator, LadderOp, MajoranaMonomial,
};
pub use mappers::{
    apply_mapping, bravyi_kitaev, jordan_wigner, map_operator, ternary_tree, Mapper, MappingTable,
};
pub use models::{Boundary, LatticeKind, LatticeSpec};
pub use pauli::{pauli_product, CostKind, PauliString, PhasedPauli, QubitHamiltonian};
pub use rsd::{
    percentage_reduction, rsd_optimize, RsdConfig, RsdResult, SamplerKind, TrajectoryRecord,
};
pub use solver::{apply_to_global, dfs_search, restrict, SolverConfig, SubsystemView};
