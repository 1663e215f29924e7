//! Finite-matrix quantum mechanics on a small register.
//!
//! Build oscillator Hamiltonians from discrete position/momentum or ladder
//! operators ([`operators`], [`hamiltonian`]), check their spectra against
//! closed-form energies ([`spectra`]), rewrite them as Pauli sums
//! ([`pauli`]) and estimate ground energies with a variational eigensolver
//! on an exact statevector simulator ([`qsim`], [`vqe`]).

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod hamiltonian;
pub mod matrix_file;
pub mod operators;
pub mod pauli;
pub mod qsim;
pub mod spectra;
pub mod vqe;

pub use error::{Error, Result};
pub use hamiltonian::{Basis, HamiltonianKind, HamiltonianSpec};
pub use operators::{LatticeSpec, OperatorMatrix};
pub use pauli::{PauliString, PauliSum, PauliTerm};
pub use qsim::{AnsatzSpec, Circuit, Gate, QuantumState};
pub use spectra::{ReferenceCurve, Spectrum};
pub use vqe::{VqeConfig, VqeResult};
