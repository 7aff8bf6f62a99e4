//! Cut Fock space solver for two-dimensional SU(N) supersymmetric Yang-Mills quantum mechanics.
//!
//! The bosonic gauge-invariant states are products of the bricks `tr(a†^k)`, `2 ≤ k ≤ N`.
//! [`trace_algebra`] normal orders products of traces exactly, [`fock_basis`] builds the
//! cut basis and its Gram matrix, [`hamiltonian`] assembles and diagonalizes the cut
//! Hamiltonian, [`closed_form`] evaluates the Laguerre quantization conditions and
//! [`eigenstates`] builds the matching eigenvectors.

pub mod cli;
pub mod closed_form;
pub mod eigenstates;
pub mod error;
pub mod fock_basis;
pub mod hamiltonian;
pub mod linalg;
pub mod partition;
pub mod rational;
pub mod report;
pub mod solver;
pub mod trace_algebra;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{BrickPoly, Partition};
