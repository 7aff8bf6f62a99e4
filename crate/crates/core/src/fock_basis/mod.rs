//! The cut gauge-invariant bosonic Fock basis, its Gram matrix and a dense oscillator oracle.

mod algebra;
mod basis;
mod gram;
mod oracle;

pub use algebra::BasisAlgebra;
pub use basis::{enumerate_basis, state_expr, CutBasis};
pub use gram::{gram_entry_direct, gram_matrix, GramMatrix};
pub use oracle::{generators, inner, oracle_inner_product, DenseOracle, OracleState};
