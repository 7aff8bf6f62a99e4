//! Exact algebra of single-trace operators built from adjoint creation and annihilation matrices.

mod cayley;
mod expr;
mod text;
mod wick;
mod word;

pub use cayley::CayleyHamilton;
pub use expr::TraceExpr;
pub use text::{parse_expr, parse_written};
pub use wick::{
    apply_to_vacuum, commutator, fierz_contract, normal_order, vacuum_expectation, vacuum_expectation_of,
    OrderedProduct,
};
pub use word::{Letter, TraceWord};
