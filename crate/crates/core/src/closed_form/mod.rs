//! Closed-form spectra: every family contributes the zeros of one Laguerre polynomial in `2E`.

mod families;
mod laguerre;

pub(crate) use families::tail_weight;
pub use families::{
    check_fermion_indices, enumerate_families, pure_fermionic_subsets, tails, theta, theta_bosonic, theta_fermionic,
    Brick, BrickLabel, BrickTable, ClosedFormLevel, Degenerate, Family, Sector, SpectrumClosedForm, TableBrick,
    DEDUP_TOLERANCE,
};
pub use laguerre::{
    laguerre_eval, laguerre_eval_with_derivative, laguerre_roots, laguerre_scaled, laguerre_scaled_sequence,
    root_defect, LaguerreSpec,
};
