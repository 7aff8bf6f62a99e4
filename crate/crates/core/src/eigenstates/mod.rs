//! Closed-form eigenvectors, their mixing amplitudes, the recursion relation they solve,
//! continuum overlaps and the zero-energy limit.

mod family;
mod overlap;
mod recursion;
mod vacuum;

pub use family::{
    build_family_state, dress_fermionic, solve_mixing_coeffs, AnsatzScope, FamilySolution, MixingCoeffs, StateMode,
    CONTINUUM_TOL,
};
pub use overlap::{continuum_overlap, ln_bessel_i, overlap_bessel, overlap_epsilon_form, overlap_series};
pub use recursion::{
    describe_form, eval_form, pair_formula_lower, recursion_residual, recursion_residual_all, su3_printed_row,
    su4_printed_row, LoweringRoute, RecursionOperator, Su4Variant,
};
pub use vacuum::{suppression_exponent, vacuum_profile, vacuum_profile_in_sector, Suppression, VacuumProfile};
