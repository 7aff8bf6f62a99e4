//! The `E → 0` limit of the empty-tail continuum state and the suppression of the other families.

use serde::Serialize;

use super::family::{build_family_state, dress_fermionic, solve_mixing_coeffs, AnsatzScope, FamilySolution, StateMode};
use crate::closed_form::{check_fermion_indices, pure_fermionic_subsets, tails, Family};
use crate::error::{Error, Result};
use crate::fock_basis::BasisAlgebra;

/// A family whose plane-wave normalized states pick up `(2E)^exponent` and vanish as `E → 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Suppression {
    pub family: Family,
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VacuumProfile {
    pub state: FamilySolution,
    pub suppressed: Vec<Suppression>,
}

/// Normalizing family `t` like the empty-tail family rescales it by `(2E)^{(γ_t − γ_0)/2}`,
/// so the exponent is `(Σ k p_k + n_B)/2`.
pub fn suppression_exponent(family: &Family) -> f64 {
    0.5 * (family.weight() + family.nb()) as f64
}

/// Vacuum candidate in the sector of the given purely fermionic bricks: `Σ_n L_n^γ(0) |n, 0, …⟩`
/// carried to `max_terms`, plus the suppression exponents of the tails up to `max_tail_weight`.
pub fn vacuum_profile(
    alg: &BasisAlgebra,
    fermions: &[u32],
    max_terms: u32,
    max_tail_weight: u32,
) -> Result<VacuumProfile> {
    let n = alg.rank();
    let ks = check_fermion_indices(n, fermions).map_err(|_| Error::NoVacuum { n, nf: fermions.iter().sum() })?;
    let empty = Family::bosonic(vec![0; (n - 2) as usize]);
    let mix = solve_mixing_coeffs(alg, &empty, AnsatzScope::Componentwise)?;
    let mode = StateMode::Continuum { tol: 0.0, max_terms };
    let state = dress_fermionic(&build_family_state(alg, &empty, 0.0, mode, &mix)?, &ks)?;
    let suppressed = tails(n, max_tail_weight)
        .into_iter()
        .map(Family::bosonic)
        .filter(|f| !f.is_empty_tail())
        .map(|family| Suppression { exponent: suppression_exponent(&family), family })
        .collect();
    Ok(VacuumProfile { state, suppressed })
}

/// Same as [`vacuum_profile`] but by fermion number; the first matching set of bricks is used.
pub fn vacuum_profile_in_sector(
    alg: &BasisAlgebra,
    nf: u32,
    max_terms: u32,
    max_tail_weight: u32,
) -> Result<VacuumProfile> {
    let n = alg.rank();
    let subsets = pure_fermionic_subsets(n, nf);
    let ks = subsets.first().ok_or(Error::NoVacuum { n, nf })?;
    vacuum_profile(alg, ks, max_terms, max_tail_weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sectors_with_vacua() {
        let alg = BasisAlgebra::new(3).unwrap();
        let ok: Vec<u32> = (0..=10).filter(|&nf| vacuum_profile_in_sector(&alg, nf, 8, 6).is_ok()).collect();
        assert_eq!(ok, vec![0, 3, 5, 8]);
        assert!(matches!(vacuum_profile_in_sector(&alg, 4, 8, 6), Err(Error::NoVacuum { n: 3, nf: 4 })));
        assert!(matches!(vacuum_profile(&alg, &[7], 8, 6), Err(Error::NoVacuum { .. })));

        let alg2 = BasisAlgebra::new(2).unwrap();
        let ok: Vec<u32> = (0..=10).filter(|&nf| vacuum_profile_in_sector(&alg2, nf, 8, 6).is_ok()).collect();
        assert_eq!(ok, vec![0, 3]);
    }

    #[test]
    fn nonempty_tails_are_suppressed() {
        let alg = BasisAlgebra::new(4).unwrap();
        let v = vacuum_profile(&alg, &[3, 5], 10, 6).unwrap();
        assert_eq!(v.state.nf(), 8);
        assert_eq!(v.state.coeffs.len(), 10);
        let two_cubes = v.suppressed.iter().find(|s| s.family.tail() == [2, 0]).unwrap();
        assert_eq!(two_cubes.exponent, 3.0);
        assert!(v.suppressed.iter().all(|s| s.exponent > 0.0));
    }
}
