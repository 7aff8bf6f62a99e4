//! Closed-form eigenvectors of one family.
//!
//! A family with tail `t` has coefficient `e^{−E} L_n^γ(2E)` on `|n, t⟩` and
//! `e^{−E} A_l L_n^γ(2E)` on `|n + s_l, l⟩` for lower tails `l`, where
//! `s_l = (w_t − w_l)/2` keeps the number of quanta fixed. Plugging this into the
//! recursion leaves `A_l s_l (s_l + γ_l) + Σ_{l'} mix(l' → l) A_{l'} = 0`, with
//! `γ_l` the index of tail `l` and `mix(l' → l)` the constant coefficient of
//! `|q2 + δ, l⟩` in `(aa)|q2, l'⟩`. No energy dependence survives.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::closed_form::{check_fermion_indices, laguerre_scaled_sequence, root_defect, tail_weight, tails, Family};
use crate::error::{Error, Result};
use crate::fock_basis::{BasisAlgebra, CutBasis};
use crate::partition::Partition;
use crate::rational::{adjoint_dim, frac, int, to_f64, to_fraction_string, Q};

/// Which lower tails the ansatz may populate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzScope {
    /// Only tails `t − τ` with `0 ≤ τ_k ≤ t_k`.
    Componentwise,
    /// Every tail of smaller weight with the same parity.
    AllLowerTails,
}

/// Mixing amplitudes `A_l` of one family, keyed by lower tail. Absent tails have `A = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingCoeffs {
    pub family: Family,
    #[serde(serialize_with = "serialize_amplitudes")]
    pub amplitudes: BTreeMap<Vec<u32>, Q>,
}

fn serialize_amplitudes<S: serde::Serializer>(m: &BTreeMap<Vec<u32>, Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for (tail, a) in m {
        seq.serialize_element(&serde_json::json!({"tail": tail, "A": to_fraction_string(a)}))?;
    }
    seq.end()
}

impl MixingCoeffs {
    pub fn get(&self, tail: &[u32]) -> Q {
        self.amplitudes.get(tail).cloned().unwrap_or_else(Q::zero)
    }

    /// `p2` shift of lower tail `l`.
    pub fn shift(&self, tail: &[u32]) -> u32 {
        (self.family.weight() - tail_weight(tail)) / 2
    }
}

fn tail_gamma(n: u32, tail: &[u32], nb: u32) -> Q {
    int((tail_weight(tail) + nb) as i64) + adjoint_dim(n) * frac(1, 2) - int(1)
}

fn within(tail: &[u32], top: &[u32]) -> bool {
    tail.iter().zip(top).all(|(a, b)| a <= b)
}

/// `mix(l' → l)` for every `l` reached from `l'`, read off `(aa)|q2, l'⟩` at `q2 = 0`
/// and checked to be the same at `q2 = 1`, i.e. one cutoff step higher.
fn mixing_row(alg: &BasisAlgebra, from: &[u32], family: &Family) -> Result<BTreeMap<Vec<u32>, Q>> {
    let w_from = tail_weight(from);
    let read = |q2: u32| -> Result<BTreeMap<Vec<u32>, Q>> {
        let img = alg.lower(2, &Partition::from_tail(q2, from))?;
        let mut out = BTreeMap::new();
        for (p, c) in img.terms() {
            if p.tail() == from {
                continue;
            }
            let delta = (w_from - p.tail_weight()) / 2 - 1;
            if p.p2() != q2 + delta {
                return Err(Error::InconsistentAnsatz {
                    family: family.to_string(),
                    detail: format!("(aa) image {p} of tail {from:?} breaks the quanta bookkeeping"),
                });
            }
            out.insert(p.tail().to_vec(), c.clone());
        }
        Ok(out)
    };
    let at0 = read(0)?;
    let at1 = read(1)?;
    if at0 != at1 {
        return Err(Error::InconsistentAnsatz {
            family: family.to_string(),
            detail: format!("mixing from tail {from:?} depends on p2"),
        });
    }
    Ok(at0)
}

/// Solves for the mixing amplitudes of `family` exactly.
pub fn solve_mixing_coeffs(alg: &BasisAlgebra, family: &Family, scope: AnsatzScope) -> Result<MixingCoeffs> {
    let n = alg.rank();
    family.validate(n)?;
    let top = family.tail().to_vec();
    let w_top = family.weight();
    let mut amplitudes: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
    amplitudes.insert(top.clone(), int(1));
    let mut forcing: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
    for (l, c) in mixing_row(alg, &top, family)? {
        *forcing.entry(l).or_insert_with(Q::zero) += c;
    }
    let mut lower: Vec<Vec<u32>> = tails(n, w_top)
        .into_iter()
        .filter(|l| tail_weight(l) < w_top && (w_top - tail_weight(l)).is_multiple_of(2))
        .collect();
    lower.sort_by(|a, b| tail_weight(b).cmp(&tail_weight(a)).then_with(|| a.cmp(b)));
    for l in lower {
        let f = forcing.remove(&l).unwrap_or_else(Q::zero);
        if f.is_zero() {
            continue;
        }
        if scope == AnsatzScope::Componentwise && !within(&l, &top) {
            return Err(Error::InconsistentAnsatz {
                family: family.to_string(),
                detail: format!(
                    "tail {l:?} is forced with strength {} but lies outside the componentwise ansatz",
                    to_fraction_string(&f)
                ),
            });
        }
        let s = int(((w_top - tail_weight(&l)) / 2) as i64);
        let g = tail_gamma(n, &l, family.nb());
        let a = -f / (&s * (&s + g));
        for (l2, c) in mixing_row(alg, &l, family)? {
            *forcing.entry(l2).or_insert_with(Q::zero) += c * &a;
        }
        amplitudes.insert(l, a);
    }
    if let Some((l, f)) = forcing.iter().find(|(_, f)| !f.is_zero()) {
        return Err(Error::InconsistentAnsatz {
            family: family.to_string(),
            detail: format!("tail {l:?} left with unmatched forcing {}", to_fraction_string(f)),
        });
    }
    amplitudes.remove(&top);
    amplitudes.retain(|_, a| !a.is_zero());
    Ok(MixingCoeffs { family: family.clone(), amplitudes })
}

/// How far a state's Laguerre chain is carried.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum StateMode {
    /// Chain length fixed by the cutoff; `E` must be a root.
    Finite { ncut: u32 },
    /// Chain extended until the leading-chain norm increments fall below `tol` of the running norm,
    /// or `max_terms` is hit.
    Continuum { tol: f64, max_terms: u32 },
}

/// Default relative stopping tolerance of the continuum mode.
pub const CONTINUUM_TOL: f64 = 1e-10;

/// A closed-form eigenvector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySolution {
    pub n: u32,
    pub family: Family,
    pub energy: f64,
    pub mode: StateMode,
    /// Laguerre terms kept on the principal chain.
    pub terms: u32,
    /// False when a continuum chain hit `max_terms` before the stopping rule.
    pub converged: bool,
    /// Purely fermionic bricks the state is dressed with.
    pub fermions: Vec<u32>,
    pub coeffs: BTreeMap<Partition, f64>,
}

impl FamilySolution {
    pub fn nf(&self) -> u32 {
        self.fermions.iter().sum()
    }

    /// Coefficients laid out along a cut basis; components outside the basis are dropped.
    pub fn to_basis_vector(&self, basis: &CutBasis) -> Vec<f64> {
        let mut v = vec![0.0; basis.len()];
        for (p, c) in &self.coeffs {
            if let Some(i) = basis.index_of(p) {
                v[i] = *c;
            }
        }
        v
    }
}

/// Builds the family state at energy `E`.
pub fn build_family_state(
    alg: &BasisAlgebra,
    family: &Family,
    energy: f64,
    mode: StateMode,
    mixing: &MixingCoeffs,
) -> Result<FamilySolution> {
    let n = alg.rank();
    family.validate(n)?;
    if mixing.family != *family {
        return Err(Error::InvalidArgument(format!("mixing amplitudes belong to {}, not {family}", mixing.family)));
    }
    if !energy.is_finite() || energy < 0.0 {
        return Err(Error::InvalidArgument(format!("energy must be finite and non-negative, got {energy}")));
    }
    let gamma = family.gamma(n);
    let x = 2.0 * energy;
    let (terms, converged) = match mode {
        StateMode::Finite { ncut } => {
            let spec = family.spec(n, ncut);
            if spec.order == 0 || root_defect(spec, x) > 1e-8 {
                return Err(Error::NotARoot { energy, family: family.to_string() });
            }
            (spec.order, true)
        }
        StateMode::Continuum { tol, max_terms } => continuum_length(gamma, x, tol, max_terms),
    };
    let seq = laguerre_scaled_sequence(terms, gamma, x);
    let damp = (-energy).exp();
    let mut coeffs = BTreeMap::new();
    let mut chains: Vec<(Vec<u32>, u32, f64)> = vec![(family.tail().to_vec(), 0, 1.0)];
    chains.extend(mixing.amplitudes.iter().map(|(l, a)| (l.clone(), mixing.shift(l), to_f64(a))));
    for (tail, shift, amp) in chains {
        for k in 0..terms {
            let p = Partition::from_tail(k + shift, &tail);
            coeffs.insert(p, damp * amp * seq[k as usize]);
        }
    }
    Ok(FamilySolution { n, family: family.clone(), energy, mode, terms, converged, fermions: Vec::new(), coeffs })
}

/// Number of chain terms for the continuum mode, from the principal-chain norm
/// `Σ L_k(x)² k! Γ(k+γ+1)/Γ(γ+1)`.
fn continuum_length(gamma: f64, x: f64, tol: f64, max_terms: u32) -> (u32, bool) {
    // L_k² k! Γ(k+γ+1) = 𝓛_k² k!/Γ(k+γ+1); track r_k = k!/Γ(k+γ+1) · Γ(γ+1)
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    let mut ratio = 1.0f64;
    let mut norm = 0.0f64;
    let mut quiet = 0;
    for k in 0..max_terms {
        let term = cur * cur * ratio;
        norm += term;
        if k > 0 && term.abs() < tol * norm.abs() {
            quiet += 1;
            if quiet >= 3 {
                return (k + 1, true);
            }
        } else {
            quiet = 0;
        }
        let kf = k as f64;
        let next = ((2.0 * kf + gamma + 1.0 - x) * cur - (kf + gamma) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        ratio *= (kf + 1.0) / (kf + gamma + 1.0);
    }
    (max_terms, false)
}

/// Tags a state with purely fermionic bricks. The bosonic profile is unchanged.
pub fn dress_fermionic(state: &FamilySolution, indices: &[u32]) -> Result<FamilySolution> {
    let mut all = state.fermions.clone();
    all.extend_from_slice(indices);
    let fermions = check_fermion_indices(state.n, &all)?;
    Ok(FamilySolution { fermions, ..state.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{laguerre_roots, theta_bosonic};
    use crate::fock_basis::{enumerate_basis, gram_matrix};
    use crate::hamiltonian::{generalized_residual, hamiltonian_matrix, solve_spectrum_numeric};

    fn fam(v: Vec<u32>) -> Family {
        Family::bosonic(v)
    }

    #[test]
    fn empty_tail_has_no_mixing() {
        for n in 2..=5 {
            let alg = BasisAlgebra::new(n).unwrap();
            let zero = vec![0; (n - 2) as usize];
            let m = solve_mixing_coeffs(&alg, &fam(zero), AnsatzScope::Componentwise).unwrap();
            assert!(m.amplitudes.is_empty());
        }
    }

    #[test]
    fn su3_two_cubes() {
        let alg = BasisAlgebra::new(3).unwrap();
        let m = solve_mixing_coeffs(&alg, &fam(vec![2]), AnsatzScope::Componentwise).unwrap();
        assert_eq!(m.get(&[0]), frac(-1, 24));
        assert_eq!(m.shift(&[0]), 3);
    }

    #[test]
    fn su4_two_cubes() {
        let alg = BasisAlgebra::new(4).unwrap();
        let all = solve_mixing_coeffs(&alg, &fam(vec![2, 0]), AnsatzScope::AllLowerTails).unwrap();
        assert_eq!(all.get(&[0, 1]), frac(-9, 23));
        assert_eq!(all.get(&[0, 0]), frac(243, 1748));
        assert!(matches!(
            solve_mixing_coeffs(&alg, &fam(vec![2, 0]), AnsatzScope::Componentwise),
            Err(Error::InconsistentAnsatz { .. })
        ));
    }

    #[test]
    fn amplitudes_match_numeric_eigenvector_ratios() {
        for (n, tail, ncut) in [(3u32, vec![2u32], 10u32), (4, vec![2, 0], 10)] {
            let alg = BasisAlgebra::new(n).unwrap();
            let b = enumerate_basis(n, ncut).unwrap();
            let s = gram_matrix(&alg, &b).unwrap();
            let h = hamiltonian_matrix(&alg, &b, &s).unwrap();
            let sp = solve_spectrum_numeric(&h, &s).unwrap();
            let f = fam(tail.clone());
            let mix = solve_mixing_coeffs(&alg, &f, AnsatzScope::AllLowerTails).unwrap();
            let root = laguerre_roots(f.spec(n, ncut))[0] / 2.0;
            let k = sp.eigenvalues.iter().position(|e| (e - root).abs() < 1e-9).unwrap();
            let c = &sp.eigenvectors[k];
            let lead = c[b.index_of(&Partition::from_tail(0, &tail)).unwrap()];
            for (l, a) in &mix.amplitudes {
                let got = c[b.index_of(&Partition::from_tail(mix.shift(l), l)).unwrap()] / lead;
                assert!((got - to_f64(a)).abs() < 1e-9, "N={n} tail {l:?}: {got} vs {a}");
            }
        }
    }

    #[test]
    fn family_states_solve_the_cut_problem() {
        let n = 4;
        let ncut = 10;
        let alg = BasisAlgebra::new(n).unwrap();
        let b = enumerate_basis(n, ncut).unwrap();
        let s = gram_matrix(&alg, &b).unwrap();
        let h = hamiltonian_matrix(&alg, &b, &s).unwrap();
        for lvl in theta_bosonic(n, ncut).unwrap().entries {
            let mix = solve_mixing_coeffs(&alg, &lvl.family, AnsatzScope::AllLowerTails).unwrap();
            let st = build_family_state(&alg, &lvl.family, lvl.energy, StateMode::Finite { ncut }, &mix).unwrap();
            let v = st.to_basis_vector(&b);
            assert!(generalized_residual(&h, &s, lvl.energy, &v) < 1e-8, "{} at {}", lvl.family, lvl.energy);
        }
    }

    #[test]
    fn off_root_is_rejected() {
        let alg = BasisAlgebra::new(3).unwrap();
        let f = fam(vec![0]);
        let mix = solve_mixing_coeffs(&alg, &f, AnsatzScope::Componentwise).unwrap();
        assert!(matches!(
            build_family_state(&alg, &f, 1.0, StateMode::Finite { ncut: 2 }, &mix),
            Err(Error::NotARoot { .. })
        ));
        let e = (5.0 - 5f64.sqrt()) / 2.0;
        let st = build_family_state(&alg, &f, e, StateMode::Finite { ncut: 2 }, &mix).unwrap();
        assert_eq!(st.coeffs.len(), 2);
        let ratio = st.coeffs[&Partition::from_tail(1, &[0])] / st.coeffs[&Partition::from_tail(0, &[0])];
        // L_1/L_0 = (γ+1−x)/(γ+1) with γ = 3
        assert!((ratio - (4.0 - 2.0 * e) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn continuum_vacuum_profile() {
        let alg = BasisAlgebra::new(3).unwrap();
        let f = fam(vec![0]);
        let mix = solve_mixing_coeffs(&alg, &f, AnsatzScope::Componentwise).unwrap();
        let st = build_family_state(&alg, &f, 0.0, StateMode::Continuum { tol: CONTINUUM_TOL, max_terms: 40 }, &mix)
            .unwrap();
        assert!(!st.converged);
        // L_k(0) = 1/(k! Γ(γ+1)) with γ = 3
        let mut fact = 1.0;
        for k in 0..40u32 {
            if k > 0 {
                fact *= k as f64;
            }
            let want = 1.0 / (fact * 6.0);
            let got = st.coeffs[&Partition::from_tail(k, &[0])];
            assert!((got - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn dressing() {
        let alg = BasisAlgebra::new(3).unwrap();
        let f = fam(vec![0]);
        let mix = solve_mixing_coeffs(&alg, &f, AnsatzScope::Componentwise).unwrap();
        let st = build_family_state(&alg, &f, 2.0, StateMode::Finite { ncut: 0 }, &mix).unwrap();
        assert_eq!(dress_fermionic(&st, &[]).unwrap(), st);
        let d = dress_fermionic(&st, &[3]).unwrap();
        assert_eq!(d.nf(), 3);
        assert_eq!(d.coeffs, st.coeffs);
        assert_eq!(dress_fermionic(&st, &[5, 3]).unwrap().nf(), 8);
        assert!(matches!(dress_fermionic(&d, &[3]), Err(Error::InvalidDressing(_))));
        assert!(matches!(dress_fermionic(&st, &[3, 3]), Err(Error::InvalidDressing(_))));
    }
}
