//! The recursion relation for the coefficients `c_p` of `Σ_p c_p |p⟩`.
//!
//! Row `p` reads
//! `c_{p−e2} − (Σ k p_k + ½(N²−1) − 2E) c_p + Σ_q c_q [(aa)|q⟩]_p`,
//! which is `−2 [(H − E)ψ]_p` in the brick basis. Coefficients above the cut are zero.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::Result;
use crate::fock_basis::{BasisAlgebra, CutBasis};
use crate::partition::{BrickPoly, Partition};
use crate::rational::{adjoint_dim, frac, int, to_f64, Q};
use crate::trace_algebra::CayleyHamilton;

/// How `(aa)|q⟩` is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoweringRoute {
    /// Normal ordering through the Wick engine.
    Engine,
    /// The closed two-brick contraction formula.
    PairFormula,
}

/// `(aa)|p⟩` from the contraction formula: every brick `(a†^n)` contributes
/// `R_n = (n/4) Σ_{t=0}^{n−2} (a†^t)(a†^{n−2−t}) − n(n−1)/(4N) (a†^{n−2})`
/// and every unordered pair of bricks `(n, m)` contributes
/// `(nm/2) [(a†^{n+m−2}) − (1/N)(a†^{n−1})(a†^{m−1})]`, each times the remaining bricks.
pub fn pair_formula_lower(ch: &CayleyHamilton, p: &Partition) -> BrickPoly {
    let n = ch.rank();
    let nn = n as i64;
    let pw = |k: u32| ch.power_sum(k as usize);
    let mut out = BrickPoly::zero(n);
    for k in 2..=n {
        let mult = p.get(k);
        if mult == 0 {
            continue;
        }
        let rest = p.shifted(k, -1).expect("brick present");
        let ki = k as i64;
        let mut r = pw(k - 2).scaled(&frac(-ki * (ki - 1), 4 * nn));
        for t in 0..=k - 2 {
            r.add_scaled(&pw(t).mul(&pw(k - 2 - t)), &frac(ki, 4));
        }
        out.add_scaled(&r.mul_partition(&rest), &int(mult as i64));

        for l in k..=n {
            let pairs = if l == k { mult as i64 * (mult as i64 - 1) / 2 } else { mult as i64 * p.get(l) as i64 };
            if pairs == 0 {
                continue;
            }
            let rest = rest.shifted(l, -1).expect("brick present");
            let li = l as i64;
            let mut pair = pw(k + l - 2);
            pair.add_scaled(&pw(k - 1).mul(&pw(l - 1)), &frac(-1, nn));
            out.add_scaled(&pair.mul_partition(&rest), &frac(ki * li * pairs, 2));
        }
    }
    out
}

/// The recursion relation on one cut basis, with `(aa)` stored column by column.
#[derive(Clone, Debug)]
pub struct RecursionOperator {
    n: u32,
    ncut: u32,
    states: Vec<Partition>,
    index: HashMap<Partition, usize>,
    lowering: Vec<Vec<(usize, Q)>>,
}

impl RecursionOperator {
    pub fn new(alg: &BasisAlgebra, basis: &CutBasis, route: LoweringRoute) -> Result<Self> {
        let states = basis.states().to_vec();
        let index: HashMap<Partition, usize> = states.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut lowering = Vec::with_capacity(states.len());
        for q in &states {
            let img = match route {
                LoweringRoute::Engine => alg.lower(2, q)?,
                LoweringRoute::PairFormula => pair_formula_lower(alg.cayley_hamilton(), q),
            };
            let mut col: Vec<(usize, Q)> = img.terms().iter().map(|(r, c)| (index[r], c.clone())).collect();
            col.sort_by_key(|(i, _)| *i);
            lowering.push(col);
        }
        Ok(RecursionOperator { n: basis.rank(), ncut: basis.ncut(), states, index, lowering })
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn ncut(&self) -> u32 {
        self.ncut
    }

    pub fn states(&self) -> &[Partition] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// A row is interior when every coefficient it involves lies inside the cut.
    pub fn is_interior(&self, i: usize) -> bool {
        self.states[i].quanta() + 2 <= self.ncut
    }

    /// `[(aa)|q⟩]_p` for all `p`, as sparse columns indexed like the basis.
    pub fn lowering(&self) -> &[Vec<(usize, Q)>] {
        &self.lowering
    }

    /// Row `p` as a linear form in the coefficients, leaving out the `+2E c_p` term.
    pub fn row_form(&self, i: usize) -> BTreeMap<Partition, Q> {
        let p = &self.states[i];
        let mut form = BTreeMap::new();
        if let Some(down) = p.shifted(2, -1) {
            form.insert(down, int(1));
        }
        form.insert(p.clone(), -(int(p.quanta() as i64) + adjoint_dim(self.n) * frac(1, 2)));
        for (j, col) in self.lowering.iter().enumerate() {
            for (r, c) in col {
                if *r == i {
                    *form.entry(self.states[j].clone()).or_insert_with(Q::zero) += c;
                }
            }
        }
        form.retain(|_, c| !c.is_zero());
        form
    }

    fn diagonal(&self, i: usize) -> f64 {
        self.states[i].quanta() as f64 + 0.5 * (self.n * self.n - 1) as f64
    }

    /// All rows in floating point.
    pub fn rows(&self, coeffs: &[f64], energy: f64) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d];
        for i in 0..d {
            let p = &self.states[i];
            let down = p.shifted(2, -1).map(|q| coeffs[self.index[&q]]).unwrap_or(0.0);
            out[i] = down - (self.diagonal(i) - 2.0 * energy) * coeffs[i];
        }
        for (j, col) in self.lowering.iter().enumerate() {
            if coeffs[j] == 0.0 {
                continue;
            }
            for (r, c) in col {
                out[*r] += to_f64(c) * coeffs[j];
            }
        }
        out
    }

    /// All rows in exact arithmetic.
    pub fn rows_exact(&self, coeffs: &[Q], energy: &Q) -> Vec<Q> {
        let d = self.dim();
        let half_adj = adjoint_dim(self.n) * frac(1, 2);
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            let p = &self.states[i];
            let down = p.shifted(2, -1).map(|q| coeffs[self.index[&q]].clone()).unwrap_or_else(Q::zero);
            let diag = int(p.quanta() as i64) + &half_adj - energy * int(2);
            out.push(down - diag * &coeffs[i]);
        }
        for (j, col) in self.lowering.iter().enumerate() {
            if coeffs[j].is_zero() {
                continue;
            }
            for (r, c) in col {
                out[*r] += c * &coeffs[j];
            }
        }
        out
    }
}

/// Largest absolute row value over the interior rows.
pub fn recursion_residual(op: &RecursionOperator, coeffs: &[f64], energy: f64) -> f64 {
    op.rows(coeffs, energy)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| op.is_interior(*i))
        .fold(0.0, |acc, (_, v)| acc.max(v.abs()))
}

/// Largest absolute row value over every row of the cut.
pub fn recursion_residual_all(op: &RecursionOperator, coeffs: &[f64], energy: f64) -> f64 {
    op.rows(coeffs, energy).into_iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// The SU(4) coefficient of `c_{p2−1,p3,p4+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Su4Variant {
    /// As printed: `5 p3(p4+1) − 3/2 + 3 p4(p4+1) + 13/4 (p4+1)`.
    Printed,
    /// As derived from the contraction formula: `7/2 p3(p4+1) + 3 p4(p4+1) + 29/4 (p4+1)`.
    Corrected,
}

fn put(form: &mut BTreeMap<Partition, Q>, p: &[i64], c: Q) {
    if p.iter().all(|&v| v >= 0) && !c.is_zero() {
        let p = Partition::from_tail(p[0] as u32, &p[1..].iter().map(|&v| v as u32).collect::<Vec<_>>());
        *form.entry(p).or_insert_with(Q::zero) += c;
    }
}

/// The hand-written SU(3) recursion at `(p2, p3)`, without the `+2E c_p` term:
/// `c_{p2−1,p3} − (2p2+3p3+4) c + (p2+1)(p2+3p3+4) c_{p2+1,p3} + 3/8 (p3+1)(p3+2) c_{p2−2,p3+2}`.
pub fn su3_printed_row(p2: u32, p3: u32) -> BTreeMap<Partition, Q> {
    let (a, b) = (p2 as i64, p3 as i64);
    let mut f = BTreeMap::new();
    put(&mut f, &[a - 1, b], int(1));
    put(&mut f, &[a, b], -int(2 * a + 3 * b + 4));
    put(&mut f, &[a + 1, b], int((a + 1) * (a + 3 * b + 4)));
    put(&mut f, &[a - 2, b + 2], frac(3 * (b + 1) * (b + 2), 8));
    f
}

/// The hand-written SU(4) recursion at `(p2, p3, p4)`, without the `+2E c_p` term.
pub fn su4_printed_row(p2: u32, p3: u32, p4: u32, variant: Su4Variant) -> BTreeMap<Partition, Q> {
    let (a, b, c) = (p2 as i64, p3 as i64, p4 as i64);
    let w = int(2 * a + 3 * b + 4 * c) + frac(15, 2);
    let mut f = BTreeMap::new();
    put(&mut f, &[a - 1, b, c], int(1));
    put(&mut f, &[a, b, c], -w.clone());
    put(&mut f, &[a + 1, b, c], int(a + 1) * (int(a + 3 * b + 4 * c) + frac(15, 2)));
    let up4 = match variant {
        Su4Variant::Printed => int(5 * b * (c + 1)) - frac(3, 2) + int(3 * c * (c + 1)) + frac(13 * (c + 1), 4),
        Su4Variant::Corrected => frac(7 * b * (c + 1), 2) + int(3 * c * (c + 1)) + frac(29 * (c + 1), 4),
    };
    put(&mut f, &[a - 1, b, c + 1], up4);
    put(&mut f, &[a, b - 2, c + 2], frac((c + 1) * (c + 2), 3));
    put(&mut f, &[a - 3, b, c + 2], frac(-(c + 1) * (c + 2), 2));
    put(&mut f, &[a, b + 2, c - 1], frac(9 * (b + 1) * (b + 2), 4));
    put(&mut f, &[a - 2, b + 2, c], frac(-9 * (b + 1) * (b + 2), 16));
    f
}

/// Evaluates a linear row form on coefficients given by partition.
pub fn eval_form(form: &BTreeMap<Partition, Q>, coeff: impl Fn(&Partition) -> Q) -> Q {
    form.iter().fold(Q::zero(), |acc, (p, c)| acc + c * coeff(p))
}

/// A row form, with its partitions shown as tuples, for reports.
pub fn describe_form(form: &BTreeMap<Partition, Q>) -> String {
    let parts: Vec<String> =
        form.iter().map(|(p, c)| format!("{}*c{}", crate::rational::to_fraction_string(c), p)).collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::laguerre_scaled_sequence;
    use crate::fock_basis::enumerate_basis;
    use crate::fock_basis::gram_matrix;
    use crate::hamiltonian::{hamiltonian_matrix, solve_spectrum_numeric};

    fn operator(n: u32, ncut: u32, route: LoweringRoute) -> (BasisAlgebra, CutBasis, RecursionOperator) {
        let alg = BasisAlgebra::new(n).unwrap();
        let b = enumerate_basis(n, ncut).unwrap();
        let op = RecursionOperator::new(&alg, &b, route).unwrap();
        (alg, b, op)
    }

    #[test]
    fn pair_formula_matches_engine() {
        for (n, ncut) in [(2, 10), (3, 10), (4, 10), (5, 9), (6, 8)] {
            let alg = BasisAlgebra::new(n).unwrap();
            for p in enumerate_basis(n, ncut).unwrap().states() {
                assert_eq!(pair_formula_lower(alg.cayley_hamilton(), p), alg.lower(2, p).unwrap(), "N={n} p={p}");
            }
        }
    }

    #[test]
    fn brick_self_contractions() {
        let ch = CayleyHamilton::new(4);
        let b = |v: Vec<u32>| Partition::new(4, v).unwrap();
        assert_eq!(pair_formula_lower(&ch, &b(vec![1, 0, 0])).coeff(&b(vec![0, 0, 0])), frac(15, 2));
        assert!(pair_formula_lower(&ch, &b(vec![0, 1, 0])).is_zero());
        assert_eq!(pair_formula_lower(&ch, &b(vec![0, 0, 1])).coeff(&b(vec![1, 0, 0])), frac(29, 4));
    }

    #[test]
    fn su3_rows_match_printed() {
        let (_, _, op) = operator(3, 14, LoweringRoute::Engine);
        for i in 0..op.dim() {
            if !op.is_interior(i) {
                continue;
            }
            let p = &op.states()[i];
            assert_eq!(op.row_form(i), su3_printed_row(p.get(2), p.get(3)), "row {p}");
        }
    }

    #[test]
    fn su4_rows_match_corrected_only() {
        let (_, _, op) = operator(4, 12, LoweringRoute::Engine);
        let mut printed_mismatch = 0;
        for i in 0..op.dim() {
            if !op.is_interior(i) {
                continue;
            }
            let p = &op.states()[i];
            let (a, b, c) = (p.get(2), p.get(3), p.get(4));
            assert_eq!(op.row_form(i), su4_printed_row(a, b, c, Su4Variant::Corrected), "row {p}");
            if op.row_form(i) != su4_printed_row(a, b, c, Su4Variant::Printed) {
                printed_mismatch += 1;
            }
        }
        assert!(printed_mismatch > 0);
    }

    #[test]
    fn numeric_eigenvectors_satisfy_rows() {
        let (alg, b, op) = operator(3, 10, LoweringRoute::PairFormula);
        let s = gram_matrix(&alg, &b).unwrap();
        let h = hamiltonian_matrix(&alg, &b, &s).unwrap();
        let sp = solve_spectrum_numeric(&h, &s).unwrap();
        for (e, c) in sp.eigenvalues.iter().zip(&sp.eigenvectors) {
            let m = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let c: Vec<f64> = c.iter().map(|v| v / m).collect();
            assert!(recursion_residual_all(&op, &c, *e) < 1e-9);
        }
        assert_eq!(recursion_residual(&op, &vec![0.0; op.dim()], 1.3), 0.0);
    }

    #[test]
    fn empty_tail_laguerre_profile() {
        // off-root energy: interior rows vanish, the top row carries the quantization defect
        let (_, b, op) = operator(3, 6, LoweringRoute::Engine);
        let energy = 1.7;
        let seq = laguerre_scaled_sequence(4, 3.0, 2.0 * energy);
        let mut c = vec![0.0; b.len()];
        for k in 0..4u32 {
            c[b.index_of(&Partition::from_tail(k, &[0])).unwrap()] = seq[k as usize];
        }
        assert!(recursion_residual(&op, &c, energy) < 1e-14);
        let rows = op.rows(&c, energy);
        let top = b.index_of(&Partition::from_tail(3, &[0])).unwrap();
        // top row = −4 (3+γ+1) L_4 with γ = 3
        assert!((rows[top] + 4.0 * 7.0 * seq[4]).abs() < 1e-14);
    }

    #[test]
    fn exact_rows_on_random_vectors() {
        use rand::{Rng, SeedableRng};
        let (_, _, op) = operator(4, 10, LoweringRoute::Engine);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let coeffs: Vec<Q> = (0..op.dim()).map(|_| frac(rng.gen_range(-50..50), rng.gen_range(1..9))).collect();
        let energy = frac(7, 3);
        let rows = op.rows_exact(&coeffs, &energy);
        for i in 0..op.dim() {
            let p = &op.states()[i];
            let form = op.row_form(i);
            let lookup = |q: &Partition| op.states().iter().position(|s| s == q).map(|j| coeffs[j].clone()).unwrap();
            let expect = eval_form(&form, lookup) + &energy * int(2) * &coeffs[i];
            assert_eq!(rows[i], expect, "row {p}");
        }
    }
}
