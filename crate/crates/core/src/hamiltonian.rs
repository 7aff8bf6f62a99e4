//! `H = (a†a) + (N²−1)/4 − ½(a†a†) − ½(aa)` on the cut basis.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock_basis::{BasisAlgebra, CutBasis, GramMatrix};
use crate::linalg::{forward_substitute, ldl, smallest_normalized_eigenvalue, to_f64_matrix, transpose, QMatrix};
use crate::partition::{BrickPoly, Partition};
use crate::rational::{frac, to_f64, Q};
use crate::trace_algebra::{Letter, TraceExpr, TraceWord};

/// The Hamiltonian as a normal-ordered trace expression.
pub fn hamiltonian_operator(n: u32) -> TraceExpr {
    let nn = n as i64;
    let number = TraceWord::new(vec![Letter::Create, Letter::Annihilate]).expect("nonempty");
    TraceExpr::word(n, number)
        .add(&TraceExpr::scalar(n, frac(nn * nn - 1, 4)))
        .add(&TraceExpr::word(n, TraceWord::creation(2)).scale(&frac(-1, 2)))
        .add(&TraceExpr::word(n, TraceWord::annihilation(2)).scale(&frac(-1, 2)))
}

/// `H|p⟩` as a brick polynomial, computed by normal ordering.
pub fn apply_hamiltonian(alg: &BasisAlgebra, p: &Partition) -> Result<BrickPoly> {
    alg.act(&hamiltonian_operator(alg.rank()), p)
}

/// Exact `H[i][j] = ⟨i|H|j⟩` in the cut, plus the coefficient action `M` with `H|j⟩ = Σ_r M[r][j] |r⟩`
/// restricted to rows inside the cut, so that `H = S M`.
#[derive(Clone, Debug)]
pub struct HamiltonianMatrix {
    n: u32,
    ncut: u32,
    h: QMatrix,
    action: QMatrix,
}

impl HamiltonianMatrix {
    pub(crate) fn from_parts(n: u32, ncut: u32, h: QMatrix, action: QMatrix) -> Self {
        HamiltonianMatrix { n, ncut, h, action }
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn ncut(&self) -> u32 {
        self.ncut
    }

    pub fn entries(&self) -> &QMatrix {
        &self.h
    }

    pub fn action(&self) -> &QMatrix {
        &self.action
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.h[i][j] == self.h[j][i]))
    }

    /// The Hamiltonian of a smaller cut, taken as a leading block.
    pub fn leading(&self, k: usize, ncut: u32) -> HamiltonianMatrix {
        let cut = |m: &QMatrix| m[..k].iter().map(|r| r[..k].to_vec()).collect();
        HamiltonianMatrix { n: self.n, ncut, h: cut(&self.h), action: cut(&self.action) }
    }
}

/// Assembles `P H P`: raising images above the cut are dropped.
pub fn hamiltonian_matrix(alg: &BasisAlgebra, basis: &CutBasis, gram: &GramMatrix) -> Result<HamiltonianMatrix> {
    let d = basis.len();
    let mut action = vec![vec![Q::zero(); d]; d];
    for (j, p) in basis.states().iter().enumerate() {
        for (r, c) in apply_hamiltonian(alg, p)?.terms() {
            if let Some(i) = basis.index_of(r) {
                action[i][j] = c.clone();
            }
        }
    }
    let mut h = vec![vec![Q::zero(); d]; d];
    let blocks = basis.blocks();
    for (_, rows) in &blocks {
        for i in rows.clone() {
            for j in 0..d {
                let mut acc = Q::zero();
                for r in rows.clone() {
                    if !action[r][j].is_zero() {
                        acc += gram.get(i, r) * &action[r][j];
                    }
                }
                h[i][j] = acc;
            }
        }
    }
    Ok(HamiltonianMatrix { n: basis.rank(), ncut: basis.ncut(), h, action })
}

/// Eigenpairs of `H c = E S c`, ascending, with `cᵀ S c = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumNumeric {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Solves the generalized problem by an exact congruence: `S = L D Lᵀ`, `K = L⁻¹ H L⁻ᵀ`,
/// then a floating symmetric eigensolve of `D^{-1/2} K D^{-1/2}`.
pub fn solve_spectrum_numeric(h: &HamiltonianMatrix, s: &GramMatrix) -> Result<SpectrumNumeric> {
    let d = h.dim();
    if d == 0 {
        return Ok(SpectrumNumeric { eigenvalues: Vec::new(), eigenvectors: Vec::new() });
    }
    let f = ldl(s.entries())
        .map_err(|index| Error::SingularGram { index, smallest: smallest_normalized_eigenvalue(s.entries()) })?;
    let mut x = h.entries().clone();
    forward_substitute(&f.l, &mut x);
    let mut k = transpose(&x);
    forward_substitute(&f.l, &mut k);
    let scale: Vec<f64> = f.d.iter().map(|v| 1.0 / to_f64(v).sqrt()).collect();
    let c = DMatrix::from_fn(d, d, |i, j| to_f64(&k[i][j]) * scale[i] * scale[j]);
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let lf = to_f64_matrix(&f.l);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut eigenvalues = Vec::with_capacity(d);
    let mut eigenvectors = Vec::with_capacity(d);
    for idx in order {
        eigenvalues.push(eig.eigenvalues[idx]);
        // c = L⁻ᵀ D^{-1/2} y by back substitution
        let mut v: Vec<f64> = (0..d).map(|i| eig.eigenvectors[(i, idx)] * scale[i]).collect();
        for i in (0..d).rev() {
            for r in i + 1..d {
                v[i] -= lf[(r, i)] * v[r];
            }
        }
        eigenvectors.push(v);
    }
    Ok(SpectrumNumeric { eigenvalues, eigenvectors })
}

/// `‖D^{-1/2}(H − E S)c‖ / ‖D^{-1/2} H c‖` with `D = diag(S)`, which removes the
/// factorial growth of the brick norms from the comparison.
pub fn generalized_residual(h: &HamiltonianMatrix, s: &GramMatrix, energy: f64, c: &[f64]) -> f64 {
    let hf = to_f64_matrix(h.entries());
    let sf = to_f64_matrix(s.entries());
    let d = c.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..d {
        let w = 1.0 / sf[(i, i)].sqrt();
        let mut hc = 0.0;
        let mut sc = 0.0;
        for j in 0..d {
            hc += hf[(i, j)] * c[j];
            sc += sf[(i, j)] * c[j];
        }
        num += ((hc - energy * sc) * w).powi(2);
        den += (hc * w).powi(2);
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// `cᵀ S c'`.
pub fn s_inner(s: &GramMatrix, x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..y.len() {
            let v = s.get(i, j);
            if !v.is_zero() {
                acc += x[i] * to_f64(v) * y[j];
            }
        }
    }
    acc
}

/// `⟨0|H|0⟩ = (N²−1)/4`.
pub fn vacuum_energy(n: u32) -> Q {
    let nn = n as i64;
    frac(nn * nn - 1, 4)
}

#[cfg(test)]
fn number_eigenvalue(p: &Partition) -> Q {
    frac(p.quanta() as i64, 2)
}
