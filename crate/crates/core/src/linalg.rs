//! Exact and floating dense linear algebra on small matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{to_f64, Q};

pub type QMatrix = Vec<Vec<Q>>;

pub fn to_f64_matrix(m: &QMatrix) -> DMatrix<f64> {
    let r = m.len();
    let c = m.first().map_or(0, |row| row.len());
    DMatrix::from_fn(r, c, |i, j| to_f64(&m[i][j]))
}

/// Exact rank: rows are cleared of denominators, then Bareiss elimination runs on integers.
pub fn exact_rank(m: &QMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// `S = L D Lᵀ` with unit lower-triangular `L`.
#[derive(Clone, Debug)]
pub struct Ldl {
    pub l: QMatrix,
    pub d: Vec<Q>,
}

/// Exact `LDLᵀ`. Returns the index of the first non-positive pivot on failure.
pub fn ldl(s: &QMatrix) -> std::result::Result<Ldl, usize> {
    let n = s.len();
    let mut l = vec![vec![Q::zero(); n]; n];
    let mut d = vec![Q::zero(); n];
    for j in 0..n {
        let mut dj = s[j][j].clone();
        for k in 0..j {
            if !l[j][k].is_zero() {
                dj -= &l[j][k] * &l[j][k] * &d[k];
            }
        }
        if !dj.is_positive() {
            return Err(j);
        }
        l[j][j] = Q::one();
        for i in j + 1..n {
            let mut v = s[i][j].clone();
            if v.is_zero() && (0..j).all(|k| l[i][k].is_zero() || l[j][k].is_zero()) {
                continue;
            }
            for k in 0..j {
                if !l[i][k].is_zero() && !l[j][k].is_zero() {
                    v -= &l[i][k] * &l[j][k] * &d[k];
                }
            }
            l[i][j] = v / &dj;
        }
        d[j] = dj;
    }
    Ok(Ldl { l, d })
}

/// Solves `L X = B` in place for unit lower-triangular `L`.
pub fn forward_substitute(l: &QMatrix, b: &mut QMatrix) {
    let n = l.len();
    let cols = b.first().map_or(0, |r| r.len());
    for i in 0..n {
        for k in 0..i {
            if l[i][k].is_zero() {
                continue;
            }
            let f = l[i][k].clone();
            for c in 0..cols {
                if !b[k][c].is_zero() {
                    let t = &f * &b[k][c];
                    b[i][c] -= t;
                }
            }
        }
    }
}

pub fn transpose(m: &QMatrix) -> QMatrix {
    let r = m.len();
    let c = m.first().map_or(0, |row| row.len());
    (0..c).map(|j| (0..r).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let r = a.len();
    let inner = b.len();
    let c = b.first().map_or(0, |row| row.len());
    let mut out = vec![vec![Q::zero(); c]; r];
    for i in 0..r {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Smallest eigenvalue of `D^{-1/2} S D^{-1/2}` with `D = diag(S)`: a scale-free definiteness probe.
pub fn smallest_normalized_eigenvalue(s: &QMatrix) -> f64 {
    let m = to_f64_matrix(s);
    let n = m.nrows();
    if n == 0 {
        return f64::INFINITY;
    }
    let scale: Vec<f64> = (0..n).map(|i| 1.0 / m[(i, i)].abs().sqrt().max(f64::MIN_POSITIVE)).collect();
    let normalized = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * scale[i] * scale[j]);
    SymmetricEigen::new(normalized).eigenvalues.min()
}
