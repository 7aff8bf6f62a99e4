//! Generalized Laguerre polynomials `𝓛_m^γ`, their rescaled form `L_m^γ = 𝓛_m^γ / Γ(m+γ+1)`
//! and their zeros.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Order and index of a Laguerre quantization condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaguerreSpec {
    pub order: u32,
    pub index: f64,
}

impl LaguerreSpec {
    pub fn new(order: u32, index: f64) -> Result<Self> {
        if !index.is_finite() || index <= -1.0 {
            return Err(Error::InvalidArgument(format!("Laguerre index must exceed -1, got {index}")));
        }
        Ok(LaguerreSpec { order, index })
    }
}

/// `𝓛_m^γ(x)` by the three-term recurrence.
pub fn laguerre_eval(spec: LaguerreSpec, x: f64) -> f64 {
    laguerre_eval_with_derivative(spec, x).0
}

/// `(𝓛_m^γ(x), d/dx 𝓛_m^γ(x))`.
pub fn laguerre_eval_with_derivative(spec: LaguerreSpec, x: f64) -> (f64, f64) {
    let g = spec.index;
    let m = spec.order;
    if m == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = g + 1.0 - x;
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + g + 1.0 - x) * cur - (kf + g) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    // x 𝓛_m' = m 𝓛_m − (m+γ) 𝓛_{m−1}
    let mf = m as f64;
    let deriv = if x != 0.0 {
        (mf * cur - (mf + g) * prev) / x
    } else {
        -laguerre_eval(LaguerreSpec { order: m - 1, index: g + 1.0 }, 0.0)
    };
    (cur, deriv)
}

/// `L_0^γ(x), ..., L_m^γ(x)` in the rescaled normalization, from
/// `(k+1)(k+γ+1) L_{k+1} = (2k+γ+1−x) L_k − L_{k−1}`.
pub fn laguerre_scaled_sequence(order: u32, index: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(order as usize + 1);
    let mut prev = 0.0;
    let mut cur = 1.0 / gamma(index + 1.0);
    out.push(cur);
    for k in 0..order {
        let kf = k as f64;
        let next = ((2.0 * kf + index + 1.0 - x) * cur - prev) / ((kf + 1.0) * (kf + index + 1.0));
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `L_m^γ(x) = 𝓛_m^γ(x) / Γ(m+γ+1)`.
pub fn laguerre_scaled(spec: LaguerreSpec, x: f64) -> f64 {
    *laguerre_scaled_sequence(spec.order, spec.index, x).last().expect("nonempty")
}

/// How far `x` is from a zero, measured against the local slope: `|𝓛(x)| / (|x 𝓛'(x)| + |𝓛(x)|)`.
pub fn root_defect(spec: LaguerreSpec, x: f64) -> f64 {
    let (v, d) = laguerre_eval_with_derivative(spec, x);
    let scale = (x * d).abs() + v.abs();
    if scale == 0.0 {
        0.0
    } else {
        v.abs() / scale
    }
}

/// The `m` zeros of `𝓛_m^γ`, ascending, from the Jacobi matrix polished by Newton steps.
pub fn laguerre_roots(spec: LaguerreSpec) -> Vec<f64> {
    let m = spec.order as usize;
    if m == 0 {
        return Vec::new();
    }
    let g = spec.index;
    let jac = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            2.0 * i as f64 + g + 1.0
        } else if i.abs_diff(j) == 1 {
            let k = i.max(j) as f64;
            (k * (k + g)).sqrt()
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    roots.sort_by(f64::total_cmp);
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (v, d) = laguerre_eval_with_derivative(spec, *r);
            if d == 0.0 {
                break;
            }
            let next = *r - v / d;
            if root_defect(spec, next) <= root_defect(spec, *r) {
                *r = next;
            } else {
                break;
            }
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(m: u32, g: f64) -> LaguerreSpec {
        LaguerreSpec::new(m, g).unwrap()
    }

    #[test]
    fn low_orders() {
        assert_eq!(laguerre_eval(spec(0, 2.5), 7.0), 1.0);
        assert_eq!(laguerre_eval(spec(1, 3.0), 4.0), 0.0);
        assert!((laguerre_eval(spec(2, 3.0), 5.0) + 2.5).abs() < 1e-15);
        assert!(LaguerreSpec::new(2, -1.0).is_err());
    }

    #[test]
    fn roots_of_small_orders() {
        assert_eq!(laguerre_roots(spec(0, 3.0)), Vec::<f64>::new());
        let r = laguerre_roots(spec(1, 3.0));
        assert!((r[0] - 4.0).abs() < 1e-14);
        let r = laguerre_roots(spec(2, 3.0));
        let s5 = 5f64.sqrt();
        assert!((r[0] - (5.0 - s5)).abs() < 1e-13);
        assert!((r[1] - (5.0 + s5)).abs() < 1e-13);
        for n in 2..7u32 {
            let g = 0.5 * (n * n - 1) as f64 - 1.0;
            let r = laguerre_roots(spec(1, g));
            assert!((r[0] - 0.5 * (n * n - 1) as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn scaled_matches_plain() {
        let g = 6.5;
        let x = 3.7;
        let seq = laguerre_scaled_sequence(12, g, x);
        for (m, v) in seq.iter().enumerate() {
            let plain = laguerre_eval(spec(m as u32, g), x) / gamma(m as f64 + g + 1.0);
            assert!((v - plain).abs() <= 1e-12 * plain.abs().max(1e-300));
        }
    }

    #[test]
    fn derivative_by_differences() {
        let s = spec(7, 2.5);
        let x = 3.3;
        let h = 1e-6;
        let fd = (laguerre_eval(s, x + h) - laguerre_eval(s, x - h)) / (2.0 * h);
        let (_, d) = laguerre_eval_with_derivative(s, x);
        assert!((fd - d).abs() < 1e-6 * d.abs().max(1.0));
        let (_, d0) = laguerre_eval_with_derivative(s, 0.0);
        let fd0 = (laguerre_eval(s, h) - laguerre_eval(s, -h)) / (2.0 * h);
        assert!((fd0 - d0).abs() < 1e-6 * d0.abs().max(1.0));
    }

    proptest! {
        #[test]
        fn roots_are_positive_sorted_and_verified(m in 1u32..120, twice_g in 0u32..200) {
            let s = spec(m, twice_g as f64 / 2.0);
            let r = laguerre_roots(s);
            prop_assert_eq!(r.len(), m as usize);
            prop_assert!(r[0] > 0.0);
            for w in r.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for x in r {
                prop_assert!(root_defect(s, x) <= 1e-8, "defect {} at {}", root_defect(s, x), x);
            }
        }
    }
}
