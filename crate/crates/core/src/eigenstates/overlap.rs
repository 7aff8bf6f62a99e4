//! Regulated overlaps of empty-tail continuum states.
//!
//! With `⟨n|n⟩ = n! Γ(n+γ+1)/Γ(γ+1)` for `|n⟩ = (a†2)^n|0⟩`, the overlap
//! `e^{−E−E'} Σ_n L_n^γ(2E) L_n^γ(2E') ⟨n|n⟩ z^n` sums by the Hille–Hardy formula to
//! `e^{−E−E'}/Γ(γ+1) · (1−z)^{-1} e^{−2z(E+E')/(1−z)} (4EE'z)^{−γ/2} I_γ(4√(EE'z)/(1−z))`.

use statrs::function::gamma::ln_gamma;

use crate::error::{check_rank, Error, Result};

fn empty_tail_gamma(n: u32) -> f64 {
    0.5 * (n * n - 1) as f64 - 1.0
}

fn check_inputs(n: u32, e1: f64, e2: f64, z: f64) -> Result<()> {
    check_rank(n)?;
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::InvalidRegulator(z));
    }
    if !(e1 > 0.0 && e2 > 0.0 && e1.is_finite() && e2.is_finite()) {
        return Err(Error::InvalidArgument(format!("energies must be positive, got {e1} and {e2}")));
    }
    Ok(())
}

/// `ln I_ν(w)` for `ν ≥ 0`, `w > 0`, summing `Σ_k (w/2)^{2k+ν} / (k! Γ(k+ν+1))` in log space.
pub fn ln_bessel_i(nu: f64, w: f64) -> f64 {
    let lh = (0.5 * w).ln();
    let term = |k: f64| (2.0 * k + nu) * lh - ln_gamma(k + 1.0) - ln_gamma(k + nu + 1.0);
    // terms peak near k ≈ w/2
    let peak = (0.5 * w).floor();
    let top = term(peak);
    let mut acc = 0.0;
    let mut k = peak;
    loop {
        let t = (term(k) - top).exp();
        acc += t;
        if t < 1e-18 || k == 0.0 {
            break;
        }
        k -= 1.0;
    }
    let mut k = peak + 1.0;
    loop {
        let t = (term(k) - top).exp();
        acc += t;
        if t < 1e-18 {
            break;
        }
        k += 1.0;
    }
    top + acc.ln()
}

/// The partial-sum route, stopped once `tol` relative accuracy is reached.
pub fn overlap_series(n: u32, e1: f64, e2: f64, z: f64, tol: f64) -> Result<f64> {
    check_inputs(n, e1, e2, z)?;
    let g = empty_tail_gamma(n);
    let (x, y) = (2.0 * e1, 2.0 * e2);
    // L_k(x) L_k(y) ⟨k|k⟩ z^k = 𝓛_k(x) 𝓛_k(y) r_k / Γ(γ+1), r_k = k! z^k / Γ(k+γ+1)
    let (mut px, mut cx) = (0.0, 1.0);
    let (mut py, mut cy) = (0.0, 1.0);
    let mut r = (-ln_gamma(g + 1.0)).exp();
    let mut sum = 0.0;
    let mut quiet = 0;
    for k in 0..10_000_000u64 {
        let term = cx * cy * r;
        sum += term;
        if term.abs() <= tol * sum.abs() * 1e-2 {
            quiet += 1;
            if quiet >= 5 {
                break;
            }
        } else {
            quiet = 0;
        }
        let kf = k as f64;
        let nx = ((2.0 * kf + g + 1.0 - x) * cx - (kf + g) * px) / (kf + 1.0);
        let ny = ((2.0 * kf + g + 1.0 - y) * cy - (kf + g) * py) / (kf + 1.0);
        px = cx;
        cx = nx;
        py = cy;
        cy = ny;
        r *= (kf + 1.0) * z / (kf + g + 1.0);
    }
    Ok((-e1 - e2 - ln_gamma(g + 1.0)).exp() * sum)
}

/// The closed Bessel-function route.
pub fn overlap_bessel(n: u32, e1: f64, e2: f64, z: f64) -> Result<f64> {
    check_inputs(n, e1, e2, z)?;
    let g = empty_tail_gamma(n);
    let w = 4.0 * (e1 * e2 * z).sqrt() / (1.0 - z);
    let ln = -e1
        - e2
        - ln_gamma(g + 1.0)
        - (1.0 - z).ln()
        - 2.0 * z * (e1 + e2) / (1.0 - z)
        - 0.5 * g * (4.0 * e1 * e2 * z).ln()
        + ln_bessel_i(g, w);
    Ok(ln.exp())
}

/// Both routes of [`overlap_series`] and [`overlap_bessel`].
pub fn continuum_overlap(n: u32, e1: f64, e2: f64, z: f64) -> Result<(f64, f64)> {
    Ok((overlap_series(n, e1, e2, z, 1e-14)?, overlap_bessel(n, e1, e2, z)?))
}

/// Leading small-`ε` form with `z = 1 − 4ε`:
/// `e^{E+E'−2√(EE')} (4EE')^{−γ/2−1/4} e^{−(√(2E)−√(2E'))²/(4ε)} / (2√π Γ(γ+1) √(4ε))`.
pub fn overlap_epsilon_form(n: u32, e1: f64, e2: f64, z: f64) -> Result<f64> {
    check_inputs(n, e1, e2, z)?;
    let g = empty_tail_gamma(n);
    let eps = (1.0 - z) / 4.0;
    let gap = (2.0 * e1).sqrt() - (2.0 * e2).sqrt();
    let ln = e1 + e2
        - 2.0 * (e1 * e2).sqrt()
        - (0.5 * g + 0.25) * (4.0 * e1 * e2).ln()
        - gap * gap / (4.0 * eps)
        - (2.0 * std::f64::consts::PI.sqrt()).ln()
        - ln_gamma(g + 1.0)
        - 0.5 * (4.0 * eps).ln();
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        // I_0(1), I_1(2), I_{5/2}(30)
        assert!((ln_bessel_i(0.0, 1.0).exp() - 1.266_065_877_752_008_4).abs() < 1e-14);
        assert!((ln_bessel_i(1.0, 2.0).exp() - 1.590_636_854_637_329).abs() < 1e-14);
        // I_{1/2}(w) = √(2/(πw)) sinh w
        let w: f64 = 30.0;
        let want = (2.0 / (std::f64::consts::PI * w)).sqrt().ln() + w + (1.0 - (-2.0 * w).exp()).ln() - 2f64.ln();
        assert!((ln_bessel_i(0.5, w) - want).abs() < 1e-12);
    }

    #[test]
    fn routes_agree() {
        let (a, b) = continuum_overlap(3, 1.0, 1.0, 0.5).unwrap();
        assert!((a - b).abs() <= 1e-8 * b.abs());
        for n in [3, 4] {
            for e1 in [0.5, 1.0, 2.0] {
                for e2 in [0.5, 1.0, 2.0] {
                    for z in [0.3, 0.6, 0.9] {
                        let (a, b) = continuum_overlap(n, e1, e2, z).unwrap();
                        assert!((a - b).abs() <= 1e-8 * b.abs(), "N={n} E={e1},{e2} z={z}: {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_z_keeps_the_constant_term() {
        // only n = 0 survives: e^{−E−E'} L_0² ⟨0|0⟩ = e^{−E−E'}/Γ(γ+1)²
        let (a, b) = continuum_overlap(3, 1.0, 2.0, 1e-9).unwrap();
        let want = (-3.0f64).exp() / 36.0;
        assert!((a - want).abs() < 1e-8 * want);
        assert!((b - want).abs() < 1e-6 * want);
    }

    #[test]
    fn gaussian_peak_near_the_diagonal() {
        let z = 0.99;
        for (e1, e2) in [(1.0, 1.0), (1.0, 1.02), (2.0, 2.05), (0.5, 0.52)] {
            let exact = overlap_bessel(3, e1, e2, z).unwrap();
            let eps = overlap_epsilon_form(3, e1, e2, z).unwrap();
            assert!((exact / eps - 1.0).abs() < 0.1, "{e1} {e2}: {exact} vs {eps}");
        }
    }

    #[test]
    fn regulator_range() {
        assert!(matches!(overlap_bessel(3, 1.0, 1.0, 1.0), Err(Error::InvalidRegulator(_))));
        assert!(matches!(overlap_series(3, 1.0, 1.0, 0.0, 1e-10), Err(Error::InvalidRegulator(_))));
        assert!(overlap_bessel(3, -1.0, 1.0, 0.5).is_err());
    }
}
