//! Exact rational helpers shared across the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn one() -> Q {
    Q::one()
}

pub fn zero() -> Q {
    Q::zero()
}

/// Nearest double. Falls back to a scaled division when either part overflows `f64`.
pub fn to_f64(q: &Q) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = (nb - db).clamp(-1000, 1000);
    let scaled = if shift >= 0 {
        Q::new(q.numer().clone(), q.denom().clone() << shift as usize)
    } else {
        Q::new(q.numer().clone() << (-shift) as usize, q.denom().clone())
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// `"num/den"`, or just `"num"` for integers.
pub fn to_fraction_string(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_fraction(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().ok()?;
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Q::new(num, den))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub fn abs(q: &Q) -> Q {
    q.abs()
}

/// `(n^2 - 1)` as a rational: the number of adjoint modes.
pub fn adjoint_dim(n: u32) -> Q {
    int(n as i64 * n as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_strings_round_trip() {
        for (a, b) in [(3, 2), (-7, 4), (5, 1), (0, 3)] {
            let q = frac(a, b);
            assert_eq!(parse_fraction(&to_fraction_string(&q)), Some(q));
        }
        assert_eq!(to_fraction_string(&frac(6, 4)), "3/2");
        assert_eq!(to_fraction_string(&int(-2)), "-2");
        assert!(parse_fraction("1/0").is_none());
    }

    #[test]
    fn huge_ratios_convert() {
        let big = Q::new(BigInt::from(3) << 2000usize, BigInt::from(2) << 2000usize);
        assert!((to_f64(&big) - 1.5).abs() < 1e-15);
        let tiny = Q::new(BigInt::from(1), BigInt::from(1) << 1500usize);
        assert_eq!(to_f64(&tiny), 0.0);
    }
}
