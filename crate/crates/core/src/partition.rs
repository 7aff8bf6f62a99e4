//! Occupation labels `(p2, ..., pN)` of bosonic basis states and polynomials in the bricks.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_rank, Error, Result};
use crate::rational::{int, Q};
use crate::trace_algebra::{TraceExpr, TraceWord};

/// Exponents of the bricks `(a†^2), ..., (a†^N)`; entry `i` belongs to brick `i + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(n: u32, p: Vec<u32>) -> Result<Self> {
        check_rank(n)?;
        if p.len() != (n - 1) as usize {
            return Err(Error::InvalidArgument(format!(
                "partition for N={n} needs {} entries, got {}",
                n - 1,
                p.len()
            )));
        }
        Ok(Partition(p))
    }

    pub fn zero(n: u32) -> Self {
        Partition(vec![0; n.saturating_sub(1) as usize])
    }

    /// Builds `p` from a tail `(p3, ..., pN)` and a `p2` value.
    pub fn from_tail(p2: u32, tail: &[u32]) -> Self {
        let mut v = Vec::with_capacity(tail.len() + 1);
        v.push(p2);
        v.extend_from_slice(tail);
        Partition(v)
    }

    pub fn rank(&self) -> u32 {
        self.0.len() as u32 + 1
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of `(a†^k)`; zero for `k` outside `2..=N`.
    pub fn get(&self, k: u32) -> u32 {
        if k < 2 {
            return 0;
        }
        self.0.get((k - 2) as usize).copied().unwrap_or(0)
    }

    pub fn p2(&self) -> u32 {
        self.get(2)
    }

    pub fn quanta(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, &c)| (i as u32 + 2) * c).sum()
    }

    pub fn tail(&self) -> &[u32] {
        &self.0[1..]
    }

    /// `Σ_{k≥3} k p_k`.
    pub fn tail_weight(&self) -> u32 {
        self.quanta() - 2 * self.p2()
    }

    pub fn brick_count(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `self + delta·e_k`, or `None` when an exponent would go negative.
    pub fn shifted(&self, k: u32, delta: i64) -> Option<Partition> {
        let idx = (k.checked_sub(2)?) as usize;
        let cur = *self.0.get(idx)? as i64 + delta;
        if cur < 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[idx] = cur as u32;
        Some(Partition(v))
    }

    pub fn add(&self, other: &Partition) -> Partition {
        Partition(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Smallest `k` with `p_k > 0`.
    pub fn smallest_brick(&self) -> Option<u32> {
        self.0.iter().position(|&c| c > 0).map(|i| i as u32 + 2)
    }

    /// The product `Π_k (a†^k)^{p_k}` with coefficient one.
    pub fn to_expr(&self) -> TraceExpr {
        let mut words = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            for _ in 0..c {
                words.push(TraceWord::creation(i + 2));
            }
        }
        TraceExpr::monomial(self.rank(), words, int(1))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.quanta().cmp(&other.quanta()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Exact polynomial in the bricks `(a†^2), ..., (a†^N)`, equivalently a state in the Fock basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickPoly {
    n: u32,
    terms: BTreeMap<Partition, Q>,
}

impl BrickPoly {
    pub fn zero(n: u32) -> Self {
        BrickPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: u32, c: Q) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Partition::zero(n), c);
        p
    }

    pub fn basis(p: Partition) -> Self {
        let n = p.rank();
        let mut out = Self::zero(n);
        out.add_term(p, int(1));
        out
    }

    /// The trace `(a†^k)` for any `k`: `N` at `k = 0`, zero at `k = 1`, the brick itself for `2 ≤ k ≤ N`.
    /// Larger powers need Cayley-Hamilton reduction and are rejected here.
    pub fn brick(n: u32, k: u32) -> Option<Self> {
        match k {
            0 => Some(Self::constant(n, int(n as i64))),
            1 => Some(Self::zero(n)),
            k if k <= n => Some(Self::basis(Partition::zero(n).shifted(k, 1)?)),
            _ => None,
        }
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &Partition) -> Q {
        self.terms.get(p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, p: Partition, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &BrickPoly, scale: &Q) {
        if scale.is_zero() {
            return;
        }
        for (p, c) in &other.terms {
            self.add_term(p.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &Q) -> BrickPoly {
        let mut out = Self::zero(self.n);
        out.add_scaled(self, scale);
        out
    }

    pub fn mul(&self, other: &BrickPoly) -> BrickPoly {
        let mut out = Self::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.add(q), a * b);
            }
        }
        out
    }

    /// Multiplies every term by the monomial `p`.
    pub fn mul_partition(&self, p: &Partition) -> BrickPoly {
        BrickPoly { n: self.n, terms: self.terms.iter().map(|(q, c)| (q.add(p), c.clone())).collect() }
    }

    pub fn truncated(&self, max_quanta: u32) -> BrickPoly {
        BrickPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.quanta() <= max_quanta)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_expr(&self) -> TraceExpr {
        let mut out = TraceExpr::zero(self.n);
        for (p, c) in &self.terms {
            out = out.add(&p.to_expr().scale(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn ordering_is_graded() {
        let a = Partition::new(3, vec![3, 0]).unwrap();
        let b = Partition::new(3, vec![0, 2]).unwrap();
        let c = Partition::new(3, vec![1, 1]).unwrap();
        assert!(c < a && c < b);
        assert!(b < a);
        assert_eq!(a.quanta(), 6);
        assert_eq!(b.tail_weight(), 6);
        assert_eq!(c.to_string(), "(1,1)");
    }

    #[test]
    fn shifting_guards_negative_exponents() {
        let p = Partition::new(4, vec![1, 0, 2]).unwrap();
        assert_eq!(p.shifted(3, -1), None);
        assert_eq!(p.shifted(4, -2).unwrap().as_slice(), &[1, 0, 0]);
        assert_eq!(p.shifted(5, 1), None);
        assert_eq!(p.smallest_brick(), Some(2));
        assert!(Partition::new(4, vec![1]).is_err());
        assert!(Partition::new(1, vec![]).is_err());
    }

    #[test]
    fn brick_polynomials_multiply() {
        let x = BrickPoly::brick(3, 2).unwrap();
        let y = BrickPoly::brick(3, 3).unwrap().scaled(&frac(1, 2));
        let prod = x.add_and(&y).mul(&x);
        let p = Partition::new(3, vec![2, 0]).unwrap();
        let q = Partition::new(3, vec![1, 1]).unwrap();
        assert_eq!(prod.coeff(&p), int(1));
        assert_eq!(prod.coeff(&q), frac(1, 2));
        assert_eq!(BrickPoly::brick(3, 0).unwrap().coeff(&Partition::zero(3)), int(3));
        assert!(BrickPoly::brick(3, 1).unwrap().is_zero());
        assert!(BrickPoly::brick(3, 4).is_none());
    }

    impl BrickPoly {
        fn add_and(&self, o: &BrickPoly) -> BrickPoly {
            let mut out = self.clone();
            out.add_scaled(o, &int(1));
            out
        }
    }
}
