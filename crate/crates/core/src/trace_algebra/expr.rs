use std::collections::BTreeMap;

use num_traits::Zero;

use super::wick::{normal_order, OrderedProduct};
use super::word::{Letter, TraceWord};
use crate::rational::{int, Q};

/// Exact linear combination of normal-ordered products of traces at a fixed rank `N`.
///
/// Every monomial is read as normal ordered: inside a product all annihilation
/// components act before all creation components, while the matrix index structure
/// of each trace is kept. A monomial with no traces is a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceExpr {
    n: u32,
    terms: BTreeMap<Vec<TraceWord>, Q>,
}

impl TraceExpr {
    pub fn zero(n: u32) -> Self {
        TraceExpr { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: u32, c: Q) -> Self {
        Self::monomial(n, Vec::new(), c)
    }

    pub fn one(n: u32) -> Self {
        Self::scalar(n, int(1))
    }

    pub fn monomial(n: u32, mut words: Vec<TraceWord>, c: Q) -> Self {
        let mut out = Self::zero(n);
        words.sort();
        out.add_term(words, c);
        out
    }

    pub fn word(n: u32, w: TraceWord) -> Self {
        Self::monomial(n, vec![w], int(1))
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<TraceWord>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial, given in any word order.
    pub fn coeff(&self, words: &[TraceWord]) -> Q {
        let mut key = words.to_vec();
        key.sort();
        self.terms.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    /// `words` must already be sorted.
    pub(crate) fn add_term(&mut self, words: Vec<TraceWord>, c: Q) {
        if c.is_zero() {
            return;
        }
        debug_assert!(words.windows(2).all(|w| w[0] <= w[1]));
        match self.terms.entry(words) {
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

    pub fn add(&self, other: &TraceExpr) -> TraceExpr {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TraceExpr) -> TraceExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TraceExpr {
        self.scale(&int(-1))
    }

    pub fn scale(&self, s: &Q) -> TraceExpr {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        TraceExpr { n: self.n, terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect() }
    }

    /// Operator product `self · other`, normal ordered.
    pub fn mul(&self, other: &TraceExpr) -> TraceExpr {
        normal_order(&OrderedProduct::from_normal(self).then(other))
    }

    /// Hermitian conjugate. Coefficients are real, so only the words change.
    pub fn dagger(&self) -> TraceExpr {
        let mut out = Self::zero(self.n);
        for (ws, c) in &self.terms {
            let mut d: Vec<TraceWord> = ws.iter().map(|w| w.dagger()).collect();
            d.sort();
            out.add_term(d, c.clone());
        }
        out
    }

    /// Coefficient of the operator-free monomial.
    pub fn scalar_part(&self) -> Q {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_pure_creation(&self) -> bool {
        self.terms.keys().all(|ws| ws.iter().all(|w| w.is_pure(Letter::Create)))
    }

    /// Drops traces of length one, which vanish for traceless generators.
    pub fn drop_linear_traces(&self) -> TraceExpr {
        TraceExpr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(ws, _)| ws.iter().all(|w| w.len() > 1))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps monomials whose net quanta (creators minus annihilators) is at most `max`.
    pub fn truncate_quanta(&self, max: i64) -> TraceExpr {
        TraceExpr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(ws, _)| net_quanta(ws) <= max)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }
}

pub(crate) fn net_quanta(ws: &[TraceWord]) -> i64 {
    ws.iter().map(|w| w.count(Letter::Create) as i64 - w.count(Letter::Annihilate) as i64).sum()
}
