//! Reduction of power traces of a traceless `N×N` matrix to the bricks `(a†^2), ..., (a†^N)`.

use std::cell::RefCell;

use super::expr::TraceExpr;
use super::word::{Letter, TraceWord};
use crate::error::{Error, Result};
use crate::partition::{BrickPoly, Partition};
use crate::rational::{int, Q};

/// Newton-identity reducer for one rank. Power sums are cached as they are requested.
#[derive(Debug)]
pub struct CayleyHamilton {
    n: u32,
    elementary: Vec<BrickPoly>,
    power: RefCell<Vec<BrickPoly>>,
}

impl CayleyHamilton {
    pub fn new(n: u32) -> Self {
        let nu = n as usize;
        // p_0 = N, p_1 = 0, p_k = brick k for 2 ≤ k ≤ N
        let power: Vec<BrickPoly> = (0..=n).map(|k| BrickPoly::brick(n, k).expect("k ≤ N")).collect();
        let mut elementary = vec![BrickPoly::constant(n, int(1)), BrickPoly::zero(n)];
        for i in 2..=nu {
            let mut acc = BrickPoly::zero(n);
            for j in 1..=i {
                let sign = if j % 2 == 1 { 1 } else { -1 };
                acc.add_scaled(&elementary[i - j].mul(&power[j]), &int(sign));
            }
            elementary.push(acc.scaled(&Q::new(1.into(), (i as i64).into())));
        }
        CayleyHamilton { n, elementary, power: RefCell::new(power) }
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    /// Elementary symmetric polynomial `e_i` of the eigenvalues, `0 ≤ i ≤ N`.
    pub fn elementary(&self, i: usize) -> &BrickPoly {
        &self.elementary[i]
    }

    /// `tr(X^m)` in terms of the bricks.
    pub fn power_sum(&self, m: usize) -> BrickPoly {
        let nu = self.n as usize;
        {
            let cache = self.power.borrow();
            if m < cache.len() {
                return cache[m].clone();
            }
        }
        let mut cache = self.power.borrow_mut();
        while cache.len() <= m {
            let k = cache.len();
            let mut acc = BrickPoly::zero(self.n);
            for i in 1..=nu {
                let sign = if i % 2 == 1 { 1 } else { -1 };
                acc.add_scaled(&self.elementary[i].mul(&cache[k - i]), &int(sign));
            }
            cache.push(acc);
        }
        cache[m].clone()
    }

    /// Product of pure-creation words as a brick polynomial.
    pub fn reduce_words(&self, words: &[TraceWord]) -> Result<BrickPoly> {
        let mut acc = BrickPoly::constant(self.n, int(1));
        for w in words {
            if !w.is_pure(Letter::Create) {
                return Err(Error::NotPureCreation(w.to_string()));
            }
            acc = acc.mul(&self.power_sum(w.len()));
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Reduces a pure-creation expression to a brick polynomial.
    pub fn reduce_to_bricks(&self, e: &TraceExpr) -> Result<BrickPoly> {
        let mut out = BrickPoly::zero(self.n);
        for (ws, c) in e.terms() {
            out.add_scaled(&self.reduce_words(ws)?, c);
        }
        Ok(out)
    }

    /// Rewrites every pure-creation and every pure-annihilation trace in terms of the bricks
    /// and their conjugates. Mixed traces are kept if they are no longer than `N`.
    pub fn reduce(&self, e: &TraceExpr) -> Result<TraceExpr> {
        let mut out = TraceExpr::zero(self.n);
        for (ws, c) in e.terms() {
            let mut create = Vec::new();
            let mut annihilate = Vec::new();
            let mut mixed = Vec::new();
            for w in ws {
                if w.is_pure(Letter::Create) {
                    create.push(TraceWord::creation(w.len()));
                } else if w.is_pure(Letter::Annihilate) {
                    annihilate.push(TraceWord::creation(w.len()));
                } else if w.len() > self.n as usize {
                    return Err(Error::UnsupportedReduction(w.to_string()));
                } else {
                    mixed.push(w.clone());
                }
            }
            let cp = self.reduce_words(&create)?;
            let ap = self.reduce_words(&annihilate)?;
            for (p, x) in cp.terms() {
                for (q, y) in ap.terms() {
                    let mut words = mixed.clone();
                    words.extend(brick_words(p, Letter::Create));
                    words.extend(brick_words(q, Letter::Annihilate));
                    out = out.add(&TraceExpr::monomial(self.n, words, c * x * y));
                }
            }
        }
        Ok(out)
    }
}

fn brick_words(p: &Partition, l: Letter) -> Vec<TraceWord> {
    let mut out = Vec::new();
    for k in 2..=p.rank() {
        for _ in 0..p.get(k) {
            out.push(match l {
                Letter::Create => TraceWord::creation(k as usize),
                Letter::Annihilate => TraceWord::annihilation(k as usize),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    fn part(n: u32, v: &[u32]) -> Partition {
        Partition::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn small_rank_identities() {
        let ch2 = CayleyHamilton::new(2);
        assert!(ch2.power_sum(3).is_zero());
        assert_eq!(ch2.power_sum(4).coeff(&part(2, &[2])), frac(1, 2));
        let ch3 = CayleyHamilton::new(3);
        let p4 = ch3.power_sum(4);
        assert_eq!(p4.terms().len(), 1);
        assert_eq!(p4.coeff(&part(3, &[2, 0])), frac(1, 2));
        let ch4 = CayleyHamilton::new(4);
        let p5 = ch4.power_sum(5);
        assert_eq!(p5.terms().len(), 1);
        assert_eq!(p5.coeff(&part(4, &[1, 1, 0])), frac(5, 6));
        let p6 = ch4.power_sum(6);
        assert_eq!(p6.coeff(&part(4, &[1, 0, 1])), frac(3, 4));
        assert_eq!(p6.coeff(&part(4, &[0, 2, 0])), frac(1, 3));
        assert_eq!(p6.coeff(&part(4, &[3, 0, 0])), frac(-1, 8));
    }

    #[test]
    fn reduce_keeps_short_mixed_words_and_rejects_long_ones() {
        use Letter::{Annihilate as An, Create as Cr};
        let ch = CayleyHamilton::new(3);
        let mixed = TraceWord::new(vec![Cr, Cr, An]).unwrap();
        let e = TraceExpr::monomial(3, vec![mixed.clone(), TraceWord::creation(4)], int(2));
        let r = ch.reduce(&e).unwrap();
        assert_eq!(r.coeff(&[mixed, TraceWord::creation(2), TraceWord::creation(2)]), int(1));
        let long = TraceWord::new(vec![Cr, Cr, Cr, An]).unwrap();
        assert!(matches!(ch.reduce(&TraceExpr::word(3, long)), Err(Error::UnsupportedReduction(_))));
        assert!(matches!(
            ch.reduce_to_bricks(&TraceExpr::word(3, TraceWord::annihilation(2))),
            Err(Error::NotPureCreation(_))
        ));
    }

    fn random_traceless(n: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let t = m.trace() / n as f64;
        for i in 0..n {
            m[(i, i)] -= t;
        }
        m
    }

    fn eval(poly: &BrickPoly, traces: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, c) in poly.terms() {
            let mut term = Complex64::new(crate::rational::to_f64(c), 0.0);
            for k in 2..=p.rank() {
                term *= traces[k as usize].powu(p.get(k));
            }
            acc += term;
        }
        acc
    }

    #[test]
    fn power_sums_match_random_traceless_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 2..=5usize {
            let ch = CayleyHamilton::new(n as u32);
            for _ in 0..5 {
                let m = random_traceless(n, &mut rng);
                let mut pow = DMatrix::identity(n, n);
                let mut traces = Vec::new();
                for _ in 0..=12 {
                    traces.push(pow.trace());
                    pow = &pow * &m;
                }
                for k in 0..=12 {
                    let want = traces[k];
                    let got = eval(&ch.power_sum(k), &traces);
                    assert!((want - got).norm() < 1e-9 * (1.0 + want.norm()), "N={n} k={k}");
                }
            }
        }
    }
}
