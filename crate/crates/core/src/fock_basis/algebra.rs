use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{check_rank, Result};
use crate::partition::{BrickPoly, Partition};
use crate::rational::{int, Q};
use crate::trace_algebra::{apply_to_vacuum, CayleyHamilton, OrderedProduct, TraceExpr, TraceWord};

/// Action of trace operators on brick states, with memoized lowering and inner products.
///
/// `⟨p|q⟩` is computed by peeling one brick off the bra: with `k` the smallest brick of `p`,
/// `⟨p|q⟩ = Σ_r [tr(a^k)|q⟩]_r ⟨p − e_k|r⟩`.
#[derive(Debug)]
pub struct BasisAlgebra {
    n: u32,
    ch: CayleyHamilton,
    lower: RefCell<HashMap<(u32, Partition), BrickPoly>>,
    inner: RefCell<HashMap<(Partition, Partition), Q>>,
}

impl BasisAlgebra {
    pub fn new(n: u32) -> Result<Self> {
        check_rank(n)?;
        Ok(BasisAlgebra {
            n,
            ch: CayleyHamilton::new(n),
            lower: RefCell::new(HashMap::new()),
            inner: RefCell::new(HashMap::new()),
        })
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn cayley_hamilton(&self) -> &CayleyHamilton {
        &self.ch
    }

    /// `op |p⟩`, reduced to bricks. `op` is read as normal ordered.
    pub fn act(&self, op: &TraceExpr, p: &Partition) -> Result<BrickPoly> {
        let image = apply_to_vacuum(&OrderedProduct::from_normal(op).then(&p.to_expr()));
        self.ch.reduce_to_bricks(&image)
    }

    /// `Σ_i c_i op|p_i⟩`.
    pub fn act_poly(&self, op: &TraceExpr, state: &BrickPoly) -> Result<BrickPoly> {
        let mut out = BrickPoly::zero(self.n);
        for (p, c) in state.terms() {
            out.add_scaled(&self.act(op, p)?, c);
        }
        Ok(out)
    }

    /// `tr(a^k) |p⟩`.
    pub fn lower(&self, k: u32, p: &Partition) -> Result<BrickPoly> {
        if let Some(v) = self.lower.borrow().get(&(k, p.clone())) {
            return Ok(v.clone());
        }
        let v = if k < 2 || p.quanta() < k {
            BrickPoly::zero(self.n)
        } else {
            self.act(&TraceExpr::word(self.n, TraceWord::annihilation(k as usize)), p)?
        };
        self.lower.borrow_mut().insert((k, p.clone()), v.clone());
        Ok(v)
    }

    /// `⟨p|q⟩`.
    pub fn inner(&self, p: &Partition, q: &Partition) -> Result<Q> {
        if p.quanta() != q.quanta() {
            return Ok(Q::zero());
        }
        let Some(k) = p.smallest_brick() else {
            return Ok(int(1));
        };
        let key = (p.clone(), q.clone());
        if let Some(v) = self.inner.borrow().get(&key) {
            return Ok(v.clone());
        }
        let rest = p.shifted(k, -1).expect("brick present");
        let mut acc = Q::zero();
        for (r, c) in self.lower(k, q)?.terms() {
            let sub = self.inner(&rest, r)?;
            if !sub.is_zero() {
                acc += c * sub;
            }
        }
        self.inner.borrow_mut().insert(key, acc.clone());
        Ok(acc)
    }

    /// `⟨x|y⟩` for brick polynomials with real coefficients.
    pub fn inner_poly(&self, x: &BrickPoly, y: &BrickPoly) -> Result<Q> {
        let mut acc = Q::zero();
        for (p, a) in x.terms() {
            for (q, b) in y.terms() {
                if p.quanta() == q.quanta() {
                    acc += a * b * self.inner(p, q)?;
                }
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn part(n: u32, v: &[u32]) -> Partition {
        Partition::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn lowering_the_first_brick() {
        for n in 2..=5u32 {
            let alg = BasisAlgebra::new(n).unwrap();
            let nn = n as i64;
            let one = part(n, &{
                let mut v = vec![0; n as usize - 1];
                v[0] = 1;
                v
            });
            let low = alg.lower(2, &one).unwrap();
            assert_eq!(low, BrickPoly::constant(n, frac(nn * nn - 1, 2)));
            assert_eq!(alg.inner(&one, &one).unwrap(), frac(nn * nn - 1, 2));
        }
    }

    #[test]
    fn vacuum_norm_and_orthogonal_quanta() {
        let alg = BasisAlgebra::new(3).unwrap();
        assert_eq!(alg.inner(&part(3, &[0, 0]), &part(3, &[0, 0])).unwrap(), int(1));
        assert!(alg.inner(&part(3, &[1, 0]), &part(3, &[0, 1])).unwrap().is_zero());
    }
}
