//! Brute-force representation on the `N²−1` adjoint oscillators, used only to check the trace algebra.

use std::cell::RefCell;
use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_rank, Error, Result};
use crate::partition::Partition;
use crate::rational::to_f64;
use crate::trace_algebra::{Letter, TraceExpr};

/// Sparse vector over occupation-number states.
pub type OracleState = HashMap<Vec<u8>, Complex64>;

type Tensor = Vec<(Vec<u8>, Complex64)>;

const TENSOR_BUDGET: usize = 1 << 22;

/// Explicit oscillator representation at rank `N ≤ 4`, truncated at a maximal total occupation.
#[derive(Debug)]
pub struct DenseOracle {
    n: u32,
    gens: Vec<DMatrix<Complex64>>,
    max_quanta: u32,
    tensors: RefCell<HashMap<usize, Tensor>>,
}

/// Generalized Gell-Mann matrices scaled to `tr(T_A T_B) = ½ δ_AB`.
pub fn generators(n: usize) -> Vec<DMatrix<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in j + 1..n {
            let mut s = DMatrix::from_element(n, n, zero);
            s[(j, k)] = Complex64::new(0.5, 0.0);
            s[(k, j)] = Complex64::new(0.5, 0.0);
            out.push(s);
            let mut a = DMatrix::from_element(n, n, zero);
            a[(j, k)] = Complex64::new(0.0, -0.5);
            a[(k, j)] = Complex64::new(0.0, 0.5);
            out.push(a);
        }
    }
    for l in 1..n {
        let norm = 1.0 / (2.0 * (l * (l + 1)) as f64).sqrt();
        let mut d = DMatrix::from_element(n, n, zero);
        for i in 0..l {
            d[(i, i)] = Complex64::new(norm, 0.0);
        }
        d[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        out.push(d);
    }
    out
}

impl DenseOracle {
    pub const DEFAULT_MAX_QUANTA: u32 = 8;

    pub fn new(n: u32) -> Result<Self> {
        Self::with_max_quanta(n, Self::DEFAULT_MAX_QUANTA)
    }

    pub fn with_max_quanta(n: u32, max_quanta: u32) -> Result<Self> {
        check_rank(n)?;
        if n > 4 {
            return Err(Error::OracleLimit(format!("rank {n} exceeds 4")));
        }
        Ok(DenseOracle { n, gens: generators(n as usize), max_quanta, tensors: RefCell::new(HashMap::new()) })
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.gens.len()
    }

    pub fn vacuum(&self) -> OracleState {
        let mut s = OracleState::new();
        s.insert(vec![0; self.modes()], Complex64::new(1.0, 0.0));
        s
    }

    /// Nonzero entries of `tr(T_{A1} ... T_{AL})`.
    fn tensor(&self, len: usize) -> Result<Tensor> {
        if let Some(t) = self.tensors.borrow().get(&len) {
            return Ok(t.clone());
        }
        let d = self.modes();
        if d.checked_pow(len as u32).is_none_or(|c| c > TENSOR_BUDGET) {
            return Err(Error::OracleLimit(format!("trace of length {len} over {d} generators")));
        }
        let n = self.n as usize;
        let mut out = Vec::new();
        let mut idx = Vec::with_capacity(len);
        let id = DMatrix::<Complex64>::identity(n, n);
        self.tensor_rec(len, &id, &mut idx, &mut out);
        self.tensors.borrow_mut().insert(len, out.clone());
        Ok(out)
    }

    fn tensor_rec(&self, len: usize, partial: &DMatrix<Complex64>, idx: &mut Vec<u8>, out: &mut Tensor) {
        if idx.len() == len {
            let t = partial.trace();
            if t.norm() > 1e-13 {
                out.push((idx.clone(), t));
            }
            return;
        }
        for (a, g) in self.gens.iter().enumerate() {
            let next = partial * g;
            if next.iter().all(|z| z.norm() < 1e-15) {
                continue;
            }
            idx.push(a as u8);
            self.tensor_rec(len, &next, idx, out);
            idx.pop();
        }
    }

    fn create(&self, mode: usize, psi: &OracleState) -> Result<OracleState> {
        let mut out = OracleState::with_capacity(psi.len());
        for (occ, amp) in psi {
            let total: u32 = occ.iter().map(|&x| x as u32).sum();
            if total + 1 > self.max_quanta {
                return Err(Error::OracleLimit(format!("state exceeds {} quanta", self.max_quanta)));
            }
            let mut o = occ.clone();
            o[mode] += 1;
            let f = (o[mode] as f64).sqrt();
            *out.entry(o).or_default() += amp * f;
        }
        Ok(out)
    }

    fn annihilate(&self, mode: usize, psi: &OracleState) -> OracleState {
        let mut out = OracleState::with_capacity(psi.len());
        for (occ, amp) in psi {
            if occ[mode] == 0 {
                continue;
            }
            let f = (occ[mode] as f64).sqrt();
            let mut o = occ.clone();
            o[mode] -= 1;
            *out.entry(o).or_default() += amp * f;
        }
        out
    }

    fn single(&self, l: Letter, mode: usize, psi: &OracleState) -> Result<OracleState> {
        match l {
            Letter::Create => self.create(mode, psi),
            Letter::Annihilate => Ok(self.annihilate(mode, psi)),
        }
    }

    /// One trace with its letters acting in the written order (rightmost first).
    pub fn apply_trace(&self, letters: &[Letter], psi: &OracleState) -> Result<OracleState> {
        let mut out = OracleState::new();
        for (idx, coeff) in self.tensor(letters.len())? {
            let mut cur = psi.clone();
            for (pos, &l) in letters.iter().enumerate().rev() {
                cur = self.single(l, idx[pos] as usize, &cur)?;
                if cur.is_empty() {
                    break;
                }
            }
            add_scaled(&mut out, &cur, coeff);
        }
        Ok(out)
    }

    /// A literal product of traces, rightmost trace first.
    pub fn apply_written(&self, traces: &[Vec<Letter>], psi: &OracleState) -> Result<OracleState> {
        let mut cur = psi.clone();
        for t in traces.iter().rev() {
            cur = self.apply_trace(t, &cur)?;
        }
        Ok(cur)
    }

    /// A normal-ordered expression: in each monomial every annihilation component acts first.
    pub fn apply_normal(&self, e: &TraceExpr, psi: &OracleState) -> Result<OracleState> {
        let mut out = OracleState::new();
        for (ws, c) in e.terms() {
            let coeff = Complex64::new(to_f64(c), 0.0);
            if ws.is_empty() {
                add_scaled(&mut out, psi, coeff);
                continue;
            }
            let tensors = ws.iter().map(|w| self.tensor(w.len())).collect::<Result<Vec<_>>>()?;
            let letters: Vec<&[Letter]> = ws.iter().map(|w| w.letters()).collect();
            let mut creators = Vec::new();
            self.normal_rec(&letters, &tensors, 0, psi.clone(), coeff, &mut creators, &mut out)?;
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn normal_rec(
        &self,
        letters: &[&[Letter]],
        tensors: &[Tensor],
        w: usize,
        psi: OracleState,
        coeff: Complex64,
        creators: &mut Vec<usize>,
        out: &mut OracleState,
    ) -> Result<()> {
        if w == letters.len() {
            let mut cur = psi;
            for &m in creators.iter() {
                cur = self.create(m, &cur)?;
            }
            add_scaled(out, &cur, coeff);
            return Ok(());
        }
        for (idx, t) in &tensors[w] {
            let mut cur = psi.clone();
            let mark = creators.len();
            for (pos, &l) in letters[w].iter().enumerate() {
                match l {
                    Letter::Annihilate => cur = self.annihilate(idx[pos] as usize, &cur),
                    Letter::Create => creators.push(idx[pos] as usize),
                }
            }
            if !cur.is_empty() {
                self.normal_rec(letters, tensors, w + 1, cur, coeff * t, creators, out)?;
            }
            creators.truncate(mark);
        }
        Ok(())
    }

    /// `Π_k (a†^k)^{p_k} |0⟩`.
    pub fn brick_state(&self, p: &Partition) -> Result<OracleState> {
        if p.rank() != self.n {
            return Err(Error::InvalidArgument(format!("partition {p} is not for N={}", self.n)));
        }
        let mut cur = self.vacuum();
        for k in 2..=self.n {
            let word = vec![Letter::Create; k as usize];
            for _ in 0..p.get(k) {
                cur = self.apply_trace(&word, &cur)?;
            }
        }
        Ok(cur)
    }
}

fn add_scaled(out: &mut OracleState, v: &OracleState, c: Complex64) {
    for (k, a) in v {
        *out.entry(k.clone()).or_default() += a * c;
    }
}

/// `⟨x|y⟩`.
pub fn inner(x: &OracleState, y: &OracleState) -> Complex64 {
    let (small, large, conj_small) = if x.len() <= y.len() { (x, y, true) } else { (y, x, false) };
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, a) in small {
        if let Some(b) = large.get(k) {
            acc += if conj_small { a.conj() * b } else { b.conj() * a };
        }
    }
    acc
}

/// `⟨p|q⟩` from explicit oscillators, for `N ∈ {2, 3}` and at most eight quanta.
pub fn oracle_inner_product(p: &Partition, q: &Partition, n: u32) -> Result<f64> {
    if !(2..=3).contains(&n) {
        return Err(Error::OracleLimit(format!("oracle inner products need N in {{2, 3}}, got {n}")));
    }
    if p.quanta() > DenseOracle::DEFAULT_MAX_QUANTA || q.quanta() > DenseOracle::DEFAULT_MAX_QUANTA {
        return Err(Error::OracleLimit("more than 8 quanta".into()));
    }
    let oracle = DenseOracle::new(n)?;
    let v = inner(&oracle.brick_state(p)?, &oracle.brick_state(q)?);
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_orthonormal_and_traceless() {
        for n in 2..=4 {
            let g = generators(n);
            assert_eq!(g.len(), n * n - 1);
            for (a, x) in g.iter().enumerate() {
                assert!(x.trace().norm() < 1e-14);
                for (b, y) in g.iter().enumerate() {
                    let t = (x * y).trace();
                    let want = if a == b { 0.5 } else { 0.0 };
                    assert!((t - Complex64::new(want, 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn vacuum_and_first_brick_norms() {
        let z = Partition::zero(3);
        assert!((oracle_inner_product(&z, &z, 3).unwrap() - 1.0).abs() < 1e-14);
        let one = Partition::new(3, vec![1, 0]).unwrap();
        assert!((oracle_inner_product(&one, &one, 3).unwrap() - 4.0).abs() < 1e-12);
        assert!(oracle_inner_product(&one, &one, 4).is_err());
        let big = Partition::new(2, vec![5]).unwrap();
        assert!(oracle_inner_product(&big, &big, 2).is_err());
    }

    #[test]
    fn truncation_is_reported() {
        let o = DenseOracle::with_max_quanta(2, 3).unwrap();
        let p = Partition::new(2, vec![2]).unwrap();
        assert!(matches!(o.brick_state(&p), Err(Error::OracleLimit(_))));
    }
}
