//! Normal ordering of trace products by Wick contraction with the su(N) completeness relation.
//!
//! Letters are tagged with their operator position. A contraction is allowed between an
//! annihilator and any creator standing to its right; each contraction removes both
//! letters and rewires the traces through
//! `Σ_A (T_A)_ij (T_A)_kl = ½ (δ_il δ_jk − δ_ij δ_kl / N)`.

use std::collections::HashMap;

use num_traits::Zero;

use super::expr::TraceExpr;
use super::word::{min_rotation, Letter, TraceWord};
use crate::error::{Error, Result};
use crate::rational::{frac, int, Q};

type Code = u16;
type RawTerm = Vec<Vec<Code>>;

/// Code of an annihilator that was left uncontracted.
const FROZEN: Code = 0x7FFF;
const MAX_POS: u16 = 0x3FFE;

fn code(pos: u16, l: Letter) -> Code {
    (pos << 1) | matches!(l, Letter::Annihilate) as u16
}

fn is_active_annihilator(c: Code) -> bool {
    c & 1 == 1 && c != FROZEN
}

fn is_creator(c: Code) -> bool {
    c & 1 == 0
}

/// A sum of operator products in a definite order, ready to be normal ordered.
#[derive(Clone, Debug)]
pub struct OrderedProduct {
    n: u32,
    terms: Vec<(Q, RawTerm)>,
    next_pos: u16,
}

impl OrderedProduct {
    pub fn identity(n: u32) -> Self {
        OrderedProduct { n, terms: vec![(int(1), Vec::new())], next_pos: 0 }
    }

    /// A literal product of traces, letters acting in the written order
    /// (the rightmost letter of the rightmost trace acts first).
    pub fn written(n: u32, traces: &[Vec<Letter>]) -> Result<Self> {
        Self::identity(n).then_written(traces)
    }

    /// A single normal-ordered factor.
    pub fn from_normal(e: &TraceExpr) -> Self {
        Self::identity(e.rank()).then(e)
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    /// Appends a normal-ordered factor on the right.
    pub fn then(&self, e: &TraceExpr) -> Self {
        assert!(self.next_pos + 2 <= MAX_POS, "operator product too long");
        let cpos = self.next_pos;
        let apos = self.next_pos + 1;
        let mut terms = Vec::with_capacity(self.terms.len() * e.len());
        for (c0, t0) in &self.terms {
            for (ws, c1) in e.terms() {
                let mut t = t0.clone();
                for w in ws {
                    t.push(
                        w.letters().iter().map(|&l| code(if l == Letter::Create { cpos } else { apos }, l)).collect(),
                    );
                }
                terms.push((c0 * c1, t));
            }
        }
        OrderedProduct { n: self.n, terms, next_pos: self.next_pos + 2 }
    }

    /// Appends a literal product of traces on the right.
    pub fn then_written(&self, traces: &[Vec<Letter>]) -> Result<Self> {
        let total: usize = traces.iter().map(|t| t.len()).sum();
        if traces.iter().any(|t| t.is_empty()) {
            return Err(Error::InvalidWord("empty trace".into()));
        }
        if self.next_pos as usize + total > MAX_POS as usize {
            return Err(Error::InvalidArgument("operator product too long".into()));
        }
        let mut pos = self.next_pos;
        let mut raw = Vec::with_capacity(traces.len());
        for t in traces {
            let mut w = Vec::with_capacity(t.len());
            for &l in t {
                w.push(code(pos, l));
                pos += 1;
            }
            raw.push(w);
        }
        let terms = self
            .terms
            .iter()
            .map(|(c, t0)| {
                let mut t = t0.clone();
                t.extend(raw.iter().cloned());
                (c.clone(), t)
            })
            .collect();
        Ok(OrderedProduct { n: self.n, terms, next_pos: pos })
    }
}

struct Engine {
    n: u32,
    n_q: Q,
    half: Q,
    cross: Q,
}

enum Piece {
    Scalar,
    Zero,
    Word(Vec<Code>),
}

fn piece(letters: Vec<Code>) -> Piece {
    match letters.len() {
        0 => Piece::Scalar,
        1 => Piece::Zero,
        _ => Piece::Word(letters),
    }
}

fn canonical(mut t: RawTerm) -> RawTerm {
    for w in t.iter_mut() {
        *w = min_rotation(w);
    }
    t.sort();
    t
}

/// Letters of a cyclic word strictly between positions `from` and `to`, walking forward.
fn cyclic_between(w: &[Code], from: usize, to: usize) -> Vec<Code> {
    let len = w.len();
    let mut out = Vec::new();
    let mut i = (from + 1) % len;
    while i != to {
        out.push(w[i]);
        i = (i + 1) % len;
    }
    out
}

impl Engine {
    fn new(n: u32) -> Self {
        Engine { n, n_q: int(n as i64), half: frac(1, 2), cross: frac(-1, 2 * n as i64) }
    }

    /// Contracts letter `a` with letter `b` (both `(word, index)`), returning weighted raw terms.
    fn contract(&self, t: &RawTerm, a: (usize, usize), b: (usize, usize)) -> Vec<(Q, RawTerm)> {
        let rest: Vec<Vec<Code>> =
            t.iter().enumerate().filter(|(i, _)| *i != a.0 && *i != b.0).map(|(_, w)| w.clone()).collect();
        let (split, fused) = if a.0 == b.0 {
            let w = &t[a.0];
            let y = cyclic_between(w, a.1, b.1);
            let z = cyclic_between(w, b.1, a.1);
            let mut yz = y.clone();
            yz.extend_from_slice(&z);
            ((self.half.clone(), vec![piece(y), piece(z)]), (self.cross.clone(), vec![piece(yz)]))
        } else {
            let w1 = &t[a.0];
            let w2 = &t[b.0];
            let y = cyclic_between(w1, a.1, a.1);
            let z = cyclic_between(w2, b.1, b.1);
            let mut yz = y.clone();
            yz.extend_from_slice(&z);
            ((self.cross.clone(), vec![piece(y), piece(z)]), (self.half.clone(), vec![piece(yz)]))
        };
        let mut out = Vec::with_capacity(2);
        for (mut coeff, pieces) in [split, fused] {
            let mut words = rest.clone();
            let mut dead = false;
            for p in pieces {
                match p {
                    Piece::Scalar => coeff *= &self.n_q,
                    Piece::Zero => dead = true,
                    Piece::Word(w) => words.push(w),
                }
            }
            if !dead && !coeff.is_zero() {
                out.push((coeff, canonical(words)));
            }
        }
        out
    }

    fn finish(&self, t: &RawTerm) -> Vec<TraceWord> {
        let mut ws: Vec<TraceWord> = t
            .iter()
            .map(|w| {
                TraceWord::new(
                    w.iter().map(|&c| if c & 1 == 1 { Letter::Annihilate } else { Letter::Create }).collect(),
                )
                .expect("nonempty")
            })
            .collect();
        ws.sort();
        ws
    }

    fn run(&self, prod: &OrderedProduct, allow_freeze: bool) -> TraceExpr {
        let mut pending: HashMap<RawTerm, Q> = HashMap::new();
        for (c, t) in &prod.terms {
            if t.iter().any(|w| w.len() == 1) {
                continue;
            }
            accumulate(&mut pending, canonical(t.clone()), c.clone());
        }
        let mut out = TraceExpr::zero(self.n);
        while !pending.is_empty() {
            let mut next: HashMap<RawTerm, Q> = HashMap::new();
            for (t, c) in pending {
                let mut best: Option<(usize, usize, Code)> = None;
                for (wi, w) in t.iter().enumerate() {
                    for (li, &x) in w.iter().enumerate() {
                        if is_active_annihilator(x) && best.is_none_or(|b| x < b.2) {
                            best = Some((wi, li, x));
                        }
                    }
                }
                let Some((wi, li, x)) = best else {
                    if allow_freeze || t.iter().all(|w| w.iter().all(|&c| is_creator(c))) {
                        out.add_term(self.finish(&t), c);
                    }
                    continue;
                };
                if allow_freeze {
                    let mut frozen = t.clone();
                    frozen[wi][li] = FROZEN;
                    accumulate(&mut next, canonical(frozen), c.clone());
                }
                for (wj, w) in t.iter().enumerate() {
                    for (lj, &y) in w.iter().enumerate() {
                        if is_creator(y) && y > x {
                            for (k, nt) in self.contract(&t, (wi, li), (wj, lj)) {
                                accumulate(&mut next, nt, &c * k);
                            }
                        }
                    }
                }
            }
            pending = next;
        }
        out
    }
}

fn accumulate(map: &mut HashMap<RawTerm, Q>, t: RawTerm, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(t).or_insert_with(Q::zero);
    *e += c;
}

/// Normal-ordered form of an operator product, as an exact operator identity at rank `N`.
pub fn normal_order(prod: &OrderedProduct) -> TraceExpr {
    Engine::new(prod.n).run(prod, true)
}

/// `prod |0⟩` as a pure-creation expression.
pub fn apply_to_vacuum(prod: &OrderedProduct) -> TraceExpr {
    Engine::new(prod.n).run(prod, false)
}

/// `⟨0| prod |0⟩`.
pub fn vacuum_expectation_of(prod: &OrderedProduct) -> Q {
    apply_to_vacuum(prod).scalar_part()
}

/// `⟨0| e |0⟩` for a normal-ordered expression: its scalar part.
pub fn vacuum_expectation(e: &TraceExpr) -> Q {
    e.scalar_part()
}

/// `[x, y]`, normal ordered.
pub fn commutator(x: &TraceExpr, y: &TraceExpr) -> TraceExpr {
    x.mul(y).sub(&y.mul(x))
}

/// One elementary contraction between the annihilator at `ann` and the creator at `cre`,
/// each given as `(word index, letter index)` into `words`. Contracting inside one word
/// splits it in two; contracting across two words fuses them. Untouched words are carried
/// along. Empty traces become factors of `N`, traces of length one vanish.
pub fn fierz_contract(n: u32, words: &[TraceWord], ann: (usize, usize), cre: (usize, usize)) -> Result<TraceExpr> {
    for &(wi, li) in [&ann, &cre] {
        let w = words.get(wi).ok_or(Error::PositionOutOfRange { index: wi, len: words.len() })?;
        if li >= w.len() {
            return Err(Error::PositionOutOfRange { index: li, len: w.len() });
        }
    }
    if words[ann.0].letters()[ann.1] != Letter::Annihilate {
        return Err(Error::WrongSpecies(ann.1));
    }
    if words[cre.0].letters()[cre.1] != Letter::Create {
        return Err(Error::WrongSpecies(cre.1));
    }
    let raw: RawTerm = words.iter().map(|w| w.letters().iter().map(|&l| code(0, l)).collect()).collect();
    let engine = Engine::new(n);
    let mut out = TraceExpr::zero(n);
    for (c, t) in engine.contract(&raw, ann, cre) {
        out.add_term(engine.finish(&t), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use Letter::{Annihilate as An, Create as Cr};

    fn cw(k: usize) -> TraceWord {
        TraceWord::creation(k)
    }

    fn aw(k: usize) -> TraceWord {
        TraceWord::annihilation(k)
    }

    #[test]
    fn fierz_within_and_across() {
        for n in 2..6u32 {
            let nn = n as i64;
            let within = fierz_contract(n, &[TraceWord::new(vec![An, Cr]).unwrap()], (0, 1), (0, 0)).unwrap();
            assert_eq!(within, TraceExpr::scalar(n, frac(nn * nn - 1, 2)));
            let across = fierz_contract(
                n,
                &[TraceWord::new(vec![An]).unwrap(), TraceWord::new(vec![Cr]).unwrap()],
                (0, 0),
                (1, 0),
            )
            .unwrap();
            assert!(across.is_zero());
        }
    }

    #[test]
    fn fierz_rejects_bad_positions() {
        let w = [cw(2)];
        assert!(matches!(fierz_contract(3, &w, (0, 0), (0, 1)), Err(Error::WrongSpecies(0))));
        assert!(matches!(fierz_contract(3, &w, (0, 5), (0, 1)), Err(Error::PositionOutOfRange { .. })));
        assert!(matches!(fierz_contract(3, &w, (2, 0), (0, 1)), Err(Error::PositionOutOfRange { .. })));
    }

    #[test]
    fn lowering_two_quanta_commutator() {
        for n in 2..6u32 {
            let nn = n as i64;
            let c = commutator(&TraceExpr::word(n, aw(2)), &TraceExpr::word(n, cw(2)));
            let mut expected = TraceExpr::word(n, TraceWord::new(vec![Cr, An]).unwrap()).scale(&int(2));
            expected = expected.add(&TraceExpr::scalar(n, frac(nn * nn - 1, 2)));
            assert_eq!(c, expected);
        }
    }

    #[test]
    fn number_operator_counts_half_quanta() {
        let n = 3;
        let num = TraceExpr::word(n, TraceWord::new(vec![Cr, An]).unwrap());
        for k in 2..7 {
            let c = commutator(&num, &TraceExpr::word(n, cw(k)));
            assert_eq!(c, TraceExpr::word(n, cw(k)).scale(&frac(k as i64, 2)));
        }
    }

    #[test]
    fn vacuum_expectations() {
        for n in 2..5u32 {
            let nn = n as i64;
            let prod = OrderedProduct::written(n, &[vec![An, An], vec![Cr, Cr]]).unwrap();
            assert_eq!(vacuum_expectation_of(&prod), frac(nn * nn - 1, 2));
            let rev = OrderedProduct::written(n, &[vec![Cr, Cr], vec![An, An]]).unwrap();
            assert!(vacuum_expectation_of(&rev).is_zero());
            assert_eq!(vacuum_expectation(&TraceExpr::one(n)), int(1));
        }
    }

    #[test]
    fn written_order_matters_inside_a_trace() {
        let n = 3;
        let ac = normal_order(&OrderedProduct::written(n, &[vec![An, Cr]]).unwrap());
        let ca = normal_order(&OrderedProduct::written(n, &[vec![Cr, An]]).unwrap());
        assert_eq!(ac.sub(&ca), TraceExpr::scalar(n, int(4)));
    }

    #[test]
    fn pure_creation_is_fixed() {
        let e = TraceExpr::monomial(4, vec![cw(2), cw(3), cw(7)], frac(3, 5));
        assert_eq!(normal_order(&OrderedProduct::from_normal(&e)), e);
        assert_eq!(e.mul(&TraceExpr::one(4)), e);
    }
}
