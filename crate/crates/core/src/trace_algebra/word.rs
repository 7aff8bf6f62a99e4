use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// One matrix factor inside a trace: `a†` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Create,
    Annihilate,
}

impl Letter {
    pub fn conjugate(self) -> Letter {
        match self {
            Letter::Create => Letter::Annihilate,
            Letter::Annihilate => Letter::Create,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::Create => 'A',
            Letter::Annihilate => 'a',
        }
    }
}

/// A single trace `tr(x1 x2 ... xL)` of creation and annihilation matrices,
/// stored in its lexicographically smallest rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceWord(Vec<Letter>);

/// Smallest rotation of a cyclic sequence. Quadratic, which is fine for the short words used here.
pub(crate) fn min_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    let len = seq.len();
    if len < 2 {
        return seq.to_vec();
    }
    let mut best = 0;
    for start in 1..len {
        for off in 0..len {
            let a = &seq[(start + off) % len];
            let b = &seq[(best + off) % len];
            match a.cmp(b) {
                Ordering::Less => {
                    best = start;
                    break;
                }
                Ordering::Greater => break,
                Ordering::Equal => {}
            }
        }
    }
    seq[best..].iter().chain(&seq[..best]).cloned().collect()
}

impl TraceWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidWord("empty trace".into()));
        }
        Ok(TraceWord(min_rotation(&letters)))
    }

    /// `(a†^k)`. Panics for `k = 0`.
    pub fn creation(k: usize) -> Self {
        assert!(k > 0, "empty trace");
        TraceWord(vec![Letter::Create; k])
    }

    /// `(a^k)`. Panics for `k = 0`.
    pub fn annihilation(k: usize) -> Self {
        assert!(k > 0, "empty trace");
        TraceWord(vec![Letter::Annihilate; k])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&x| x == l).count()
    }

    pub fn is_pure(&self, l: Letter) -> bool {
        self.0.iter().all(|&x| x == l)
    }

    pub fn has_annihilator(&self) -> bool {
        self.0.contains(&Letter::Annihilate)
    }

    /// Hermitian conjugate: reverse the order and swap species.
    pub fn dagger(&self) -> TraceWord {
        let letters: Vec<Letter> = self.0.iter().rev().map(|l| l.conjugate()).collect();
        TraceWord(min_rotation(&letters))
    }

    fn sort_key(&self) -> (bool, usize) {
        (self.has_annihilator(), self.0.len())
    }
}

impl Ord for TraceWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for TraceWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            write!(f, "{}{}", l.symbol(), j - i)?;
            i = j;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Letter::{Annihilate as An, Create as Cr};

    #[test]
    fn rotation_is_canonical() {
        let w = TraceWord::new(vec![An, Cr, Cr]).unwrap();
        assert_eq!(w.letters(), &[Cr, Cr, An]);
        assert_eq!(w.to_string(), "(A2a1)");
        assert!(TraceWord::new(vec![]).is_err());
    }

    #[test]
    fn dagger_swaps_and_reverses() {
        let w = TraceWord::new(vec![Cr, Cr, An]).unwrap();
        assert_eq!(w.dagger().letters(), &[Cr, An, An]);
        assert_eq!(TraceWord::creation(3).dagger(), TraceWord::annihilation(3));
    }

    #[test]
    fn pure_creation_sorts_first() {
        let mixed = TraceWord::new(vec![Cr, An]).unwrap();
        let long = TraceWord::creation(5);
        assert!(long < mixed);
        assert!(TraceWord::creation(2) < long);
    }

    fn letter() -> impl Strategy<Value = Letter> {
        prop_oneof![Just(Cr), Just(An)]
    }

    proptest! {
        #[test]
        fn canonical_rotation_is_idempotent_and_rotation_invariant(
            letters in prop::collection::vec(letter(), 1..10),
            shift in 0usize..10,
        ) {
            let w = TraceWord::new(letters.clone()).unwrap();
            let again = TraceWord::new(w.letters().to_vec()).unwrap();
            prop_assert_eq!(&w, &again);
            let s = shift % letters.len();
            let rotated: Vec<Letter> = letters[s..].iter().chain(&letters[..s]).copied().collect();
            prop_assert_eq!(TraceWord::new(rotated).unwrap(), w.clone());
            prop_assert_eq!(w.dagger().dagger(), w);
        }
    }
}
