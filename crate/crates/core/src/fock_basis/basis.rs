use std::collections::HashMap;

use serde::Serialize;

use crate::error::{check_rank, Result};
use crate::partition::Partition;
use crate::trace_algebra::TraceExpr;

/// All bosonic trace states with at most `ncut` quanta, ordered by `(quanta, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutBasis {
    n: u32,
    ncut: u32,
    states: Vec<Partition>,
    #[serde(skip)]
    index: HashMap<Partition, usize>,
}

impl CutBasis {
    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn ncut(&self) -> u32 {
        self.ncut
    }

    pub fn states(&self) -> &[Partition] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index ranges of the fixed-quanta blocks, as `(quanta, start..end)`.
    pub fn blocks(&self) -> Vec<(u32, std::ops::Range<usize>)> {
        let mut out: Vec<(u32, std::ops::Range<usize>)> = Vec::new();
        for (i, p) in self.states.iter().enumerate() {
            let q = p.quanta();
            match out.last_mut() {
                Some((lq, r)) if *lq == q => r.end = i + 1,
                _ => out.push((q, i..i + 1)),
            }
        }
        out
    }
}

/// Enumerates every partition with `Σ k p_k ≤ ncut` and parts in `2..=n`.
pub fn enumerate_basis(n: u32, ncut: u32) -> Result<CutBasis> {
    check_rank(n)?;
    let mut states = Vec::new();
    let mut cur = vec![0u32; (n - 1) as usize];
    fill(n, n, ncut, &mut cur, &mut states);
    states.sort();
    let index = states.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(CutBasis { n, ncut, states, index })
}

fn fill(n: u32, k: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if k < 2 {
        out.push(Partition::new(n, cur.clone()).expect("length fixed"));
        return;
    }
    for c in 0..=budget / k {
        cur[(k - 2) as usize] = c;
        fill(n, k - 1, budget - c * k, cur, out);
    }
    cur[(k - 2) as usize] = 0;
}

/// `Π_k (a†^k)^{p_k}` with no reduction applied.
pub fn state_expr(p: &Partition) -> TraceExpr {
    p.to_expr()
}
