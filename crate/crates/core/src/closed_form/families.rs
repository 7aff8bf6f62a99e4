//! Families of solutions, fermionic brick tables and the closed-form spectra.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::laguerre::{laguerre_roots, LaguerreSpec};
use crate::error::{check_rank, Error, Result};

/// Where the fermionic content of a family comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BrickLabel {
    Bosonic,
    /// A product of distinct purely fermionic bricks `(f†^k)`, `k` odd.
    Pure(Vec<u32>),
    /// A brick `α` from an external table.
    Table(u32),
}

/// A family of solutions: bosonic tail `(p3, ..., pN)` and a fermionic brick carrying `n_B` bosons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Family {
    tail: Vec<u32>,
    nb: u32,
    label: BrickLabel,
}

impl Family {
    pub fn bosonic(tail: Vec<u32>) -> Self {
        Family { tail, nb: 0, label: BrickLabel::Bosonic }
    }

    pub fn with_brick(tail: Vec<u32>, brick: &Brick) -> Self {
        Family { tail, nb: brick.nb, label: brick.label.clone() }
    }

    /// Checks the tail length against the rank.
    pub fn validate(&self, n: u32) -> Result<()> {
        check_rank(n)?;
        if self.tail.len() != (n - 2) as usize {
            return Err(Error::InvalidArgument(format!(
                "family tail for N={n} needs {} entries, got {}",
                n - 2,
                self.tail.len()
            )));
        }
        Ok(())
    }

    pub fn tail(&self) -> &[u32] {
        &self.tail
    }

    pub fn nb(&self) -> u32 {
        self.nb
    }

    pub fn label(&self) -> &BrickLabel {
        &self.label
    }

    /// `Σ_{k≥3} k p_k`.
    pub fn weight(&self) -> u32 {
        tail_weight(&self.tail)
    }

    pub fn is_empty_tail(&self) -> bool {
        self.tail.iter().all(|&v| v == 0)
    }

    /// `γ = Σ k p_k + ½(N²−1) − 1 + n_B`.
    pub fn gamma(&self, n: u32) -> f64 {
        (self.weight() + self.nb) as f64 + 0.5 * (n * n - 1) as f64 - 1.0
    }

    /// Number of roots at this cutoff, `⌊(ncut − Σ k p_k − n_B)/2⌋ + 1`, or 0 when the family does not fit.
    pub fn order(&self, ncut: u32) -> u32 {
        let base = self.weight() + self.nb;
        if base > ncut {
            0
        } else {
            (ncut - base) / 2 + 1
        }
    }

    pub fn spec(&self, n: u32, ncut: u32) -> LaguerreSpec {
        LaguerreSpec { order: self.order(ncut), index: self.gamma(n) }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail: Vec<String> = self.tail.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", tail.join(","))?;
        match &self.label {
            BrickLabel::Bosonic => Ok(()),
            BrickLabel::Pure(ks) => {
                let ks: Vec<String> = ks.iter().map(u32::to_string).collect();
                write!(f, "[f{}]", ks.join(","))
            }
            BrickLabel::Table(alpha) => write!(f, "[alpha={alpha},nB={}]", self.nb),
        }
    }
}

pub(crate) fn tail_weight(tail: &[u32]) -> u32 {
    tail.iter().enumerate().map(|(i, &v)| (i as u32 + 3) * v).sum()
}

/// All tails `(p3, ..., pN)` with `Σ k p_k ≤ max_weight`, ordered by weight then lexicographically.
pub fn tails(n: u32, max_weight: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, n: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k > n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left / k {
            cur.push(v);
            go(k + 1, n, left - v * k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(3, n, max_weight, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| tail_weight(a).cmp(&tail_weight(b)).then_with(|| a.cmp(b)));
    out
}

/// A fermionic brick as seen by the bosonic recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Brick {
    pub label: BrickLabel,
    pub nb: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableBrick {
    pub alpha: u32,
    #[serde(rename = "nB")]
    pub nb: u32,
}

/// External fermionic brick data for one `(N, n_F)` sector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrickTable {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "nF")]
    pub nf: u32,
    pub bricks: Vec<TableBrick>,
}

impl BrickTable {
    pub fn from_json(text: &str) -> Result<Self> {
        let t: BrickTable = serde_json::from_str(text)?;
        t.validate()?;
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        check_rank(self.n)?;
        let mut seen = BTreeSet::new();
        for b in &self.bricks {
            if !seen.insert(b.alpha) {
                return Err(Error::InvalidArgument(format!("brick label alpha={} repeated", b.alpha)));
            }
        }
        Ok(())
    }
}

/// Subsets of `{3, 5, ..., 2N−1}` whose sum is `nf`, each ascending.
pub fn pure_fermionic_subsets(n: u32, nf: u32) -> Vec<Vec<u32>> {
    let odd: Vec<u32> = (2..=n).map(|k| 2 * k - 1).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << odd.len()) {
        let subset: Vec<u32> = odd.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &k)| k).collect();
        if subset.iter().sum::<u32>() == nf {
            out.push(subset);
        }
    }
    out.sort();
    out
}

/// Checks a set of purely fermionic brick indices: odd, in `3..=2N−1`, no repeats.
pub fn check_fermion_indices(n: u32, indices: &[u32]) -> Result<Vec<u32>> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidDressing(format!("brick (f†^{}) used twice", w[0])));
        }
    }
    for &k in &sorted {
        if k % 2 == 0 || k < 3 || k > 2 * n - 1 {
            return Err(Error::InvalidDressing(format!(
                "no purely fermionic brick (f†^{k}) at N={n}; allowed are odd 3..={}",
                2 * n - 1
            )));
        }
    }
    Ok(sorted)
}

/// The bricks a fermion-number sector is built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    Bosonic,
    Fermionic { nf: u32, bricks: Vec<Brick> },
}

impl Sector {
    /// Purely fermionic bricks reaching `nf` plus the bricks of the table, if any.
    /// Sector 0 without a table is the bosonic sector.
    pub fn resolve(n: u32, nf: u32, table: Option<&BrickTable>) -> Result<Sector> {
        check_rank(n)?;
        if nf == 0 && table.is_none() {
            return Ok(Sector::Bosonic);
        }
        let mut bricks: Vec<Brick> = pure_fermionic_subsets(n, nf)
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|s| Brick { label: BrickLabel::Pure(s), nb: 0 })
            .collect();
        if let Some(t) = table {
            t.validate()?;
            if t.n != n || t.nf != nf {
                return Err(Error::InvalidArgument(format!(
                    "brick table is for N={}, nF={}, requested N={n}, nF={nf}",
                    t.n, t.nf
                )));
            }
            bricks.extend(t.bricks.iter().map(|b| Brick { label: BrickLabel::Table(b.alpha), nb: b.nb }));
        }
        if nf == 0 {
            bricks.insert(0, Brick { label: BrickLabel::Bosonic, nb: 0 });
        }
        if bricks.is_empty() {
            return Err(Error::BrickDataUnavailable { n, nf });
        }
        Ok(Sector::Fermionic { nf, bricks })
    }

    /// The sector spanned by one product of purely fermionic bricks.
    pub fn from_indices(n: u32, indices: &[u32]) -> Result<Sector> {
        let ks = check_fermion_indices(n, indices)?;
        if ks.is_empty() {
            return Ok(Sector::Bosonic);
        }
        Ok(Sector::Fermionic { nf: ks.iter().sum(), bricks: vec![Brick { label: BrickLabel::Pure(ks), nb: 0 }] })
    }

    pub fn nf(&self) -> u32 {
        match self {
            Sector::Bosonic => 0,
            Sector::Fermionic { nf, .. } => *nf,
        }
    }

    fn bricks(&self) -> Vec<Brick> {
        match self {
            Sector::Bosonic => vec![Brick { label: BrickLabel::Bosonic, nb: 0 }],
            Sector::Fermionic { bricks, .. } => bricks.clone(),
        }
    }
}

/// Families with at least one root at this cutoff, with their orders.
pub fn enumerate_families(n: u32, ncut: u32, sector: &Sector) -> Result<Vec<(Family, u32)>> {
    check_rank(n)?;
    let mut out = Vec::new();
    for brick in sector.bricks() {
        if brick.nb > ncut {
            continue;
        }
        for tail in tails(n, ncut - brick.nb) {
            let fam = Family::with_brick(tail, &brick);
            let m = fam.order(ncut);
            if m > 0 {
                out.push((fam, m));
            }
        }
    }
    Ok(out)
}

/// One closed-form level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormLevel {
    pub energy: f64,
    pub family: Family,
    pub root_index: u32,
}

/// A distinct energy and how many families produce it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Degenerate {
    pub energy: f64,
    pub multiplicity: usize,
}

/// The closed-form spectrum at one cutoff: all family roots, ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClosedForm {
    pub n: u32,
    pub ncut: u32,
    pub nf: u32,
    pub entries: Vec<ClosedFormLevel>,
}

/// Relative tolerance for merging coincident roots of different families.
pub const DEDUP_TOLERANCE: f64 = 1e-10;

impl SpectrumClosedForm {
    pub fn energies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct energies with multiplicities, merging within [`DEDUP_TOLERANCE`].
    pub fn degeneracies(&self) -> Vec<Degenerate> {
        let mut out: Vec<Degenerate> = Vec::new();
        for e in &self.entries {
            match out.last_mut() {
                Some(last) if (e.energy - last.energy).abs() <= DEDUP_TOLERANCE * e.energy.abs().max(1.0) => {
                    last.multiplicity += 1
                }
                _ => out.push(Degenerate { energy: e.energy, multiplicity: 1 }),
            }
        }
        out
    }
}

/// Zeros of `Π_families L_m^γ(2E)` at this cutoff.
pub fn theta(n: u32, ncut: u32, sector: &Sector) -> Result<SpectrumClosedForm> {
    let mut entries = Vec::new();
    for (fam, _) in enumerate_families(n, ncut, sector)? {
        for (i, x) in laguerre_roots(fam.spec(n, ncut)).into_iter().enumerate() {
            entries.push(ClosedFormLevel { energy: x / 2.0, family: fam.clone(), root_index: i as u32 });
        }
    }
    entries.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.family.cmp(&b.family)));
    Ok(SpectrumClosedForm { n, ncut, nf: sector.nf(), entries })
}

pub fn theta_bosonic(n: u32, ncut: u32) -> Result<SpectrumClosedForm> {
    theta(n, ncut, &Sector::Bosonic)
}

/// Fermionic sector `nf`; needs either purely fermionic bricks reaching `nf` or a table.
pub fn theta_fermionic(n: u32, ncut: u32, nf: u32, table: Option<&BrickTable>) -> Result<SpectrumClosedForm> {
    theta(n, ncut, &Sector::resolve(n, nf, table)?)
}
