//! Property suites shared by the `verify` command and the acceptance tests.
//! Every check compares two independent routes and records what it saw.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::Zero;
use serde::Serialize;

use crate::closed_form::{tails, theta_bosonic, Family};
use crate::eigenstates::{
    continuum_overlap, describe_form, eval_form, recursion_residual_all, solve_mixing_coeffs, su3_printed_row,
    su4_printed_row, AnsatzScope, LoweringRoute, RecursionOperator, Su4Variant,
};
use crate::error::Result;
use crate::fock_basis::{enumerate_basis, inner, BasisAlgebra, DenseOracle};
use crate::hamiltonian::{hamiltonian_operator, s_inner};
use crate::partition::Partition;
use crate::rational::{frac, int, to_f64, Q};
use crate::report::{compare_multisets, SPECTRUM_TOLERANCE};
use crate::solver::Solver;
use crate::trace_algebra::{commutator, Letter, TraceExpr, TraceWord};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        SuiteReport { suite: suite.into(), passed: checks.iter().all(|c| c.passed), checks }
    }
}

/// The suites the `verify` command knows.
pub const SUITES: [&str; 8] =
    ["spectrum", "appendix", "oracle", "mixing", "recursion", "eigenstates", "overlap", "properties"];

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    match name {
        "spectrum" => spectrum_suite(&default_spectrum_cuts()),
        "appendix" => appendix_suite(&[2, 3, 4, 5]),
        "oracle" => oracle_suite(&[2, 3], 6),
        "mixing" => mixing_suite(&[4, 5, 6]),
        "recursion" => recursion_suite(),
        "eigenstates" => eigenstate_suite(4, 12, 8),
        "overlap" => overlap_suite(),
        "properties" => property_suite(),
        other => {
            Err(crate::Error::InvalidArgument(format!("unknown suite {other:?}; known: {}, all", SUITES.join(", "))))
        }
    }
}

/// `(N, largest N_cut)` for the spectrum agreement runs.
pub fn default_spectrum_cuts() -> Vec<(u32, u32)> {
    vec![(2, 20), (3, 20), (4, 12), (5, 10)]
}

/// Closed-form vs numeric multisets at every cut up to the limit, and the vacuum level for `N ≤ 6`.
pub fn spectrum_suite(cuts: &[(u32, u32)]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &(n, max_cut) in cuts {
        for ncut in 0..=max_cut {
            let s = Solver::new(n, ncut)?;
            let numeric = s.spectrum_numeric()?.eigenvalues;
            let closed = theta_bosonic(n, ncut)?.energies();
            let c = compare_multisets(&numeric, &closed, SPECTRUM_TOLERANCE);
            let ok = c.matched && c.count_numeric == s.basis().len();
            checks.push(Check::new(
                format!("spectrum N={n} ncut={ncut}"),
                ok,
                format!(
                    "dim {} numeric {} closed {} max rel dev {:.2e}",
                    s.basis().len(),
                    c.count_numeric,
                    c.count_closed,
                    c.max_relative_deviation
                ),
            ));
        }
    }
    for n in 2..=6u32 {
        let want = (n * n - 1) as f64 / 4.0;
        let s = Solver::new(n, 0)?;
        let numeric = s.spectrum_numeric()?.eigenvalues;
        let closed = theta_bosonic(n, 0)?.energies();
        let ok = numeric.len() == 1
            && closed.len() == 1
            && (numeric[0] - want).abs() <= 1e-12
            && (closed[0] - want).abs() <= 1e-12
            && s.hamiltonian().entries()[0][0] == frac((n * n - 1) as i64, 4) * s.gram().get(0, 0);
        checks.push(Check::new(
            format!("vacuum level N={n}"),
            ok,
            format!("numeric {numeric:?} closed {closed:?} expected {want}"),
        ));
    }
    Ok(SuiteReport::new("spectrum", checks))
}

fn creation(n: u32, k: u32) -> TraceExpr {
    match k {
        0 => TraceExpr::scalar(n, int(n as i64)),
        1 => TraceExpr::zero(n),
        _ => TraceExpr::word(n, TraceWord::creation(k as usize)),
    }
}

/// `(a†^k a)`.
fn mixed(n: u32, k: u32) -> TraceExpr {
    if k == 0 {
        return TraceExpr::zero(n);
    }
    let mut letters = vec![Letter::Create; k as usize];
    letters.push(Letter::Annihilate);
    TraceExpr::word(n, TraceWord::new(letters).expect("nonempty"))
}

fn power(e: &TraceExpr, m: u32) -> TraceExpr {
    (0..m).fold(TraceExpr::one(e.rank()), |acc, _| acc.mul(e))
}

/// `Σ_{j=2}^{n−4} (a†^j)(a†^{n−2−j})`, empty when `n < 6`.
fn printed_sum(rank: u32, n: u32) -> TraceExpr {
    let mut acc = TraceExpr::zero(rank);
    if n >= 6 {
        for j in 2..=n - 4 {
            acc = acc.add(&creation(rank, j).mul(&creation(rank, n - 2 - j)));
        }
    }
    acc
}

/// The printed single-brick commutator.
pub fn printed_commutator(rank: u32, n: u32) -> TraceExpr {
    let (ni, nn) = (n as i64, rank as i64);
    // (nN/2)(1/2 − (n−1)/(2N²))
    let c0 = frac(ni * nn, 2) * (frac(1, 2) - frac(ni - 1, 2 * nn * nn));
    mixed(rank, n - 1)
        .scale(&int(ni))
        .add(&creation(rank, n - 2).scale(&c0))
        .add(&printed_sum(rank, n).scale(&frac(ni, 4)))
}

/// The printed commutator with a power of one brick.
pub fn printed_power_commutator(rank: u32, n: u32, m: u32) -> TraceExpr {
    let (ni, mi, nn) = (n as i64, m as i64, rank as i64);
    let brick = creation(rank, n);
    // creators stand to the left, as printed
    let mut out = power(&brick, m - 1).mul(&mixed(rank, n - 1)).scale(&int(mi * ni));
    if m >= 2 {
        let base = power(&brick, m - 2);
        out = out
            .add(&base.mul(&creation(rank, 2 * n - 2)).scale(&frac(mi * (mi - 1) * ni * ni, 4)))
            .add(&base.mul(&power(&creation(rank, n - 1), 2)).scale(&frac(-mi * (mi - 1) * ni * ni, 4 * nn)));
    }
    let c0 = int(mi * ni) * frac(nn, 2) * (frac(1, 2) - frac(ni - 1, 2 * nn * nn));
    out.add(&creation(rank, n - 2).mul(&power(&brick, m - 1)).scale(&c0))
        .add(&printed_sum(rank, n).mul(&power(&brick, m - 1)).scale(&frac(mi * ni, 4)))
}

/// `[(aa), (a†^n)^m]` by normal ordering, with length-one traces dropped.
pub fn engine_power_commutator(rank: u32, n: u32, m: u32) -> TraceExpr {
    let aa = TraceExpr::word(rank, TraceWord::annihilation(2));
    commutator(&aa, &power(&creation(rank, n), m)).drop_linear_traces()
}

/// Commutators of `(aa)` with brick powers: engine against the hand-written identities, exact.
pub fn appendix_suite(ranks: &[u32]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &rank in ranks {
        for n in 2..=6 {
            let engine = engine_power_commutator(rank, n, 1);
            let printed = printed_commutator(rank, n);
            let diff = engine.sub(&printed);
            checks.push(Check::new(
                format!("[(aa),(a†{n})] N={rank}"),
                diff.is_zero(),
                if diff.is_zero() { "exact".into() } else { format!("engine − printed = {diff}") },
            ));
        }
        for n in 2..=8u32 {
            for m in 1..=8 / n {
                let engine = engine_power_commutator(rank, n, m);
                let printed = printed_power_commutator(rank, n, m);
                let diff = engine.sub(&printed);
                checks.push(Check::new(
                    format!("[(aa),(a†{n})^{m}] N={rank}"),
                    diff.is_zero(),
                    if diff.is_zero() { "exact".into() } else { format!("engine − printed = {diff}") },
                ));
            }
        }
    }
    Ok(SuiteReport::new("appendix", checks))
}

/// Gram and Hamiltonian elements against explicit oscillators.
pub fn oracle_suite(ranks: &[u32], max_quanta: u32) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &n in ranks {
        let oracle = DenseOracle::with_max_quanta(n, max_quanta + 2)?;
        let s = Solver::new(n, max_quanta)?;
        let h_op = hamiltonian_operator(n);
        let states: Vec<_> = s.basis().states().iter().map(|p| oracle.brick_state(p)).collect::<Result<_>>()?;
        let images: Vec<_> = states.iter().map(|v| oracle.apply_normal(&h_op, v)).collect::<Result<_>>()?;
        let (mut worst_s, mut worst_h) = (0.0f64, 0.0f64);
        for i in 0..states.len() {
            for j in 0..states.len() {
                let so = inner(&states[i], &states[j]);
                let ho = inner(&states[i], &images[j]);
                worst_s = worst_s.max((so.re - to_f64(s.gram().get(i, j))).abs()).max(so.im.abs());
                worst_h = worst_h.max((ho.re - to_f64(&s.hamiltonian().entries()[i][j])).abs()).max(ho.im.abs());
            }
        }
        let d = states.len();
        checks.push(Check::new(
            format!("gram N={n} quanta<={max_quanta}"),
            worst_s <= 1e-10,
            format!("{d}x{d}, max abs deviation {worst_s:.2e}"),
        ));
        checks.push(Check::new(
            format!("hamiltonian N={n} quanta<={max_quanta}"),
            worst_h <= 1e-10,
            format!("{d}x{d}, max abs deviation {worst_h:.2e}"),
        ));
    }
    Ok(SuiteReport::new("oracle", checks))
}

/// The printed amplitude of `|n+3, 0, …⟩` in family `{2,0,…}`: `−(18/N)/(24 + 6(N²−1))`.
pub fn printed_two_cube_amplitude(n: u32) -> Q {
    let nn = n as i64;
    frac(-18, nn) / int(24 + 6 * (nn * nn - 1))
}

/// Family `{2,0,…}` amplitude on the empty tail against the printed value.
pub fn mixing_suite(ranks: &[u32]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &n in ranks {
        let alg = BasisAlgebra::new(n)?;
        let mut tail = vec![0; (n - 2) as usize];
        tail[0] = 2;
        let fam = Family::bosonic(tail);
        let want = printed_two_cube_amplitude(n);
        let zero = vec![0; (n - 2) as usize];
        let componentwise = match solve_mixing_coeffs(&alg, &fam, AnsatzScope::Componentwise) {
            Ok(m) => format!("componentwise A = {}", m.get(&zero)),
            Err(e) => format!("componentwise: {e}"),
        };
        let all = solve_mixing_coeffs(&alg, &fam, AnsatzScope::AllLowerTails)?;
        let got = all.get(&zero);
        let others: Vec<String> =
            all.amplitudes.iter().filter(|(l, _)| **l != zero).map(|(l, a)| format!("{l:?}: {a}")).collect();
        checks.push(Check::new(
            format!("two-cube amplitude N={n}"),
            got == want,
            format!("solved A = {got}, printed {want}; other tails {{{}}}; {componentwise}", others.join(", ")),
        ));
    }
    Ok(SuiteReport::new("mixing", checks))
}

fn random_rationals(len: usize, seed: u64) -> Vec<Q> {
    // small deterministic generator; only needs to avoid accidental cancellations
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..len)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let num = ((state >> 33) % 199) as i64 - 99;
            let den = ((state >> 17) % 7) as i64 + 1;
            frac(num, den)
        })
        .collect()
}

fn compare_rows(
    op: &RecursionOperator,
    printed: impl Fn(&Partition) -> BTreeMap<Partition, Q>,
    seeds: u64,
) -> (usize, usize, Option<String>) {
    let mut checked = 0;
    let mut bad = 0;
    let mut example = None;
    let index: BTreeMap<&Partition, usize> = op.states().iter().enumerate().map(|(i, p)| (p, i)).collect();
    for i in 0..op.dim() {
        if !op.is_interior(i) {
            continue;
        }
        checked += 1;
        let p = &op.states()[i];
        let generic = op.row_form(i);
        let hand = printed(p);
        let mut same = generic == hand;
        for seed in 0..seeds {
            let c = random_rationals(op.dim(), seed);
            let lookup = |q: &Partition| index.get(q).map(|&j| c[j].clone()).unwrap_or_else(Q::zero);
            same &= eval_form(&generic, lookup) == eval_form(&hand, lookup);
        }
        if !same {
            bad += 1;
            if example.is_none() {
                example =
                    Some(format!("row {p}: generic {} | printed {}", describe_form(&generic), describe_form(&hand)));
            }
        }
    }
    (checked, bad, example)
}

/// Generic recursion rows against the hand-written SU(3)/SU(4) forms, and numeric eigenvectors.
pub fn recursion_suite() -> Result<SuiteReport> {
    let mut checks = Vec::new();

    let alg = BasisAlgebra::new(3)?;
    let op = RecursionOperator::new(&alg, &enumerate_basis(3, 16)?, LoweringRoute::Engine)?;
    let (n, bad, ex) = compare_rows(&op, |p| su3_printed_row(p.get(2), p.get(3)), 3);
    checks.push(Check::new(
        "SU(3) printed recursion",
        bad == 0,
        format!("{n} interior rows, {bad} differ{}", ex.map(|e| format!("; {e}")).unwrap_or_default()),
    ));

    let alg = BasisAlgebra::new(4)?;
    let op = RecursionOperator::new(&alg, &enumerate_basis(4, 14)?, LoweringRoute::Engine)?;
    for (label, variant) in [("printed", Su4Variant::Printed), ("corrected", Su4Variant::Corrected)] {
        let (n, bad, ex) = compare_rows(&op, |p| su4_printed_row(p.get(2), p.get(3), p.get(4), variant), 3);
        checks.push(Check::new(
            format!("SU(4) {label} recursion"),
            bad == 0,
            format!("{n} interior rows, {bad} differ{}", ex.map(|e| format!("; {e}")).unwrap_or_default()),
        ));
    }

    for (n, ncut) in [(2u32, 20u32), (3, 14), (4, 12), (5, 10)] {
        let s = Solver::new(n, ncut)?;
        let op = RecursionOperator::new(s.algebra(), s.basis(), LoweringRoute::PairFormula)?;
        let sp = s.spectrum_numeric()?;
        let mut worst = 0.0f64;
        for (e, c) in sp.eigenvalues.iter().zip(&sp.eigenvectors) {
            let m = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let c: Vec<f64> = c.iter().map(|v| v / m).collect();
            worst = worst.max(recursion_residual_all(&op, &c, *e));
        }
        checks.push(Check::new(
            format!("numeric eigenvectors N={n} ncut={ncut}"),
            worst <= 1e-8,
            format!("{} vectors, max row residual {worst:.2e}", sp.eigenvalues.len()),
        ));
    }
    Ok(SuiteReport::new("recursion", checks))
}

/// Every family state at every root solves the cut problem.
pub fn eigenstate_suite(max_rank: u32, max_cut: u32, max_weight: u32) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for n in 2..=max_rank {
        for ncut in 0..=max_cut {
            let s = Solver::new(n, ncut)?;
            let mut worst = 0.0f64;
            let mut count = 0;
            let mut failure = None;
            for tail in tails(n, max_weight.min(ncut)) {
                let fam = Family::bosonic(tail);
                for k in 0..fam.order(ncut) as usize {
                    match s.family_state(&fam, k, AnsatzScope::AllLowerTails) {
                        Ok(st) => {
                            worst = worst.max(s.residual(&st));
                            count += 1;
                        }
                        Err(e) => {
                            failure.get_or_insert_with(|| format!("{fam} root {k}: {e}"));
                        }
                    }
                }
            }
            checks.push(Check::new(
                format!("family states N={n} ncut={ncut}"),
                failure.is_none() && worst <= 1e-8,
                match failure {
                    Some(f) => f,
                    None => format!("{count} states, max relative residual {worst:.2e}"),
                },
            ));
        }
    }
    Ok(SuiteReport::new("eigenstates", checks))
}

/// Series against Bessel closed form on a grid.
pub fn overlap_suite() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for n in [3u32, 4] {
        let mut worst = 0.0f64;
        for e1 in [0.5, 1.0, 2.0] {
            for e2 in [0.5, 1.0, 2.0] {
                for z in [0.3, 0.6, 0.9] {
                    let (a, b) = continuum_overlap(n, e1, e2, z)?;
                    worst = worst.max((a - b).abs() / b.abs());
                }
            }
        }
        checks.push(Check::new(
            format!("overlap N={n}"),
            worst <= 1e-8,
            format!("27 grid points, max relative deviation {worst:.2e}"),
        ));
    }
    Ok(SuiteReport::new("overlap", checks))
}

/// Interlacing in the cutoff, lowest level in the empty-tail family, S-orthogonality and completeness.
pub fn property_suite() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (n, max_cut) in [(2u32, 16u32), (3, 14), (4, 12), (5, 10)] {
        let mut prev: Option<Vec<f64>> = None;
        let mut monotone = true;
        let mut lowest_ok = true;
        let mut lowest_dec = true;
        let mut last_low = f64::INFINITY;
        for ncut in 0..=max_cut {
            let levels = Solver::new(n, ncut)?.spectrum_numeric()?.eigenvalues;
            if let Some(p) = &prev {
                monotone &= p.iter().zip(&levels).all(|(old, new)| *new <= old + 1e-9 * old.abs());
            }
            let closed = theta_bosonic(n, ncut)?;
            lowest_ok &= closed.entries[0].family.is_empty_tail();
            let low = closed.entries[0].energy;
            if ncut % 2 == 0 {
                lowest_dec &= low < last_low;
                last_low = low;
            }
            prev = Some(levels);
        }
        checks.push(Check::new(
            format!("levels fall with the cutoff N={n}"),
            monotone,
            format!("k-th level at ncut+1 ≤ k-th level at ncut, ncut ≤ {max_cut}"),
        ));
        checks.push(Check::new(
            format!("lowest level in the empty-tail family N={n}"),
            lowest_ok && lowest_dec,
            format!("ncut ≤ {max_cut}, strictly decreasing over even cuts: {lowest_dec}"),
        ));
    }
    for (n, ncut) in [(2u32, 12u32), (3, 12), (4, 10)] {
        let s = Solver::new(n, ncut)?;
        let mut states = Vec::new();
        let mut energies = Vec::new();
        for (fam, m) in crate::closed_form::enumerate_families(n, ncut, &crate::closed_form::Sector::Bosonic)? {
            for k in 0..m as usize {
                let st = s.family_state(&fam, k, AnsatzScope::AllLowerTails)?;
                energies.push(st.energy);
                states.push(st.to_basis_vector(s.basis()));
            }
        }
        let d = states.len();
        let norms: Vec<f64> = states.iter().map(|v| s_inner(s.gram(), v, v).sqrt()).collect();
        let mut worst = 0.0f64;
        let overlaps = DMatrix::from_fn(d, d, |i, j| s_inner(s.gram(), &states[i], &states[j]) / (norms[i] * norms[j]));
        for i in 0..d {
            for j in 0..i {
                if (energies[i] - energies[j]).abs() > 1e-9 * energies[i].abs() {
                    worst = worst.max(overlaps[(i, j)].abs());
                }
            }
        }
        checks.push(Check::new(
            format!("S-orthogonality N={n} ncut={ncut}"),
            worst <= 1e-8,
            format!("{d} states, max |cos| between distinct roots {worst:.2e}"),
        ));
        let smallest = overlaps.symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, &v| a.min(v));
        checks.push(Check::new(
            format!("family states span the cut N={n} ncut={ncut}"),
            d == s.basis().len() && smallest > 1e-6,
            format!("{d} states for dim {}, smallest overlap eigenvalue {smallest:.2e}", s.basis().len()),
        ));
    }
    Ok(SuiteReport::new("properties", checks))
}
