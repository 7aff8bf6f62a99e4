//! Spectrum comparison and the JSON/CSV exports.

use serde::Serialize;
use serde_json::json;

use crate::closed_form::{ClosedFormLevel, SpectrumClosedForm};
use crate::eigenstates::FamilySolution;
use crate::error::Result;
use crate::fock_basis::{CutBasis, GramMatrix};
use crate::rational::{to_f64, to_fraction_string};

/// Relative tolerance for closed-form vs numeric agreement.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;

/// Outcome of comparing two eigenvalue multisets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub matched: bool,
    pub count_numeric: usize,
    pub count_closed: usize,
    pub max_relative_deviation: f64,
    /// Position in the sorted lists of the first pair outside tolerance.
    pub first_mismatch: Option<usize>,
}

/// Sorts both lists and pairs them in order.
pub fn compare_multisets(numeric: &[f64], closed: &[f64], tol: f64) -> Comparison {
    let mut a = numeric.to_vec();
    let mut b = closed.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let mut worst = 0.0f64;
    let mut first = None;
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        let scale = x.abs().max(y.abs());
        let dev = if scale == 0.0 { 0.0 } else { (x - y).abs() / scale };
        worst = worst.max(dev);
        if dev > tol && first.is_none() {
            first = Some(i);
        }
    }
    Comparison {
        matched: a.len() == b.len() && first.is_none(),
        count_numeric: a.len(),
        count_closed: b.len(),
        max_relative_deviation: worst,
        first_mismatch: first,
    }
}

/// Closed-form and numeric levels side by side.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub ncut: u32,
    #[serde(rename = "nF")]
    pub nf: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed: Option<Vec<ClosedFormLevel>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
}

impl SpectrumReport {
    pub fn new(
        n: u32,
        ncut: u32,
        nf: u32,
        numeric: Option<Vec<f64>>,
        closed: Option<&SpectrumClosedForm>,
        tol: f64,
    ) -> Self {
        let comparison = match (&numeric, closed) {
            (Some(a), Some(c)) => Some(compare_multisets(a, &c.energies(), tol)),
            _ => None,
        };
        SpectrumReport { n, ncut, nf, numeric, closed: closed.map(|c| c.entries.clone()), comparison }
    }

    pub fn matched(&self) -> bool {
        self.comparison.as_ref().is_none_or(|c| c.matched)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Numeric levels as `(index, E, multiplicity)`, closed-form levels as `(E, family-tail, nB, rootIndex)`.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        if let Some(levels) = &self.numeric {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "E", "multiplicity"])?;
            for (i, (e, m)) in group_levels(levels).into_iter().enumerate() {
                w.write_record([i.to_string(), e.to_string(), m.to_string()])?;
            }
            out.push_str(&finish(w)?);
        }
        if let Some(levels) = &self.closed {
            if !out.is_empty() {
                out.push('\n');
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["E", "family-tail", "nB", "rootIndex"])?;
            for l in levels {
                w.write_record([
                    l.energy.to_string(),
                    l.family.to_string(),
                    l.family.nb().to_string(),
                    l.root_index.to_string(),
                ])?;
            }
            out.push_str(&finish(w)?);
        }
        Ok(out)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Consecutive levels within the spectrum tolerance, merged with multiplicities.
fn group_levels(levels: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &e in levels {
        match out.last_mut() {
            Some((last, m)) if (e - *last).abs() <= SPECTRUM_TOLERANCE * e.abs().max(1.0) => *m += 1,
            _ => out.push((e, 1)),
        }
    }
    out
}

pub fn basis_json(basis: &CutBasis) -> Result<String> {
    let v = json!({
        "N": basis.rank(),
        "ncut": basis.ncut(),
        "dim": basis.len(),
        "states": basis.states(),
    });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn basis_csv(basis: &CutBasis) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string()];
    header.extend((2..=basis.rank()).map(|k| format!("p{k}")));
    header.push("quanta".into());
    w.write_record(&header)?;
    for (i, p) in basis.states().iter().enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(p.as_slice().iter().map(u32::to_string));
        row.push(p.quanta().to_string());
        w.write_record(&row)?;
    }
    finish(w)
}

/// Exact entries as `"num/den"` strings.
pub fn gram_json(basis: &CutBasis, gram: &GramMatrix) -> Result<String> {
    let entries: Vec<Vec<String>> = gram.entries().iter().map(|r| r.iter().map(to_fraction_string).collect()).collect();
    let v = json!({
        "N": basis.rank(),
        "ncut": basis.ncut(),
        "basis": basis.states(),
        "entries": entries,
    });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Entries as floats, one matrix row per line.
pub fn gram_csv(gram: &GramMatrix) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in gram.entries() {
        w.write_record(row.iter().map(|q| to_f64(q).to_string()))?;
    }
    finish(w)
}

/// `{"family", "nF", "E", "coeffs": [{"p", "value"}]}` plus the residual when known.
pub fn state_json(state: &FamilySolution, residual: Option<f64>) -> Result<String> {
    let coeffs: Vec<_> = state.coeffs.iter().map(|(p, v)| json!({"p": p, "value": v})).collect();
    let mut v = json!({
        "family": state.family.tail(),
        "label": state.family.to_string(),
        "nF": state.nf(),
        "fermions": state.fermions,
        "E": state.energy,
        "mode": state.mode,
        "terms": state.terms,
        "converged": state.converged,
        "coeffs": coeffs,
    });
    if let Some(r) = residual {
        v["residual"] = json!(r);
    }
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn state_csv(state: &FamilySolution) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "value"])?;
    for (p, v) in &state.coeffs {
        w.write_record([p.to_string(), v.to_string()])?;
    }
    finish(w)
}
