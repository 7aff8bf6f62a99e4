//! The `symqm` command line.
//!
//! Exit codes: 0 success, 1 spectrum mismatch or failed verification, 2 bad input, 3 internal failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::closed_form::{enumerate_families, laguerre_roots, BrickLabel, BrickTable, Family, Sector};
use crate::eigenstates::{
    build_family_state, dress_fermionic, solve_mixing_coeffs, AnsatzScope, FamilySolution, StateMode, CONTINUUM_TOL,
};
use crate::error::{Error, Result};
use crate::fock_basis::{enumerate_basis, BasisAlgebra};
use crate::report::{self, SpectrumReport, SPECTRUM_TOLERANCE};
use crate::solver::{resolve_cache_dir, Solver};
use crate::verify::{run_suite, SuiteReport, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "symqm", version, about = "Cut Fock space spectra and eigenstates of SU(N) SYM quantum mechanics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the cut basis of bosonic brick products.
    Basis(CutArgs),
    /// Exact Gram matrix of the cut basis.
    Gram(CutArgs),
    /// Spectrum from the cut Hamiltonian, the Laguerre zeros, or both compared.
    Spectrum(SpectrumArgs),
    /// Closed-form eigenvector of one family.
    State(StateArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Families present at a cutoff with their Laguerre orders and roots.
    Families(FamiliesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Numeric,
    Closed,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CutArgs {
    /// Rank of the gauge group SU(N).
    #[arg(long)]
    pub n: u32,
    /// Maximal number of bosonic quanta.
    #[arg(long)]
    pub ncut: u32,
    /// Directory for cached matrices (overridden by SYMQM_CACHE).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct SectorArgs {
    /// `bosonic`, `nF=<k>`, or a comma list of purely fermionic brick indices such as `3,5`.
    #[arg(long, default_value = "bosonic")]
    pub sector: String,
    /// JSON table of fermionic bricks for the requested sector.
    #[arg(long)]
    pub brick_table: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub cut: CutArgs,
    #[command(flatten)]
    pub sector: SectorArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub method: Method,
    /// Relative tolerance for the comparison in `both` mode.
    #[arg(long, default_value_t = SPECTRUM_TOLERANCE)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    #[command(flatten)]
    pub cut: CutArgs,
    /// Family tail `p3,...,pN`; defaults to all zeros.
    #[arg(long)]
    pub family: Option<String>,
    /// Which Laguerre zero, counted from the lowest.
    #[arg(long, conflicts_with = "energy")]
    pub root: Option<usize>,
    /// Energy instead of a root index; must be a root unless `--continuum`.
    #[arg(long)]
    pub energy: Option<f64>,
    /// Purely fermionic bricks to dress the state with, e.g. `3` or `3,5`.
    #[arg(long)]
    pub dress: Option<String>,
    /// Carry the Laguerre chain past the cutoff until it converges (needs `--energy`).
    #[arg(long, requires = "energy")]
    pub continuum: bool,
    /// Stopping tolerance of the continuum chain.
    #[arg(long, default_value_t = CONTINUUM_TOL)]
    pub tol: f64,
    /// Term limit of the continuum chain.
    #[arg(long, default_value_t = 400)]
    pub max_terms: u32,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct FamiliesArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub ncut: u32,
    #[command(flatten)]
    pub sector: SectorArgs,
    #[command(flatten)]
    pub output: Output,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
/// Reports go to `out` or the `--out` file, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Usage-type errors get 2, everything else 3.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidRank(_)
        | Error::InvalidArgument(_)
        | Error::Parse { .. }
        | Error::BrickDataUnavailable { .. }
        | Error::NotARoot { .. }
        | Error::InvalidDressing(_)
        | Error::NoVacuum { .. }
        | Error::InvalidRegulator(_)
        | Error::CacheMismatch { .. } => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Basis(a) => {
            let basis = enumerate_basis(a.n, a.ncut)?;
            let text = match a.output.format {
                Format::Json => report::basis_json(&basis)?,
                Format::Csv => report::basis_csv(&basis)?,
            };
            emit(&a.output, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Gram(a) => {
            let s = solver(a)?;
            let text = match a.output.format {
                Format::Json => report::gram_json(s.basis(), s.gram())?,
                Format::Csv => report::gram_csv(s.gram())?,
            };
            emit(&a.output, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Spectrum(a) => spectrum(a, out),
        Command::State(a) => state(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Families(a) => families(a, out),
    }
}

fn solver(a: &CutArgs) -> Result<Solver> {
    let dir = resolve_cache_dir(a.cache_dir.as_deref());
    Solver::with_cache(a.n, a.ncut, dir.as_deref())
}

fn emit(output: &Output, text: &str, out: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_list(text: &str, what: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| Error::InvalidArgument(format!("{what}: {s:?} is not a non-negative integer")))
        })
        .collect()
}

fn load_table(path: Option<&Path>) -> Result<Option<BrickTable>> {
    path.map(|p| BrickTable::load(p).map_err(|e| Error::InvalidArgument(format!("brick table {}: {e}", p.display()))))
        .transpose()
}

/// `bosonic`, `nF=<k>` or a list of purely fermionic brick indices.
pub fn parse_sector(n: u32, text: &str, table: Option<&BrickTable>) -> Result<Sector> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("bosonic") {
        return match table {
            Some(_) => Sector::resolve(n, 0, table),
            None => Ok(Sector::Bosonic),
        };
    }
    if let Some(k) = t.strip_prefix("nF=").or_else(|| t.strip_prefix("nf=")) {
        let nf =
            k.trim().parse().map_err(|_| Error::InvalidArgument(format!("sector: {k:?} is not a fermion number")))?;
        return Sector::resolve(n, nf, table);
    }
    if table.is_some() {
        return Err(Error::InvalidArgument(
            "a brick table goes with `--sector nF=<k>`, not with explicit brick indices".into(),
        ));
    }
    Sector::from_indices(n, &parse_list(t, "sector")?)
}

fn sector_of(n: u32, a: &SectorArgs) -> Result<Sector> {
    let table = load_table(a.brick_table.as_deref())?;
    parse_sector(n, &a.sector, table.as_ref())
}

/// The bosonic cut spectrum once per brick; only bricks without bosons have it.
fn numeric_levels(s: &Solver, sector: &Sector) -> Result<Vec<f64>> {
    let bosonic = s.spectrum_numeric()?.eigenvalues;
    let copies = match sector {
        Sector::Bosonic => 1,
        Sector::Fermionic { bricks, .. } => {
            if let Some(b) = bricks.iter().find(|b| matches!(b.label, BrickLabel::Table(_))) {
                return Err(Error::InvalidArgument(format!(
                    "numeric spectrum needs explicit states for table brick {:?}; use --method closed",
                    b.label
                )));
            }
            bricks.len()
        }
    };
    let mut levels: Vec<f64> = (0..copies).flat_map(|_| bosonic.iter().copied()).collect();
    levels.sort_by(f64::total_cmp);
    Ok(levels)
}

fn spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> Result<i32> {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("--tol must be positive, got {}", a.tol)));
    }
    let sector = sector_of(a.cut.n, &a.sector)?;
    let closed = match a.method {
        Method::Closed | Method::Both => Some(crate::closed_form::theta(a.cut.n, a.cut.ncut, &sector)?),
        Method::Numeric => None,
    };
    let numeric = match a.method {
        Method::Numeric | Method::Both => Some(numeric_levels(&solver(&a.cut)?, &sector)?),
        Method::Closed => None,
    };
    let rep = SpectrumReport::new(a.cut.n, a.cut.ncut, sector.nf(), numeric, closed.as_ref(), a.tol);
    let text = match a.cut.output.format {
        Format::Json => rep.to_json()?,
        Format::Csv => rep.to_csv()?,
    };
    emit(&a.cut.output, &text, out)?;
    Ok(if rep.matched() { EXIT_OK } else { EXIT_MISMATCH })
}

fn state(a: &StateArgs, out: &mut dyn Write) -> Result<i32> {
    let n = a.cut.n;
    let alg = BasisAlgebra::new(n)?;
    let tail = match &a.family {
        Some(t) => parse_list(t, "family")?,
        None => vec![0; (n - 2) as usize],
    };
    let family = Family::bosonic(tail);
    family.validate(n)?;
    let (st, residual): (FamilySolution, Option<f64>) = if a.continuum {
        if a.tol.is_nan() || a.tol < 0.0 {
            return Err(Error::InvalidArgument(format!("--tol must be non-negative, got {}", a.tol)));
        }
        let energy = a.energy.expect("clap enforces --energy with --continuum");
        let mix = solve_mixing_coeffs(&alg, &family, AnsatzScope::AllLowerTails)?;
        let mode = StateMode::Continuum { tol: a.tol, max_terms: a.max_terms };
        (build_family_state(&alg, &family, energy, mode, &mix)?, None)
    } else {
        let s = solver(&a.cut)?;
        let st = match a.energy {
            Some(e) => s.family_state_at(&family, e, AnsatzScope::AllLowerTails)?,
            None => s.family_state(&family, a.root.unwrap_or(0), AnsatzScope::AllLowerTails)?,
        };
        let r = s.residual(&st);
        (st, Some(r))
    };
    let st = match &a.dress {
        Some(d) => dress_fermionic(&st, &parse_list(d, "dress")?)?,
        None => st,
    };
    let text = match a.cut.output.format {
        Format::Json => report::state_json(&st, residual)?,
        Format::Csv => report::state_csv(&st)?,
    };
    emit(&a.cut.output, &text, out)?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let names: Vec<&str> = if a.suite == "all" { SUITES.to_vec() } else { vec![a.suite.as_str()] };
    let reports: Vec<SuiteReport> = names.iter().map(|s| run_suite(s)).collect::<Result<_>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let text = match a.output.format {
        Format::Json => serde_json::to_string_pretty(&json!({"passed": passed, "suites": reports}))? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "check", "passed", "detail"])?;
            for r in &reports {
                for c in &r.checks {
                    w.write_record([r.suite.as_str(), &c.name, if c.passed { "true" } else { "false" }, &c.detail])?;
                }
            }
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8")
        }
    };
    emit(&a.output, &text, out)?;
    Ok(if passed { EXIT_OK } else { EXIT_MISMATCH })
}

fn families(a: &FamiliesArgs, out: &mut dyn Write) -> Result<i32> {
    let sector = sector_of(a.n, &a.sector)?;
    let list = enumerate_families(a.n, a.ncut, &sector)?;
    let text = match a.output.format {
        Format::Json => {
            let rows: Vec<_> = list
                .iter()
                .map(|(f, m)| {
                    let energies: Vec<f64> = laguerre_roots(f.spec(a.n, a.ncut)).iter().map(|x| x / 2.0).collect();
                    json!({
                        "family": f.to_string(),
                        "tail": f.tail(),
                        "nB": f.nb(),
                        "order": m,
                        "gamma": f.gamma(a.n),
                        "energies": energies,
                    })
                })
                .collect();
            let v = json!({"N": a.n, "ncut": a.ncut, "nF": sector.nf(), "families": rows});
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["family", "nB", "order", "gamma"])?;
            for (f, m) in &list {
                w.write_record([f.to_string(), f.nb().to_string(), m.to_string(), f.gamma(a.n).to_string()])?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8")
        }
    };
    emit(&a.output, &text, out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("symqm").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn basis_rows() {
        let (code, out, _) = call(&["basis", "--n", "3", "--ncut", "6", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 8);
        let (code, out, _) = call(&["basis", "--n", "2", "--ncut", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"dim\": 1"));
        let (code, _, err) = call(&["basis", "--n", "1", "--ncut", "2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("at least 2"));
    }

    #[test]
    fn spectrum_modes() {
        let (code, out, _) = call(&["spectrum", "--n", "3", "--ncut", "2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["comparison"]["matched"], true);
        assert_eq!(v["numeric"].as_array().unwrap().len(), 2);

        let (code, out, _) = call(&["spectrum", "--n", "4", "--ncut", "0", "--method", "closed"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["closed"][0]["energy"], 3.75);

        let (code, _, err) = call(&["spectrum", "--n", "3", "--ncut", "4", "--sector", "nF=4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("brick data unavailable"));
    }

    #[test]
    fn pure_fermionic_sector_repeats_the_bosonic_levels() {
        let (code, out, _) = call(&["spectrum", "--n", "3", "--ncut", "4", "--sector", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["nF"], 3);
        let (_, bos, _) = call(&["spectrum", "--n", "3", "--ncut", "4", "--method", "numeric"]);
        let b: serde_json::Value = serde_json::from_str(&bos).unwrap();
        assert_eq!(v["numeric"], b["numeric"]);
    }

    #[test]
    fn states_and_errors() {
        let (code, out, _) = call(&["state", "--n", "3", "--ncut", "8", "--family", "0", "--dress", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["nF"], 3);
        assert!(v["residual"].as_f64().unwrap() < 1e-10);
        let (code, _, _) = call(&["state", "--n", "3", "--ncut", "8", "--family", "0,0"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = call(&["state", "--n", "3", "--ncut", "8", "--energy", "1.234"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, out, _) = call(&["state", "--n", "3", "--ncut", "0", "--energy", "1.5", "--continuum"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"kind\": \"continuum\""));
        let (code, _, _) = call(&["verify", "--suite", "nope"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn families_listing() {
        let (code, out, _) = call(&["families", "--n", "4", "--ncut", "6", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("family,nB,order,gamma\n\"{0,0}\",0,4,"), "{out}");
    }
}
