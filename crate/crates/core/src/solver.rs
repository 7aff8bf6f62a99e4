//! One cut: basis, Gram matrix and Hamiltonian, with an optional on-disk cache of the exact matrices.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::closed_form::{theta, Family, Sector, SpectrumClosedForm};
use crate::eigenstates::{build_family_state, solve_mixing_coeffs, AnsatzScope, FamilySolution, StateMode};
use crate::error::{Error, Result};
use crate::fock_basis::{enumerate_basis, gram_matrix, BasisAlgebra, CutBasis, GramMatrix};
use crate::hamiltonian::{
    generalized_residual, hamiltonian_matrix, solve_spectrum_numeric, HamiltonianMatrix, SpectrumNumeric,
};
use crate::linalg::QMatrix;
use crate::partition::Partition;
use crate::rational::{parse_fraction, to_fraction_string};

/// Bumped whenever the cached layout or the matrix conventions change.
pub const CACHE_VERSION: u32 = 1;

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "SYMQM_CACHE";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    #[serde(rename = "N")]
    n: u32,
    ncut: u32,
    basis: Vec<Partition>,
    gram: Vec<Vec<String>>,
    hamiltonian: Vec<Vec<String>>,
    action: Vec<Vec<String>>,
}

fn encode(m: &QMatrix) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(to_fraction_string).collect()).collect()
}

fn decode(m: &[Vec<String>], path: &Path) -> Result<QMatrix> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|s| {
                    parse_fraction(s).ok_or_else(|| Error::CacheMismatch {
                        path: path.display().to_string(),
                        detail: format!("bad fraction {s:?}"),
                    })
                })
                .collect()
        })
        .collect()
}

/// Cache directory: `SYMQM_CACHE` if set, else `fallback`.
pub fn resolve_cache_dir(fallback: Option<&Path>) -> Option<PathBuf> {
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => fallback.map(Path::to_path_buf),
    }
}

pub fn cache_file_name(n: u32, ncut: u32) -> String {
    format!("symqm-n{n}-ncut{ncut}-v{CACHE_VERSION}.json")
}

/// Everything needed at one `(N, N_cut)`.
#[derive(Debug)]
pub struct Solver {
    alg: BasisAlgebra,
    basis: CutBasis,
    gram: GramMatrix,
    ham: HamiltonianMatrix,
}

impl Solver {
    pub fn new(n: u32, ncut: u32) -> Result<Self> {
        let alg = BasisAlgebra::new(n)?;
        let basis = enumerate_basis(n, ncut)?;
        let gram = gram_matrix(&alg, &basis)?;
        gram.check_full_rank(&basis)?;
        let ham = hamiltonian_matrix(&alg, &basis, &gram)?;
        Ok(Solver { alg, basis, gram, ham })
    }

    /// Loads the matrices from `dir` when a matching cache file exists, otherwise builds and stores them.
    pub fn with_cache(n: u32, ncut: u32, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir else {
            return Self::new(n, ncut);
        };
        let path = dir.join(cache_file_name(n, ncut));
        if path.exists() {
            return Self::load(n, ncut, &path);
        }
        let solver = Self::new(n, ncut)?;
        std::fs::create_dir_all(dir)?;
        let file = CacheFile {
            version: CACHE_VERSION,
            n,
            ncut,
            basis: solver.basis.states().to_vec(),
            gram: encode(solver.gram.entries()),
            hamiltonian: encode(solver.ham.entries()),
            action: encode(solver.ham.action()),
        };
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_vec(&file)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(solver)
    }

    fn load(n: u32, ncut: u32, path: &Path) -> Result<Self> {
        let mismatch = |detail: String| Error::CacheMismatch { path: path.display().to_string(), detail };
        let file: CacheFile = serde_json::from_slice(&std::fs::read(path)?)?;
        if file.version != CACHE_VERSION || file.n != n || file.ncut != ncut {
            return Err(mismatch(format!("holds version {} N={} ncut={}", file.version, file.n, file.ncut)));
        }
        let alg = BasisAlgebra::new(n)?;
        let basis = enumerate_basis(n, ncut)?;
        if file.basis != basis.states() {
            return Err(mismatch("basis differs".into()));
        }
        let d = basis.len();
        let gram = GramMatrix::from_entries(decode(&file.gram, path)?);
        let h = decode(&file.hamiltonian, path)?;
        let action = decode(&file.action, path)?;
        if gram.dim() != d
            || h.len() != d
            || action.len() != d
            || [&h, &action].iter().any(|m| m.iter().any(|r| r.len() != d))
        {
            return Err(mismatch("matrix shape differs from the basis".into()));
        }
        Ok(Solver { alg, basis, gram, ham: HamiltonianMatrix::from_parts(n, ncut, h, action) })
    }

    pub fn rank(&self) -> u32 {
        self.basis.rank()
    }

    pub fn ncut(&self) -> u32 {
        self.basis.ncut()
    }

    pub fn algebra(&self) -> &BasisAlgebra {
        &self.alg
    }

    pub fn basis(&self) -> &CutBasis {
        &self.basis
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn hamiltonian(&self) -> &HamiltonianMatrix {
        &self.ham
    }

    pub fn spectrum_numeric(&self) -> Result<SpectrumNumeric> {
        solve_spectrum_numeric(&self.ham, &self.gram)
    }

    pub fn spectrum_closed(&self, sector: &Sector) -> Result<SpectrumClosedForm> {
        theta(self.rank(), self.ncut(), sector)
    }

    /// State of `family` at its `root_index`-th root at this cutoff.
    pub fn family_state(&self, family: &Family, root_index: usize, scope: AnsatzScope) -> Result<FamilySolution> {
        family.validate(self.rank())?;
        let roots = crate::closed_form::laguerre_roots(family.spec(self.rank(), self.ncut()));
        let x = roots.get(root_index).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "family {family} has {} roots at ncut={}, asked for index {root_index}",
                roots.len(),
                self.ncut()
            ))
        })?;
        self.family_state_at(family, x / 2.0, scope)
    }

    pub fn family_state_at(&self, family: &Family, energy: f64, scope: AnsatzScope) -> Result<FamilySolution> {
        let mix = solve_mixing_coeffs(&self.alg, family, scope)?;
        build_family_state(&self.alg, family, energy, StateMode::Finite { ncut: self.ncut() }, &mix)
    }

    /// Relative residual of a state in this cut.
    pub fn residual(&self, state: &FamilySolution) -> f64 {
        generalized_residual(&self.ham, &self.gram, state.energy, &state.to_basis_vector(&self.basis))
    }
}
