use num_traits::Zero;

use super::algebra::BasisAlgebra;
use super::basis::CutBasis;
use crate::error::{Error, Result};
use crate::linalg::{exact_rank, QMatrix};
use crate::partition::Partition;
use crate::rational::Q;
use crate::trace_algebra::{vacuum_expectation_of, OrderedProduct};

/// Exact overlaps `S[i][j] = ⟨state_i|state_j⟩` in the basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: QMatrix,
}

impl GramMatrix {
    pub fn from_entries(entries: QMatrix) -> Self {
        GramMatrix { entries }
    }

    pub fn entries(&self) -> &QMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Leading `k × k` submatrix, which is the Gram matrix of any smaller cut.
    pub fn leading(&self, k: usize) -> GramMatrix {
        GramMatrix { entries: self.entries[..k].iter().map(|r| r[..k].to_vec()).collect() }
    }

    /// Exact rank of every fixed-quanta block; errors on the first deficient one.
    pub fn check_full_rank(&self, basis: &CutBasis) -> Result<()> {
        for (quanta, range) in basis.blocks() {
            let block: QMatrix = self.entries[range.clone()].iter().map(|r| r[range.clone()].to_vec()).collect();
            let rank = exact_rank(&block);
            if rank < block.len() {
                return Err(Error::RankDeficient { quanta, rank, dim: block.len() });
            }
        }
        Ok(())
    }
}

pub fn gram_matrix(alg: &BasisAlgebra, basis: &CutBasis) -> Result<GramMatrix> {
    let states = basis.states();
    let d = states.len();
    let mut entries = vec![vec![Q::zero(); d]; d];
    for (_, range) in basis.blocks() {
        for i in range.clone() {
            for j in range.clone() {
                entries[i][j] = alg.inner(&states[i], &states[j])?;
            }
        }
    }
    Ok(GramMatrix { entries })
}

/// `⟨p|q⟩` by contracting the conjugated bra against the ket in one pass,
/// without peeling or Cayley-Hamilton reduction.
pub fn gram_entry_direct(p: &Partition, q: &Partition) -> Q {
    let bra = p.to_expr().dagger();
    vacuum_expectation_of(&OrderedProduct::from_normal(&bra).then(&q.to_expr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_basis::enumerate_basis;

    #[test]
    fn peeling_matches_direct_contraction() {
        for (n, ncut) in [(2, 8), (3, 8), (4, 8), (5, 7)] {
            let alg = BasisAlgebra::new(n).unwrap();
            let basis = enumerate_basis(n, ncut).unwrap();
            let s = gram_matrix(&alg, &basis).unwrap();
            assert!(s.is_symmetric());
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    let direct = gram_entry_direct(&basis.states()[i], &basis.states()[j]);
                    assert_eq!(s.get(i, j), &direct, "N={n} {} {}", basis.states()[i], basis.states()[j]);
                }
            }
            s.check_full_rank(&basis).unwrap();
        }
    }

    #[test]
    fn su3_mixing_overlap_is_nonzero() {
        let alg = BasisAlgebra::new(3).unwrap();
        let a = Partition::new(3, vec![0, 2]).unwrap();
        let b = Partition::new(3, vec![3, 0]).unwrap();
        assert!(!alg.inner(&a, &b).unwrap().is_zero());
    }
}
