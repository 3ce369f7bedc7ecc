//! Rank of sparse rational vector families by incremental row echelon
//! reduction.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

/// Echelon basis; each stored row is normalised to leading coefficient 1.
#[derive(Debug, Default)]
pub struct EchelonBasis {
    pivots: BTreeMap<usize, SparseVec>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the basis and keeps it if independent. Returns
    /// whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        v.retain(|_, c| !c.is_zero());
        while let Some((&lead, coeff)) = v.iter().next() {
            match self.pivots.get(&lead) {
                Some(row) => {
                    let coeff = coeff.clone();
                    for (col, c) in row {
                        let entry = v.entry(*col).or_insert_with(Rational::zero);
                        *entry -= &coeff * c;
                        if entry.is_zero() {
                            v.remove(col);
                        }
                    }
                }
                None => {
                    let inv = coeff.recip();
                    for c in v.values_mut() {
                        *c *= &inv;
                    }
                    self.pivots.insert(lead, v);
                    return true;
                }
            }
        }
        false
    }
}

pub fn rank<I: IntoIterator<Item = SparseVec>>(vectors: I) -> usize {
    let mut basis = EchelonBasis::new();
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}
