//! Dimensions of the three irreducible components, each computed twice:
//! closed formula and rank of the component projector on a spanning set.

use crate::linalg::{rank, SparseVec};
use crate::rational::{self, Rational};
use crate::tensor::Tensor4;

use super::{bianchi_project, check_dimension, decompose, AlgebraError, BilinearForm, CurvatureOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentDimensions {
    pub weyl: usize,
    pub sym: usize,
    pub alt: usize,
    pub total: usize,
}

impl ComponentDimensions {
    pub fn from_formulas(m: usize) -> Self {
        let weyl = m * m * (m * m - 4) / 3;
        let sym = m * (m + 1) / 2;
        let alt = m * (m - 1) / 2;
        ComponentDimensions {
            weyl,
            sym,
            alt,
            total: weyl + sym + alt,
        }
    }
}

/// Images of `e_i ⊗ e_j ⊗ e_k ⊗ e^l − (i ↔ j)` under the Bianchi projector;
/// these span the curvature operators.
fn spanning_set(m: usize) -> Vec<CurvatureOp> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..m {
                for l in 0..m {
                    let raw = Tensor4::from_fn(m, |a, b, c, d| {
                        if (c, d) != (k, l) {
                            rational::zero()
                        } else if (a, b) == (i, j) {
                            rational::one()
                        } else if (a, b) == (j, i) {
                            -rational::one()
                        } else {
                            rational::zero()
                        }
                    });
                    out.push(bianchi_project(&raw).expect("antisymmetric by construction"));
                }
            }
        }
    }
    out
}

// Antisymmetry makes the i < j half of the coordinates sufficient.
fn curvature_coords(a: &CurvatureOp) -> SparseVec {
    a.tensor()
        .entries()
        .filter(|([i, j, _, _], v)| i < j && !num_traits::Zero::is_zero(*v))
        .map(|(idx, v)| (flat_index(a.dim(), idx), v.clone()))
        .collect()
}

fn flat_index(m: usize, [i, j, k, l]: [usize; 4]) -> usize {
    ((i * m + j) * m + k) * m + l
}

fn form_coords(b: &BilinearForm) -> SparseVec {
    let m = b.dim();
    b.entries()
        .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
        .map(|((i, j), v)| (i * m + j, v.clone()))
        .collect()
}

fn check(component: &'static str, formula: usize, rank: usize) -> Result<(), AlgebraError> {
    if formula == rank {
        Ok(())
    } else {
        Err(AlgebraError::DimensionMismatch {
            component,
            formula,
            rank,
        })
    }
}

/// Formula dimensions, cross-checked against projector ranks. A mismatch is
/// reported as an error and indicates an implementation bug.
pub fn component_dimensions(m: usize) -> Result<ComponentDimensions, AlgebraError> {
    check_dimension(m)?;
    let formulas = ComponentDimensions::from_formulas(m);
    let span = spanning_set(m);
    let parts: Vec<_> = span.iter().map(decompose).collect();

    let total = rank(span.iter().map(curvature_coords));
    let weyl = rank(parts.iter().map(|d| curvature_coords(&d.weyl)));
    let sym = rank(parts.iter().map(|d| form_coords(&d.ricci_sym)));
    let alt = rank(parts.iter().map(|d| form_coords(&d.ricci_alt)));

    check("weyl", formulas.weyl, weyl)?;
    check("sym", formulas.sym, sym)?;
    check("alt", formulas.alt, alt)?;
    check("total", formulas.total, total)?;
    Ok(formulas)
}

/// Dimension of the solution space of the linear system
/// `{antisymmetry, first Bianchi}` on all `m⁴` unknowns, by brute-force rank.
pub fn constraint_nullity(m: usize) -> usize {
    let unknowns = m.pow(4);
    let mut rows: Vec<SparseVec> = Vec::new();
    let one = rational::one;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let mut anti: SparseVec = SparseVec::new();
                    add(&mut anti, flat_index(m, [i, j, k, l]), one());
                    add(&mut anti, flat_index(m, [j, i, k, l]), one());
                    rows.push(anti);
                    let mut cyc = SparseVec::new();
                    add(&mut cyc, flat_index(m, [i, j, k, l]), one());
                    add(&mut cyc, flat_index(m, [j, k, i, l]), one());
                    add(&mut cyc, flat_index(m, [k, i, j, l]), one());
                    rows.push(cyc);
                }
            }
        }
    }
    unknowns - rank(rows)
}

fn add(v: &mut SparseVec, col: usize, c: Rational) {
    *v.entry(col).or_insert_with(rational::zero) += c;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_match_known_values() {
        let d3 = ComponentDimensions::from_formulas(3);
        assert_eq!((d3.weyl, d3.sym, d3.alt, d3.total), (15, 6, 3, 24));
        let d4 = ComponentDimensions::from_formulas(4);
        assert_eq!((d4.weyl, d4.sym, d4.alt, d4.total), (64, 10, 6, 80));
    }

    #[test]
    fn ranks_agree_for_small_dimensions() {
        assert_eq!(
            component_dimensions(3).unwrap(),
            ComponentDimensions::from_formulas(3)
        );
        assert_eq!(
            component_dimensions(4).unwrap(),
            ComponentDimensions::from_formulas(4)
        );
    }

    #[test]
    fn brute_force_nullity() {
        assert_eq!(constraint_nullity(3), 24);
        assert_eq!(constraint_nullity(4), 80);
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(component_dimensions(2).is_err());
    }
}
