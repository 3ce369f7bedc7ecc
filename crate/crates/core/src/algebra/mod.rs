//! Generalized algebraic curvature operators over exact rationals.
//!
//! A [`CurvatureOp`] `A[i][j][k][l]` (the component `A_{ijk}^l` of
//! `A(e_i, e_j) e_k`) is antisymmetric in its first two slots and satisfies
//! the first Bianchi identity. The space of such operators splits as
//! Weyl projective curvature ⊕ symmetric forms ⊕ alternating forms; this
//! module computes that split and its inverse exactly.

mod dimensions;

use std::fmt;

use thiserror::Error;

use crate::rational::{self, Rational};
use crate::tensor::{self, Tensor2, Tensor4};

pub use dimensions::{component_dimensions, constraint_nullity, ComponentDimensions};

/// `Θ ∈ V* ⊗ V*`; Ricci tensors and `H`-map inputs.
pub type BilinearForm = Tensor2<Rational>;

pub const MIN_DIMENSION: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `A[i][j][k][l] = −A[j][i][k][l]`
    Antisymmetry,
    /// `A[i][j][k][l] + A[j][k][i][l] + A[k][i][j][l] = 0`
    FirstBianchi,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Antisymmetry => write!(f, "antisymmetry"),
            Identity::FirstBianchi => write!(f, "first Bianchi identity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub identity: Identity,
    /// 0-based `(i, j, k, l)`.
    pub indices: [usize; 4],
    pub residual: Rational,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension {0} is below the supported minimum of 3")]
    DimensionTooSmall(usize),
    #[error("expected {expected} entries for dimension {m}, got {got}")]
    ShapeMismatch { m: usize, expected: usize, got: usize },
    #[error("{} violated at {:?} (residual {})", .0.identity, .0.indices, .0.residual)]
    Violation(Violation),
    #[error("dimension count for {component} disagrees: formula {formula}, rank {rank}")]
    DimensionMismatch {
        component: &'static str,
        formula: usize,
        rank: usize,
    },
    #[error("could not draw a tensor with every requested component nonzero after {0} attempts")]
    DegenerateDraw(usize),
}

/// A validated generalized algebraic curvature operator.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOp(Tensor4<Rational>);

fn check_dimension(m: usize) -> Result<(), AlgebraError> {
    if m < MIN_DIMENSION {
        Err(AlgebraError::DimensionTooSmall(m))
    } else {
        Ok(())
    }
}

/// Accepts `raw` (row-major, `m⁴` entries) iff both curvature symmetries
/// hold exactly; otherwise reports the first violated identity.
pub fn validate_curvature(m: usize, raw: Vec<Rational>) -> Result<CurvatureOp, AlgebraError> {
    check_dimension(m)?;
    let expected = m.pow(4);
    if raw.len() != expected {
        return Err(AlgebraError::ShapeMismatch {
            m,
            expected,
            got: raw.len(),
        });
    }
    CurvatureOp::try_from_tensor(Tensor4::from_vec(m, raw))
}

/// `A − S(A)/3` where `S` is the cyclic sum over the first three slots.
/// Requires antisymmetry in the first pair; fixes every valid operator.
pub fn bianchi_project(raw: &Tensor4<Rational>) -> Result<CurvatureOp, AlgebraError> {
    check_dimension(raw.dim())?;
    if let Some((indices, residual)) = raw.antisymmetry_violation() {
        return Err(AlgebraError::Violation(Violation {
            identity: Identity::Antisymmetry,
            indices,
            residual,
        }));
    }
    let projected = raw.minus(&raw.cyclic_sum().scaled(&rational::frac(1, 3)));
    Ok(CurvatureOp(projected))
}

impl CurvatureOp {
    pub fn try_from_tensor(t: Tensor4<Rational>) -> Result<Self, AlgebraError> {
        check_dimension(t.dim())?;
        if let Some((indices, residual)) = t.antisymmetry_violation() {
            return Err(AlgebraError::Violation(Violation {
                identity: Identity::Antisymmetry,
                indices,
                residual,
            }));
        }
        if let Some((indices, residual)) = t.bianchi_violation() {
            return Err(AlgebraError::Violation(Violation {
                identity: Identity::FirstBianchi,
                indices,
                residual,
            }));
        }
        Ok(CurvatureOp(t))
    }

    pub fn zero(m: usize) -> Result<Self, AlgebraError> {
        check_dimension(m)?;
        Ok(CurvatureOp(Tensor4::from_fn(m, |_, _, _, _| rational::zero())))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        self.0.get(i, j, k, l)
    }

    pub fn tensor(&self) -> &Tensor4<Rational> {
        &self.0
    }

    pub fn into_tensor(self) -> Tensor4<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    // The space is closed under linear combinations, so these skip
    // revalidation.
    pub fn plus(&self, other: &CurvatureOp) -> CurvatureOp {
        CurvatureOp(self.0.plus(&other.0))
    }

    pub fn minus(&self, other: &CurvatureOp) -> CurvatureOp {
        CurvatureOp(self.0.minus(&other.0))
    }

    pub fn scaled(&self, c: &Rational) -> CurvatureOp {
        CurvatureOp(self.0.scaled(c))
    }
}

/// `ρ[j][k] = Σ_i A[i][j][k][i]`.
pub fn ricci(a: &CurvatureOp) -> BilinearForm {
    a.0.ricci()
}

/// `(Θ_s, Θ_a)` with `Θ_s + Θ_a = Θ`.
pub fn split_bilinear(theta: &BilinearForm) -> (BilinearForm, BilinearForm) {
    theta.split()
}

pub fn h_map(theta: &BilinearForm) -> CurvatureOp {
    CurvatureOp(tensor::h_map(theta))
}

/// Projection onto the Weyl projective curvature operators (zero Ricci).
pub fn weyl_project(a: &CurvatureOp) -> CurvatureOp {
    CurvatureOp(tensor::weyl_project(&a.0))
}

/// The three irreducible pieces of a curvature operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTriple {
    pub weyl: CurvatureOp,
    pub ricci_sym: BilinearForm,
    pub ricci_alt: BilinearForm,
}

impl DecompositionTriple {
    /// `weyl − H(ricci_sym)/(m−1) − H(ricci_alt)/(m+1)`.
    pub fn recompose(&self) -> CurvatureOp {
        CurvatureOp(tensor::recompose(
            &self.weyl.0,
            &self.ricci_sym,
            &self.ricci_alt,
        ))
    }
}

pub fn decompose(a: &CurvatureOp) -> DecompositionTriple {
    let (ricci_sym, ricci_alt) = ricci(a).split();
    DecompositionTriple {
        weyl: weyl_project(a),
        ricci_sym,
        ricci_alt,
    }
}

/// Right inverse of `h_map` on projectively flat operators:
/// `Θ = −ρ_s/(m−1) − ρ_a/(m+1)`.
pub fn projective_potential(a: &CurvatureOp) -> BilinearForm {
    let m = a.dim() as i64;
    let (rs, ra) = ricci(a).split();
    rs.scaled(&rational::frac(-1, m - 1))
        .plus(&ra.scaled(&rational::frac(-1, m + 1)))
}

pub fn bilinear_zero(m: usize) -> BilinearForm {
    Tensor2::from_fn(m, |_, _| rational::zero())
}
