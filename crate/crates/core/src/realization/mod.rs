//! Connections realizing prescribed curvature data at the origin.
//!
//! * [`realize_linear`]: linear Christoffel symbols with `R_0 = A`.
//! * [`realize_ricci_constant`]: corrects the linear realizer degree by
//!   degree until the Ricci tensor is the constant `ρ(A)`.
//! * [`realize_projectively_flat`]: `∇_x y = θ(x)y + θ(y)x` with
//!   `θ = z_i Θ_ij dz^j`, whose curvature is `H(θ⊗θ + ∂θ)`.
//! * [`audit_projectively_flat_ricci_antisymmetric`]: checks that a
//!   projectively flat, Ricci antisymmetric connection is flat.

mod audit;
mod projective;
mod ricci_constant;

use thiserror::Error;

use crate::algebra::CurvatureOp;
use crate::connection::{Connection, ConnectionError};
use crate::jet::Jet;
use crate::rational::{self, Rational};

pub use audit::{
    audit_projectively_flat_ricci_antisymmetric, AuditReport, AuditVerdict, Hypothesis,
    HypothesisFailure,
};
pub use projective::{realize_projectively_flat, realize_projectively_flat_from_a, theta_from_form};
pub use ricci_constant::{
    linear_part, realize_ricci_constant, ricci_correction, star, IterationRecord,
    RicciConstantResult,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizationError {
    #[error("order {got} is too small; this construction needs at least {required}")]
    OrderTooSmall { required: u32, got: u32 },
    #[error(
        "operator is not projectively flat: Weyl component {value} at {indices:?}"
    )]
    NotProjectivelyFlat { indices: [usize; 4], value: Rational },
    #[error("Ricci correction did not terminate within {0} iterations")]
    NoTermination(usize),
    #[error("residual degree did not increase: {previous} then {current}")]
    StalledResidual { previous: u32, current: u32 },
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}

fn require_order(order: u32, required: u32) -> Result<(), RealizationError> {
    if order < required {
        Err(RealizationError::OrderTooSmall { required, got: order })
    } else {
        Ok(())
    }
}

/// `Γ[u][v][l] = ⅓ Σ_w (A[w][u][v][l] + A[w][v][u][l]) z_w`. Torsion free,
/// vanishes at the origin, and has curvature `A` there.
pub fn realize_linear(a: &CurvatureOp, order: u32) -> Result<Connection, RealizationError> {
    require_order(order, 2)?;
    let m = a.dim();
    let third = rational::frac(1, 3);
    let conn = Connection::from_fn(m, order, |u, v, l| {
        let mut g = Jet::zero(m, order);
        for w in 0..m {
            let c = (a.get(w, u, v, l) + a.get(w, v, u, l)) * &third;
            g = &g + &Jet::variable(m, order, w).scale(&c);
        }
        g
    })?;
    Ok(conn)
}
