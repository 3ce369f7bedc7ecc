//! Constant-Ricci realization by degreewise elimination.
//!
//! Start from the linear realizer `Γ_1`. While the symmetric Ricci
//! deviation `s = ρ_s(R) − ρ_s(A)` is nonzero, take its lowest homogeneous
//! part `s_d` and add the trace-free correction `Γ` with
//! `Γ[i][j][l] = δ_{l, k_ij} ∫_{k_ij} (−s_d)[i][j]`, where `k_ij = k_ji` is an
//! index outside `{i, j}`. The correction's linear curvature term cancels
//! `s_d`; all its quadratic terms land in degree `≥ d + 2`, and trace-free
//! corrections never touch `ρ_a`.

use crate::algebra::CurvatureOp;
use crate::connection::{curvature, BilinearField, Connection, CurvatureField};
use crate::jet::Jet;
use crate::rational;
use crate::tensor::Tensor4;

use super::{realize_linear, require_order, RealizationError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    /// Lowest degree of the symmetric Ricci deviation this step removed.
    pub residual_degree: u32,
    /// Whether the directly computed curvature equals
    /// `R_prev + L(Γ) + (Σ Γ_μ) ⋆ Γ − ½ Γ ⋆ Γ`.
    pub accumulation_matches: bool,
}

#[derive(Debug, Clone)]
pub struct RicciConstantResult {
    pub connection: Connection,
    pub curvature: CurvatureField,
    pub iterations: usize,
    /// Degree through which `ρ_s(R) − ρ_s(A)` is known to vanish.
    pub residual_cleared_through: u32,
    /// `Γ_1` (the linear realizer) followed by each homogeneous correction.
    pub gamma_layers: Vec<Connection>,
    pub records: Vec<IterationRecord>,
}

/// Smallest index outside `{i, j}`.
fn complementary_index(i: usize, j: usize) -> usize {
    (0..).find(|&k| k != i && k != j).expect("unbounded range")
}

/// Trace-free symbol `Γ` with `Σ_i ∂_i Γ[j][k][i] = theta[j][k]` for a
/// symmetric jet form `theta`. `theta` must vanish above degree
/// `order − 1` so the integrated symbol fits in `order`.
pub fn ricci_correction(theta: &BilinearField, order: u32) -> Result<Connection, RealizationError> {
    let m = theta.dim();
    let conn = Connection::from_fn(m, order, |i, j, l| {
        let k = complementary_index(i, j);
        if l == k {
            theta.get(i, j).lift(order).antider(k)
        } else {
            Jet::zero(m, order)
        }
    })?;
    Ok(conn)
}

/// `(a ⋆ b)[i][j][k][l] = a[i][n][l] b[j][k][n] + b[i][n][l] a[j][k][n]
///   − a[j][n][l] b[i][k][n] − b[j][n][l] a[i][k][n]`, truncated at `D − 1`.
pub fn star(a: &Connection, b: &Connection) -> Tensor4<Jet> {
    let m = a.dim();
    let valid = a.order() - 1;
    let ga = a.truncated(valid);
    let gb = b.truncated(valid);
    let at = |g: &'_ Vec<Jet>, i: usize, j: usize, k: usize| g[(i * m + j) * m + k].clone();
    Tensor4::from_fn(m, |i, j, k, l| {
        let mut pos = Jet::zero(m, valid);
        let mut neg = Jet::zero(m, valid);
        for n in 0..m {
            pos.add_product(&at(&ga, i, n, l), &at(&gb, j, k, n));
            pos.add_product(&at(&gb, i, n, l), &at(&ga, j, k, n));
            neg.add_product(&at(&ga, j, n, l), &at(&gb, i, k, n));
            neg.add_product(&at(&gb, j, n, l), &at(&ga, i, k, n));
        }
        &pos - &neg
    })
}

/// `L(Γ)[i][j][k][l] = ∂_i Γ[j][k][l] − ∂_j Γ[i][k][l]`.
pub fn linear_part(g: &Connection) -> Tensor4<Jet> {
    Tensor4::from_fn(g.dim(), |i, j, k, l| {
        &g.gamma(j, k, l).partial(i) - &g.gamma(i, k, l).partial(j)
    })
}

fn lowest_degree(field: &BilinearField) -> Option<u32> {
    field.entries().filter_map(|(_, j)| j.lowest_degree()).min()
}

pub fn realize_ricci_constant(a: &CurvatureOp, order: u32) -> Result<RicciConstantResult, RealizationError> {
    require_order(order, 2)?;
    let first = realize_linear(a, order)?;
    let mut r = curvature(&first);
    let mut nabla = first.clone();
    let mut layers = vec![first];
    let mut records = Vec::new();
    let mut previous: Option<u32> = None;

    loop {
        let (s, _) = r.ricci_deviation(a);
        let Some(d) = lowest_degree(&s) else { break };
        if let Some(p) = previous {
            if d <= p {
                return Err(RealizationError::StalledResidual { previous: p, current: d });
            }
        }
        if records.len() >= order as usize {
            return Err(RealizationError::NoTermination(records.len()));
        }
        previous = Some(d);

        let target = s.map(|j| j.homogeneous_part(d)).scaled(&-rational::one());
        let correction = ricci_correction(&target, order)?;
        nabla = nabla.plus(&correction)?;
        layers.push(correction);
        let next = curvature(&nabla);

        // `nabla` already includes the new layer
        let correction = layers.last().expect("just pushed");
        let accumulated = r
            .tensor()
            .plus(&linear_part(correction))
            .plus(&star(&nabla, correction))
            .minus(&star(correction, correction).scaled(&rational::frac(1, 2)));
        records.push(IterationRecord {
            residual_degree: d,
            accumulation_matches: &accumulated == next.tensor(),
        });
        r = next;
    }

    Ok(RicciConstantResult {
        residual_cleared_through: r.valid_order(),
        iterations: records.len(),
        connection: nabla,
        curvature: r,
        gamma_layers: layers,
        records,
    })
}
