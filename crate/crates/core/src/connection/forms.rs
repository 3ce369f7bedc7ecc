//! Trace 1-form, exterior derivative, and the parallel volume potential.

use crate::jet::{total_degree, Jet};
use crate::rational;
use crate::tensor::Tensor2;
use crate::witness::JetWitness;

use super::{Connection, CurvatureField, OneFormField, TwoFormField};

/// `ω_i = Σ_j Γ[i][j][j]`.
pub fn trace_one_form(nabla: &Connection) -> OneFormField {
    let m = nabla.dim();
    OneFormField::new(
        (0..m)
            .map(|i| {
                (0..m).fold(Jet::zero(m, nabla.order()), |acc, j| {
                    &acc + nabla.gamma(i, j, j)
                })
            })
            .collect(),
    )
}

/// Components `(dθ)[i][j] = ∂_i θ_j − ∂_j θ_i`, so that
/// `dθ = Σ_{i<j} (dθ)[i][j] dx^i ∧ dx^j`.
pub fn d_one_form(theta: &OneFormField) -> TwoFormField {
    let m = theta.dim();
    let e = theta.entries();
    let t = Tensor2::from_fn(m, |i, j| &e[j].partial(i) - &e[i].partial(j));
    TwoFormField::from_tensor(t).expect("antisymmetric by construction")
}

/// Residual of `Σ_{i,j} Tr{R(∂_i, ∂_j)} dx^i ∧ dx^j = 2 d(Γ_{ij}^j dx^i)`
/// on the basis `dx^i ∧ dx^j, i < j`: `2·Tr[i][j] − 2·(dω)[i][j]`. Zero
/// for every torsion-free connection.
pub fn trace_form_identity_residual(nabla: &Connection, r: &CurvatureField) -> Tensor2<Jet> {
    let tr = r.trace_two_form();
    let dw = d_one_form(&trace_one_form(nabla));
    let two = rational::int(2);
    Tensor2::from_fn(nabla.dim(), |i, j| {
        if i < j {
            let lhs = tr.get(i, j).scale(&two);
            let rhs = dw.get(i, j).scale(&two);
            &lhs - &rhs
        } else {
            Jet::zero(nabla.dim(), r.valid_order())
        }
    })
}

/// Failure of `dω = 0`: the connection is not Ricci symmetric and admits no
/// parallel volume form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotClosed {
    pub witness: JetWitness,
}

impl std::fmt::Display for NotClosed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "trace 1-form is not closed: dω{}", self.witness)
    }
}

impl std::error::Error for NotClosed {}

/// Potential `Φ` with `Φ(0) = 0` and `∂_i Φ = Σ_k Γ[i][k][k]` through
/// degree `D − 1`, so that `e^Φ dx¹ ∧ … ∧ dxᵐ` is parallel. Built by the
/// radial homotopy `Φ = Σ_d (1/d) Σ_i z_i · ω_i^{(d−1)}`.
pub fn volume_potential(nabla: &Connection) -> Result<Jet, NotClosed> {
    let omega = trace_one_form(nabla);
    if let Some(witness) = d_one_form(&omega).first_nonzero() {
        return Err(NotClosed { witness });
    }
    let m = nabla.dim();
    let order = nabla.order();
    let mut phi = Jet::zero(m, order);
    for (i, w) in omega.entries().iter().enumerate() {
        for (exps, c) in w.terms() {
            let d = total_degree(exps) + 1;
            let mut e = exps.to_vec();
            e[i] += 1;
            phi = &phi + &Jet::monomial(m, order, &e, c / rational::int(i64::from(d)));
        }
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn flat_has_zero_forms() {
        let flat = Connection::flat(3, 4).unwrap();
        assert!(trace_one_form(&flat).is_zero());
        assert!(d_one_form(&trace_one_form(&flat)).is_zero());
        assert!(volume_potential(&flat).unwrap().is_zero());
    }

    #[test]
    fn exact_trace_form_integrates() {
        // Γ[0][0][0] = z1 gives ω = z1 dz1, Φ = z1²/2
        let m = 3;
        let nabla = Connection::from_fn(m, 4, |i, j, k| {
            if (i, j, k) == (0, 0, 0) {
                Jet::variable(m, 4, 0)
            } else {
                Jet::zero(m, 4)
            }
        })
        .unwrap();
        let phi = volume_potential(&nabla).unwrap();
        assert_eq!(phi, Jet::monomial(m, 4, &[2, 0, 0], frac(1, 2)));
    }

    #[test]
    fn non_closed_trace_form_is_witnessed() {
        // ω = z2 dz1: dω[0][1] = ∂_0 ω_1 − ∂_1 ω_0 = −1
        let m = 3;
        let nabla = Connection::from_fn(m, 3, |i, j, k| {
            if (i, j, k) == (0, 0, 0) {
                Jet::variable(m, 3, 1)
            } else {
                Jet::zero(m, 3)
            }
        })
        .unwrap();
        let err = volume_potential(&nabla).unwrap_err();
        assert_eq!(err.witness.indices, vec![0, 1]);
        assert_eq!(err.witness.value, int(-1));
    }

    #[test]
    fn potential_differentiates_back() {
        let m = 3;
        let order = 5;
        // ω = ∇(z1² z2 + z3³) realized through Γ[i][i][i]
        let f = &(&Jet::monomial(m, order, &[2, 1, 0], int(1)) + &Jet::monomial(m, order, &[0, 0, 3], int(1)))
            + &Jet::monomial(m, order, &[1, 1, 1], frac(2, 3));
        let grads: Vec<Jet> = (0..m).map(|i| f.partial(i)).collect();
        let nabla = Connection::from_fn(m, order, |i, j, k| {
            if i == j && j == k {
                let mut g = Jet::zero(m, order);
                for (e, c) in grads[i].terms() {
                    g = &g + &Jet::monomial(m, order, e, c.clone());
                }
                g
            } else {
                Jet::zero(m, order)
            }
        })
        .unwrap();
        let phi = volume_potential(&nabla).unwrap();
        assert_eq!(phi, f);
    }
}
