use num_traits::Zero;

use crate::algebra::{projective_potential, weyl_project, BilinearForm, CurvatureOp};
use crate::connection::{projective_perturb, Connection, OneFormField};
use crate::jet::Jet;

use super::{require_order, RealizationError};

/// `θ_j = Σ_i z_i Θ[i][j]`; vanishes at the origin with `∂_i θ_j = Θ[i][j]`.
pub fn theta_from_form(theta: &BilinearForm, order: u32) -> OneFormField {
    let m = theta.dim();
    OneFormField::new(
        (0..m)
            .map(|j| {
                (0..m).fold(Jet::zero(m, order), |acc, i| {
                    &acc + &Jet::variable(m, order, i).scale(theta.get(i, j))
                })
            })
            .collect(),
    )
}

/// `∇_x y = θ(x)y + θ(y)x` on coordinate fields. Projectively flat with
/// `R_0 = H(Θ)`; Ricci symmetric when `Θ` is symmetric.
pub fn realize_projectively_flat(theta: &BilinearForm, order: u32) -> Result<Connection, RealizationError> {
    require_order(order, 3)?;
    let m = theta.dim();
    let flat = Connection::flat(m, order)?;
    Ok(projective_perturb(&flat, &theta_from_form(theta, order))?)
}

/// Solves `H(Θ) = A` and realizes `Θ`. Rejects operators with a nonzero
/// Weyl component.
pub fn realize_projectively_flat_from_a(a: &CurvatureOp, order: u32) -> Result<Connection, RealizationError> {
    let weyl = weyl_project(a);
    if let Some((indices, value)) = weyl.tensor().entries().find(|(_, v)| !v.is_zero()) {
        return Err(RealizationError::NotProjectivelyFlat {
            indices,
            value: value.clone(),
        });
    }
    realize_projectively_flat(&projective_potential(a), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{h_map, ricci};
    use crate::connection::curvature;
    use crate::random::{random_curvature, ComponentMask};
    use crate::rational::int;
    use crate::tensor::Tensor2;

    fn form(entries: &[(usize, usize, i64)]) -> BilinearForm {
        Tensor2::from_fn(3, |i, j| {
            int(entries.iter().find(|e| (e.0, e.1) == (i, j)).map_or(0, |e| e.2))
        })
    }

    #[test]
    fn zero_form_is_flat() {
        assert!(realize_projectively_flat(&form(&[]), 4).unwrap().is_flat_symbol());
    }

    #[test]
    fn symmetric_form() {
        let theta = form(&[(0, 0, 1)]);
        let r = curvature(&realize_projectively_flat(&theta, 6).unwrap());
        assert_eq!(r.at_origin(), h_map(&theta));
        assert!(r.weyl_project_field().is_zero());
        assert!(r.ricci_field().split().1.is_zero());
    }

    #[test]
    fn antisymmetric_form_has_symmetric_ricci_away_from_origin() {
        let theta = form(&[(0, 1, 1), (1, 0, -1)]);
        let r = curvature(&realize_projectively_flat(&theta, 6).unwrap());
        assert_eq!(r.at_origin(), h_map(&theta));
        assert!(r.weyl_project_field().is_zero());
        let rho_s = r.ricci_field().split().0;
        assert!(!rho_s.is_zero());
        assert!(rho_s.entries().all(|(_, j)| j.constant_term().is_zero()));
    }

    #[test]
    fn from_operator() {
        assert!(realize_projectively_flat_from_a(&CurvatureOp::zero(3).unwrap(), 4)
            .unwrap()
            .is_flat_symbol());
        let a = random_curvature(4, 3, ComponentMask::new(false, true, true)).unwrap();
        let r = curvature(&realize_projectively_flat_from_a(&a, 4).unwrap());
        assert_eq!(r.at_origin(), a);
        assert_eq!(ricci(&r.at_origin()), ricci(&a));

        let full = random_curvature(4, 3, ComponentMask::ALL).unwrap();
        assert!(matches!(
            realize_projectively_flat_from_a(&full, 4),
            Err(RealizationError::NotProjectivelyFlat { .. })
        ));
    }

    #[test]
    fn order_two_is_rejected() {
        assert!(realize_projectively_flat(&form(&[]), 2).is_err());
    }
}
