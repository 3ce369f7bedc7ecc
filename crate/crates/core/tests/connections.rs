use curvforge::connection::{
    curvature, d_one_form, projective_perturb, second_bianchi_residual, tensor2_first_nonzero,
    trace_form_identity_residual, trace_one_form, volume_potential, Connection,
};
use curvforge::jet::Jet;
use curvforge::random::{random_connection, random_jet, random_one_form, rng_from_seed};
use curvforge::realization::{audit_projectively_flat_ricci_antisymmetric, AuditVerdict};
use proptest::prelude::*;

type Matrix = Vec<Vec<Jet>>;

fn mat_mul(a: &Matrix, b: &Matrix, m: usize, order: u32) -> Matrix {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Jet::zero(m, order);
                    for k in 0..m {
                        acc.add_product(&a[i][k], &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Flat connection written in the coordinates `y` with `x = y + q(y)`:
/// `Γ_ij^k = Σ_l (Dφ⁻¹)^k_l ∂_i ∂_j φ^l`.
fn flat_in_disguise(seed: u64, m: usize, order: u32) -> Connection {
    let mut rng = rng_from_seed(seed);
    let q: Vec<Jet> = (0..m)
        .map(|_| {
            let j = random_jet(&mut rng, m, order, 3, 4);
            // keep only degrees 2 and 3 so that φ is tangent to the identity
            &j.homogeneous_part(2) + &j.homogeneous_part(3)
        })
        .collect();
    // N^l_k = ∂_k q^l, lifted back to the working order (it has degree ≤ 2)
    let n: Matrix = (0..m)
        .map(|l| (0..m).map(|k| q[l].partial(k).lift(order).scale(&(-curvforge::rational::one()))).collect())
        .collect();
    let identity: Matrix = (0..m)
        .map(|i| (0..m).map(|j| Jet::constant(m, order, curvforge::rational::int(i64::from(i == j)))).collect())
        .collect();
    // (I + N)^{-1} = Σ (−N)^p, exact through the order since N(0) = 0
    let mut inverse = identity.clone();
    let mut power = identity;
    for _ in 0..order {
        power = mat_mul(&power, &n, m, order);
        for i in 0..m {
            for j in 0..m {
                inverse[i][j] = &inverse[i][j] + &power[i][j];
            }
        }
    }
    Connection::from_fn(m, order, |i, j, k| {
        let mut g = Jet::zero(m, order);
        for l in 0..m {
            let hess = q[l].partial(i).partial(j).lift(order);
            g.add_product(&inverse[k][l], &hess);
        }
        g
    })
    .expect("symmetric in i, j")
}

#[test]
fn disguised_flat_connection_is_flat() {
    let nabla = flat_in_disguise(9, 3, 5);
    assert!(!nabla.is_flat_symbol());
    let r = curvature(&nabla);
    assert!(r.is_zero(), "{:?}", r.first_nonzero());
    let audit = audit_projectively_flat_ricci_antisymmetric(&nabla);
    assert!(audit.hypothesis_failures.is_empty());
    assert_eq!(audit.verdict, Some(AuditVerdict::FlatThroughOrder(1)));
    assert!(volume_potential(&nabla).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn weyl_part_is_projectively_invariant(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let nabla = random_connection(&mut rng, 3, 5);
        let theta = random_one_form(&mut rng, 3, 5);
        let perturbed = projective_perturb(&nabla, &theta).unwrap();
        prop_assert_eq!(
            curvature(&nabla).weyl_project_field(),
            curvature(&perturbed).weyl_project_field()
        );
    }

    #[test]
    fn curvature_identities_hold(seed in any::<u64>()) {
        let nabla = random_connection(&mut rng_from_seed(seed), 3, 5);
        let r = curvature(&nabla);
        prop_assert!(r.symmetry_violation().is_none());
        prop_assert!(tensor2_first_nonzero(&r.trace_identity_residual()).is_none());
        prop_assert!(tensor2_first_nonzero(&trace_form_identity_residual(&nabla, &r)).is_none());
        prop_assert!(second_bianchi_residual(&nabla).is_zero());
    }

    #[test]
    fn closed_iff_ricci_symmetric(seed in any::<u64>()) {
        let nabla = random_connection(&mut rng_from_seed(seed), 3, 4);
        let closed = d_one_form(&trace_one_form(&nabla)).is_zero();
        let (_, rho_a) = curvature(&nabla).ricci_field().split();
        prop_assert_eq!(closed, rho_a.is_zero());
        prop_assert_eq!(volume_potential(&nabla).is_ok(), closed);
    }

    #[test]
    fn disguised_flat_connections(seed in any::<u64>()) {
        let nabla = flat_in_disguise(seed, 3, 4);
        prop_assert!(curvature(&nabla).is_zero());
        prop_assert!(second_bianchi_residual(&nabla).is_zero());
    }
}

#[test]
fn gradient_perturbation_keeps_ricci_symmetric() {
    // θ = dφ is closed, so the perturbed connection stays Ricci symmetric
    let m = 3;
    let phi = random_jet(&mut rng_from_seed(4), m, 6, 4, 5);
    let theta = curvforge::connection::OneFormField::new((0..m).map(|k| phi.partial(k).lift(5)).collect());
    let flat = Connection::flat(m, 5).unwrap();
    let nabla = projective_perturb(&flat, &theta).unwrap();
    let (_, rho_a) = curvature(&nabla).ricci_field().split();
    assert!(rho_a.is_zero());
}
