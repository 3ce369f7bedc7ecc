//! Audit of the claim "projectively flat + Ricci antisymmetric ⇒ flat" on
//! a jet connection.
//!
//! With `ω = −ρ/(m+1)` the hypotheses give
//! `R(∂_i, ∂_j) ∂_k = 2ω_ij ∂_k + ω_ik ∂_j − ω_jk ∂_i`. The second Bianchi
//! identity then forces `∇ω = 0`, the Ricci identity for `ω` forces
//! `4ω(x,y)ω(z,w) + 2ω(x,z)ω(y,w) − 2ω(x,w)ω(y,z) = 0`, and `x = z, y = w`
//! gives `6ω(x,y)² = 0`. Each step is evaluated on jets; a vanishing square
//! through degree `v − 1` only certifies `ω` through `⌊(v − 1)/2⌋`.

use crate::connection::{
    curvature, h_map_field, tensor4_first_nonzero, Connection, CurvatureField,
    TwoFormField,
};
use crate::jet::Jet;
use crate::rational;
use crate::tensor::{Tensor2, Tensor4};
use crate::witness::{self, JetWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `P(R) ≡ 0`
    ProjectivelyFlat,
    /// `ρ_s(R) ≡ 0`
    RicciAntisymmetric,
}

impl Hypothesis {
    pub fn name(&self) -> &'static str {
        match self {
            Hypothesis::ProjectivelyFlat => "projectively_flat",
            Hypothesis::RicciAntisymmetric => "ricci_antisymmetric",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisFailure {
    pub hypothesis: Hypothesis,
    pub witness: JetWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditVerdict {
    /// Curvature certified zero through this degree.
    FlatThroughOrder(u32),
    /// A derived step failed although both hypotheses held.
    ObstructionWitness { step: &'static str, witness: JetWitness },
}

/// Outcome of the derived steps; only computed when both hypotheses hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedChecks {
    /// `R − (2ω_ij δ_k^l + ω_ik δ_j^l − ω_jk δ_i^l)`
    pub reconstruction_residual: Option<JetWitness>,
    pub nabla_omega_checked_through: u32,
    pub nabla_omega_residual: Option<JetWitness>,
    /// `4ω_xy ω_zw + 2ω_xz ω_yw − 2ω_xw ω_yz`, checked through `v − 1`.
    pub quadratic_identity_residual: Option<JetWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub valid_order: u32,
    pub omega: TwoFormField,
    pub hypothesis_failures: Vec<HypothesisFailure>,
    pub derived: Option<DerivedChecks>,
    /// `⌊(v − 1)/2⌋`.
    pub certified_order: u32,
    /// Measured: largest degree through which every `ω_ij` vanishes.
    pub omega_vanishes_through: Option<u32>,
    /// Measured: largest degree through which every `R` entry vanishes.
    pub curvature_vanishes_through: Option<u32>,
    /// `None` when a hypothesis fails.
    pub verdict: Option<AuditVerdict>,
}

fn omega_from_ricci(r: &CurvatureField) -> TwoFormField {
    let m = r.dim() as i64;
    let rho = r.ricci_field();
    // Under the Ricci-antisymmetric hypothesis ρ = ρ_a; use ρ_a so the
    // result is a 2-form even when the hypothesis fails.
    let (_, rho_a) = rho.split();
    TwoFormField::from_tensor(rho_a.scaled(&rational::frac(-1, m + 1)))
        .expect("alternating part is antisymmetric")
}

/// `ω_{ij;s} = ∂_s ω_ij − Γ[s][i][n] ω_nj − Γ[s][j][n] ω_in`, indexed
/// `[i][j][s][0]` in a 4-tensor for witness reporting.
fn covariant_derivative_two_form(nabla: &Connection, omega: &TwoFormField) -> Tensor4<Jet> {
    let m = nabla.dim();
    let valid = omega.valid_order() - 1;
    let w = omega.tensor().map(|j| j.truncate(valid));
    Tensor4::from_fn(m, |i, j, s, t| {
        if t != 0 {
            return Jet::zero(m, valid);
        }
        let mut v = omega.get(i, j).partial(s);
        let mut corr = Jet::zero(m, valid);
        for n in 0..m {
            corr.add_product(&nabla.gamma(s, i, n).truncate(valid), w.get(n, j));
            corr.add_product(&nabla.gamma(s, j, n).truncate(valid), w.get(i, n));
        }
        v = &v - &corr;
        v
    })
}

fn quadratic_identity(omega: &TwoFormField) -> Tensor4<Jet> {
    let m = omega.tensor().dim();
    let valid = omega.valid_order().saturating_sub(1);
    let w: Tensor2<Jet> = omega.tensor().map(|j| j.truncate(valid));
    Tensor4::from_fn(m, |x, y, z, u| {
        let mut acc = Jet::zero(m, valid);
        acc.add_product(&w.get(x, y).scale(&rational::int(4)), w.get(z, u));
        acc.add_product(&w.get(x, z).scale(&rational::int(2)), w.get(y, u));
        acc.add_product(&w.get(x, u).scale(&rational::int(-2)), w.get(y, z));
        acc
    })
}

pub fn audit_projectively_flat_ricci_antisymmetric(nabla: &Connection) -> AuditReport {
    let r = curvature(nabla);
    let v = r.valid_order();
    let omega = omega_from_ricci(&r);

    let mut hypothesis_failures = Vec::new();
    if let Some(witness) = r.weyl_project_field().first_nonzero() {
        hypothesis_failures.push(HypothesisFailure {
            hypothesis: Hypothesis::ProjectivelyFlat,
            witness,
        });
    }
    let (rho_s, _) = r.ricci_field().split();
    if let Some(witness) = crate::connection::tensor2_first_nonzero(&rho_s) {
        hypothesis_failures.push(HypothesisFailure {
            hypothesis: Hypothesis::RicciAntisymmetric,
            witness,
        });
    }

    let certified_order = v.saturating_sub(1) / 2;
    let omega_vanishes_through = witness::vanishes_through(omega.tensor().entries().map(|(_, j)| j), v);
    let curvature_vanishes_through = witness::vanishes_through(r.tensor().entries().map(|(_, j)| j), v);

    let mut report = AuditReport {
        valid_order: v,
        omega,
        hypothesis_failures,
        derived: None,
        certified_order,
        omega_vanishes_through,
        curvature_vanishes_through,
        verdict: None,
    };
    if !report.hypothesis_failures.is_empty() {
        return report;
    }

    let rebuilt = h_map_field(report.omega.tensor());
    let reconstruction_residual = tensor4_first_nonzero(&r.tensor().minus(&rebuilt));
    let nabla_omega = covariant_derivative_two_form(nabla, &report.omega);
    let nabla_omega_residual = tensor4_first_nonzero(&nabla_omega).map(|mut w| {
        w.indices.truncate(3);
        w
    });
    let quadratic_identity_residual = tensor4_first_nonzero(&quadratic_identity(&report.omega));
    let derived = DerivedChecks {
        reconstruction_residual,
        nabla_omega_checked_through: v - 1,
        nabla_omega_residual,
        quadratic_identity_residual,
    };

    let failed_step = [
        ("reconstruction", &derived.reconstruction_residual),
        ("covariant_derivative_of_omega", &derived.nabla_omega_residual),
        ("quadratic_identity", &derived.quadratic_identity_residual),
    ]
    .into_iter()
    .find_map(|(step, w)| w.clone().map(|w| (step, w)));

    report.verdict = Some(match failed_step {
        Some((step, witness)) => AuditVerdict::ObstructionWitness { step, witness },
        None => match report.omega.first_nonzero() {
            Some(w) if w.degree() <= certified_order => AuditVerdict::ObstructionWitness {
                step: "omega_vanishing",
                witness: w,
            },
            _ => AuditVerdict::FlatThroughOrder(certified_order),
        },
    });
    report.derived = Some(derived);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::projective_perturb;
    use crate::random::{random_antisymmetric, rng_from_seed};
    use crate::realization::realize_projectively_flat;
    use crate::connection::OneFormField;

    #[test]
    fn flat_connection_is_certified() {
        let report = audit_projectively_flat_ricci_antisymmetric(&Connection::flat(3, 6).unwrap());
        assert!(report.hypothesis_failures.is_empty());
        assert!(report.omega.is_zero());
        assert_eq!(report.certified_order, 2);
        assert_eq!(report.verdict, Some(AuditVerdict::FlatThroughOrder(2)));
    }

    #[test]
    fn projectively_flat_antisymmetric_candidate_fails_hypothesis() {
        let theta = random_antisymmetric(&mut rng_from_seed(1), 3);
        let nabla = realize_projectively_flat(&theta, 6).unwrap();
        let report = audit_projectively_flat_ricci_antisymmetric(&nabla);
        assert_eq!(report.verdict, None);
        assert_eq!(report.hypothesis_failures.len(), 1);
        let failure = &report.hypothesis_failures[0];
        assert_eq!(failure.hypothesis, Hypothesis::RicciAntisymmetric);
        assert!(failure.witness.degree() > 0);
    }

    #[test]
    fn exact_perturbation_is_ricci_symmetric_and_fails() {
        // θ = z1 dz1 = d(z1²/2)
        let m = 3;
        let theta = OneFormField::new(
            (0..m)
                .map(|i| if i == 0 { Jet::variable(m, 5, 0) } else { Jet::zero(m, 5) })
                .collect(),
        );
        let nabla = projective_perturb(&Connection::flat(m, 5).unwrap(), &theta).unwrap();
        let r = curvature(&nabla);
        assert!(r.ricci_field().split().1.is_zero());
        let report = audit_projectively_flat_ricci_antisymmetric(&nabla);
        assert!(report.verdict.is_none());
        assert!(report
            .hypothesis_failures
            .iter()
            .any(|f| f.hypothesis == Hypothesis::RicciAntisymmetric));
    }
}
