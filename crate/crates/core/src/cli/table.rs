//! The eight-row realization table: for every combination of nonzero
//! components, realize a random operator of that shape or exhibit the
//! obstruction.

use crate::algebra::CurvatureOp;
use crate::connection::{curvature, tensor2_first_nonzero, Connection};
use crate::random::{random_curvature, ComponentMask};
use crate::realization::{
    audit_projectively_flat_ricci_antisymmetric, realize_projectively_flat_from_a, AuditVerdict, Hypothesis,
};

use super::commands::{check_dimension, origin_check, ricci_constant_checks, ricci_part_vanishes, summary, weyl_vanishes};
use super::report::{Check, Report, Status, TableRow, WitnessEntry};
use super::{CliError, Output};

pub const YES: &str = "yes";
pub const OBSTRUCTED: &str = "obstructed";
pub const FAILED: &str = "fail";

/// Only operators with nothing but an alternating Ricci part fail to be
/// realizable.
pub fn expected_verdict(mask: ComponentMask) -> &'static str {
    if mask == ComponentMask::new(false, false, true) {
        OBSTRUCTED
    } else {
        YES
    }
}

fn row_seed(seed: u64, row: usize) -> u64 {
    seed.wrapping_mul(8).wrapping_add(row as u64)
}

fn failed(name: &str, detail: String) -> Check {
    Check::new(name, Status::Fail, None).with_detail(detail)
}

fn realizable_row(a: &CurvatureOp, mask: ComponentMask, order: u32) -> (&'static str, Vec<Check>) {
    if mask.is_empty() {
        let flat = Connection::flat(a.dim(), order).expect("validated shape");
        let r = curvature(&flat);
        let checks = vec![
            Check::holds("operator_is_zero", None, a.is_zero()),
            Check::vanishing("curvature_vanishes", Some(r.valid_order()), r.first_nonzero().as_ref().map(WitnessEntry::from)),
        ];
        return ("flat", checks);
    }
    if mask.weyl {
        let (nabla, mut checks) = match ricci_constant_checks(a, order) {
            Ok(x) => x,
            Err(e) => return ("ricci-constant", vec![failed("realization", e.to_string())]),
        };
        let r = curvature(&nabla);
        if !mask.sym {
            checks.push(ricci_part_vanishes(&r, true));
        }
        if !mask.alt {
            checks.push(ricci_part_vanishes(&r, false));
        }
        return ("ricci-constant", checks);
    }
    match realize_projectively_flat_from_a(a, order) {
        Ok(nabla) => {
            let r = curvature(&nabla);
            let mut checks = vec![origin_check(&r, a), weyl_vanishes(&r)];
            if !mask.alt {
                checks.push(ricci_part_vanishes(&r, false));
            }
            ("projective", checks)
        }
        Err(e) => ("projective", vec![failed("realization", e.to_string())]),
    }
}

/// The candidate is the projectively flat realizer with the prescribed
/// 1-jet; it must violate Ricci antisymmetry somewhere.
fn obstructed_row(a: &CurvatureOp, order: u32) -> Vec<Check> {
    let nabla = match realize_projectively_flat_from_a(a, order) {
        Ok(n) => n,
        Err(e) => return vec![failed("realization", e.to_string())],
    };
    let r = curvature(&nabla);
    let v = r.valid_order();
    let (rho_s, _) = r.ricci_field().split();
    let sym_witness = tensor2_first_nonzero(&rho_s);
    let sym_check = Check::new(
        "ricci_sym_nonzero",
        if sym_witness.is_some() { Status::Witness } else { Status::Fail },
        Some(v),
    )
    .with_witness(sym_witness.as_ref().map(WitnessEntry::from));

    let audit = audit_projectively_flat_ricci_antisymmetric(&nabla);
    let failure = audit
        .hypothesis_failures
        .iter()
        .find(|f| f.hypothesis == Hypothesis::RicciAntisymmetric);
    let audit_check = Check::new(
        "audit_hypothesis_failure",
        if failure.is_some() { Status::Witness } else { Status::Fail },
        Some(audit.valid_order),
    )
    .with_witness(failure.map(|f| WitnessEntry::from(&f.witness)))
    .with_detail(Hypothesis::RicciAntisymmetric.name());

    vec![origin_check(&r, a), weyl_vanishes(&r), sym_check, audit_check]
}

fn row_verdict(checks: &[Check], obstructed: bool) -> &'static str {
    if checks.iter().any(|c| c.status == Status::Fail) {
        FAILED
    } else if obstructed {
        OBSTRUCTED
    } else {
        YES
    }
}

pub fn cmd_table(seed: u64, m: usize, order: u32) -> Result<Output, CliError> {
    check_dimension(m)?;
    if order < 3 {
        return Err(CliError::Usage(format!("--order must be at least 3 for the table, got {order}")));
    }
    let mut report = Report::new(format!("table --seed {seed} --m {m} --order {order}"), Some(seed), m, Some(order));

    for (idx, mask) in ComponentMask::table_order().into_iter().enumerate() {
        let expected = expected_verdict(mask);
        let (method, checks, obstructed) = match random_curvature(row_seed(seed, idx), m, mask) {
            Err(e) => ("none", vec![failed("generation", e.to_string())], false),
            Ok(a) => {
                let components = summary(&a).components;
                let shape = Check::holds("components_match_mask", None, components == mask.stars());
                let obstructed = expected == OBSTRUCTED;
                let (method, mut checks) = if obstructed {
                    ("projective-candidate", obstructed_row(&a, order))
                } else {
                    realizable_row(&a, mask, order)
                };
                checks.insert(0, shape);
                (method, checks, obstructed)
            }
        };
        let verdict = row_verdict(&checks, obstructed);
        report.checks.push(
            Check::holds(&format!("row {}", mask.stars()), None, verdict == expected)
                .with_detail(format!("{verdict} (expected {expected})")),
        );
        report.rows.push(TableRow {
            components: mask.stars(),
            method: method.to_string(),
            verdict: verdict.to_string(),
            expected: expected.to_string(),
            checks,
        });
    }

    let audit = audit_projectively_flat_ricci_antisymmetric(&Connection::flat(m, order).expect("m >= 3, order >= 3"));
    let flat = matches!(audit.verdict, Some(AuditVerdict::FlatThroughOrder(_)));
    report.checks.push(
        Check::holds("audit_flat_connection", Some(audit.certified_order), flat)
            .with_detail(format!("certified through degree {}", audit.certified_order)),
    );
    Ok(Output { report, artifact: None })
}
