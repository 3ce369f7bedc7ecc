use num_traits::Zero;

use crate::algebra::{
    component_dimensions, constraint_nullity, decompose, h_map, ricci, AlgebraError, BilinearForm,
    ComponentDimensions, CurvatureOp,
};
use crate::connection::{
    curvature, d_one_form, second_bianchi_residual, tensor2_first_nonzero, trace_form_identity_residual,
    trace_one_form, volume_potential, Connection, CurvatureField,
};
use crate::io::{self, FormatError};
use crate::random::{random_curvature, ComponentMask};
use crate::rational::{self, Rational};
use crate::realization::{
    realize_linear, realize_projectively_flat_from_a, realize_ricci_constant, RealizationError,
};
use crate::tensor::{Tensor2, Tensor4};

use super::report::{Check, Report, Status, Summary, WitnessEntry};
use super::{CliError, Mode, Output};

pub(super) fn check_dimension(m: usize) -> Result<(), CliError> {
    let max = io::max_dimension();
    if m < crate::algebra::MIN_DIMENSION {
        return Err(CliError::Usage(format!("--m must be at least 3, got {m}")));
    }
    if m > max {
        return Err(CliError::Parse(FormatError::TooLarge { m, max }));
    }
    Ok(())
}

pub(super) fn tensor4_diff(a: &Tensor4<Rational>, b: &Tensor4<Rational>) -> Option<WitnessEntry> {
    a.entries().zip(b.entries()).find_map(|((idx, x), (_, y))| {
        (x != y).then(|| WitnessEntry::constant(&idx, &(x - y)))
    })
}

pub(super) fn tensor2_diff(a: &Tensor2<Rational>, b: &Tensor2<Rational>) -> Option<WitnessEntry> {
    a.entries().zip(b.entries()).find_map(|(((i, j), x), (_, y))| {
        (x != y).then(|| WitnessEntry::constant(&[i, j], &(x - y)))
    })
}

fn matrix(t: &BilinearForm) -> Vec<Vec<String>> {
    (0..t.dim())
        .map(|i| (0..t.dim()).map(|j| rational::to_string(t.get(i, j))).collect())
        .collect()
}

pub(super) fn summary(a: &CurvatureOp) -> Summary {
    let d = decompose(a);
    let weyl_nonzero_entries = d.weyl.tensor().entries().filter(|(_, v)| !v.is_zero()).count();
    let mask = ComponentMask::new(
        weyl_nonzero_entries > 0,
        !d.ricci_sym.is_zero(),
        !d.ricci_alt.is_zero(),
    );
    Summary {
        components: mask.stars(),
        weyl_nonzero_entries,
        ricci_sym: matrix(&d.ricci_sym),
        ricci_alt: matrix(&d.ricci_alt),
        projectively_flat: weyl_nonzero_entries == 0,
        ricci_symmetric: d.ricci_alt.is_zero(),
    }
}

pub fn cmd_gen(seed: u64, m: usize, mask: ComponentMask) -> Result<Output, CliError> {
    check_dimension(m)?;
    let a = random_curvature(seed, m, mask).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut report = Report::new(format!("gen --seed {seed} --m {m} --mask {mask}"), Some(seed), m, None);
    let s = summary(&a);
    report
        .checks
        .push(Check::holds("components_match_mask", None, s.components == mask.stars()).with_detail(s.components.clone()));
    report.summary = Some(s);
    Ok(Output {
        report,
        artifact: Some(io::tensor_to_json(&a)),
    })
}

/// Validates a parsed tensor, recording antisymmetry and first Bianchi
/// checks. Returns `None` (with failing checks) on a violation.
pub(super) fn validated(raw: Tensor4<Rational>, report: &mut Report) -> Result<Option<CurvatureOp>, CliError> {
    let anti = raw.antisymmetry_violation();
    let bianchi = raw.bianchi_violation();
    let w = |v: Option<([usize; 4], Rational)>| v.map(|(idx, r)| WitnessEntry::constant(&idx, &r));
    let ok = anti.is_none() && bianchi.is_none();
    report.checks.push(Check::vanishing("antisymmetry", None, w(anti)));
    report.checks.push(Check::vanishing("first_bianchi", None, w(bianchi)));
    if !ok {
        return Ok(None);
    }
    match CurvatureOp::try_from_tensor(raw) {
        Ok(a) => Ok(Some(a)),
        Err(AlgebraError::DimensionTooSmall(m)) => Err(CliError::Usage(format!(
            "curvature operators need m >= 3, file has m = {m}"
        ))),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

pub fn cmd_check(path: &str, text: &str) -> Result<Output, CliError> {
    let raw = io::parse_tensor(text)?;
    let m = raw.dim();
    if m < crate::algebra::MIN_DIMENSION {
        return Err(CliError::Usage(format!("curvature operators need m >= 3, file has m = {m}")));
    }
    let mut report = Report::new(format!("check {path}"), None, m, None);
    let Some(a) = validated(raw, &mut report)? else {
        return Ok(Output { report, artifact: None });
    };
    let d = decompose(&a);
    let mi = m as i64;
    report
        .checks
        .push(Check::vanishing("reconstruction", None, tensor4_diff(d.recompose().tensor(), a.tensor())));
    report.checks.push(Check::vanishing(
        "weyl_is_ricci_free",
        None,
        tensor2_diff(&ricci(&d.weyl), &crate::algebra::bilinear_zero(m)),
    ));
    report.checks.push(Check::vanishing(
        "weyl_idempotent",
        None,
        tensor4_diff(crate::algebra::weyl_project(&d.weyl).tensor(), d.weyl.tensor()),
    ));
    report.checks.push(Check::vanishing(
        "ricci_of_h_sym",
        None,
        tensor2_diff(&ricci(&h_map(&d.ricci_sym)), &d.ricci_sym.scaled(&rational::int(1 - mi))),
    ));
    report.checks.push(Check::vanishing(
        "ricci_of_h_alt",
        None,
        tensor2_diff(&ricci(&h_map(&d.ricci_alt)), &d.ricci_alt.scaled(&rational::int(-1 - mi))),
    ));
    report.summary = Some(summary(&a));
    Ok(Output { report, artifact: None })
}

fn field_witness(w: Option<crate::witness::JetWitness>) -> Option<WitnessEntry> {
    w.as_ref().map(WitnessEntry::from)
}

pub(super) fn origin_check(r: &CurvatureField, a: &CurvatureOp) -> Check {
    Check::vanishing("r0_equals_a", Some(0), tensor4_diff(r.at_origin().tensor(), a.tensor()))
}

pub(super) fn weyl_vanishes(r: &CurvatureField) -> Check {
    Check::vanishing(
        "weyl_projection_vanishes",
        Some(r.valid_order()),
        field_witness(r.weyl_project_field().first_nonzero()),
    )
}

pub(super) fn ricci_part_vanishes(r: &CurvatureField, sym: bool) -> Check {
    let (s, a) = r.ricci_field().split();
    let (name, part) = if sym {
        ("ricci_sym_vanishes", s)
    } else {
        ("ricci_alt_vanishes", a)
    };
    Check::vanishing(name, Some(r.valid_order()), field_witness(tensor2_first_nonzero(&part)))
}

/// Checks reported for a constant-Ricci realization of `a`.
pub(super) fn ricci_constant_checks(a: &CurvatureOp, order: u32) -> Result<(Connection, Vec<Check>), RealizationError> {
    let res = realize_ricci_constant(a, order)?;
    let r = &res.curvature;
    let v = r.valid_order();
    let (dev_s, dev_a) = r.ricci_deviation(a);
    let layers_ok = res.gamma_layers.iter().skip(1).all(Connection::is_trace_free);
    let accumulation_ok = res.records.iter().all(|rec| rec.accumulation_matches);
    let degrees: Vec<String> = res.records.iter().map(|rec| rec.residual_degree.to_string()).collect();
    let checks = vec![
        origin_check(r, a),
        Check::vanishing("ricci_sym_constant", Some(v), field_witness(tensor2_first_nonzero(&dev_s))),
        Check::vanishing("ricci_alt_constant", Some(v), field_witness(tensor2_first_nonzero(&dev_a))),
        Check::holds("iterations_bounded", None, res.iterations <= order as usize)
            .with_detail(format!("{} iterations, residual degrees [{}]", res.iterations, degrees.join(","))),
        Check::holds("correction_layers_trace_free", None, layers_ok),
        Check::holds("accumulation_identity", Some(v), accumulation_ok),
    ];
    Ok((res.connection, checks))
}

pub fn cmd_realize(path: &str, text: &str, mode: Mode, order: u32) -> Result<Output, CliError> {
    let raw = io::parse_tensor(text)?;
    let m = raw.dim();
    if m < crate::algebra::MIN_DIMENSION {
        return Err(CliError::Usage(format!("curvature operators need m >= 3, file has m = {m}")));
    }
    let mut report = Report::new(
        format!("realize --mode {} --order {order} {path}", mode.name()),
        None,
        m,
        Some(order),
    );
    let Some(a) = validated(raw, &mut report)? else {
        return Ok(Output { report, artifact: None });
    };
    let usage = |e: RealizationError| match e {
        RealizationError::OrderTooSmall { .. } => CliError::Usage(e.to_string()),
        other => CliError::Realization(other),
    };
    let nabla = match mode {
        Mode::Linear => {
            let nabla = realize_linear(&a, order).map_err(usage)?;
            report.checks.push(origin_check(&curvature(&nabla), &a));
            nabla
        }
        Mode::RicciConstant => {
            let (nabla, checks) = ricci_constant_checks(&a, order).map_err(usage)?;
            report.checks.extend(checks);
            nabla
        }
        Mode::Projective => match realize_projectively_flat_from_a(&a, order) {
            Ok(nabla) => {
                let r = curvature(&nabla);
                report.checks.push(Check::new("input_projectively_flat", Status::Pass, None));
                report.checks.push(origin_check(&r, &a));
                report.checks.push(weyl_vanishes(&r));
                if decompose(&a).ricci_alt.is_zero() {
                    report.checks.push(ricci_part_vanishes(&r, false));
                }
                nabla
            }
            Err(RealizationError::NotProjectivelyFlat { indices, value }) => {
                report.checks.push(
                    Check::new("input_projectively_flat", Status::Fail, None)
                        .with_witness(Some(WitnessEntry::constant(&indices, &value)))
                        .with_detail("P(A) has a nonzero entry"),
                );
                report.summary = Some(summary(&a));
                return Ok(Output { report, artifact: None });
            }
            Err(e) => return Err(usage(e)),
        },
    };
    report.summary = Some(summary(&a));
    Ok(Output {
        report,
        artifact: Some(io::connection_to_json(&nabla)),
    })
}

pub fn cmd_verify(path: &str, text: &str) -> Result<Output, CliError> {
    let nabla = io::parse_connection(text)?;
    let m = nabla.dim();
    let mut report = Report::new(format!("verify {path}"), None, m, Some(nabla.order()));
    let r = curvature(&nabla);
    let v = r.valid_order();

    let (anti, bianchi) = match r.symmetry_violation() {
        Some((crate::algebra::Identity::Antisymmetry, w)) => (Some(w), None),
        Some((crate::algebra::Identity::FirstBianchi, w)) => (None, Some(w)),
        None => (None, None),
    };
    report.checks.push(Check::vanishing("antisymmetry", Some(v), field_witness(anti)));
    report.checks.push(Check::vanishing("first_bianchi", Some(v), field_witness(bianchi)));
    report.checks.push(Check::vanishing(
        "trace_identity",
        Some(v),
        field_witness(tensor2_first_nonzero(&r.trace_identity_residual())),
    ));
    report.checks.push(Check::vanishing(
        "trace_form_identity",
        Some(v),
        field_witness(tensor2_first_nonzero(&trace_form_identity_residual(&nabla, &r))),
    ));

    let d_omega = d_one_form(&trace_one_form(&nabla));
    let (_, rho_a) = r.ricci_field().split();
    let closed = d_omega.first_nonzero().is_none();
    let ricci_symmetric = tensor2_first_nonzero(&rho_a).is_none();
    let through = v.min(d_omega.valid_order());
    report.checks.push(
        Check::holds("closed_iff_ricci_symmetric", Some(through), closed == ricci_symmetric).with_detail(format!(
            "d(omega) {} 0, rho_a {} 0",
            if closed { "=" } else { "!=" },
            if ricci_symmetric { "=" } else { "!=" }
        )),
    );
    match volume_potential(&nabla) {
        Ok(f) => {
            report.checks.push(Check::holds("volume_potential", Some(f.order()), ricci_symmetric));
            report.volume_potential = Some(io::jet_to_file(&f));
        }
        Err(nc) => {
            let status = if ricci_symmetric { Status::Fail } else { Status::Witness };
            report.checks.push(
                Check::new("volume_potential", status, Some(d_omega.valid_order()))
                    .with_witness(Some(WitnessEntry::from(&nc.witness)))
                    .with_detail("not closed: no parallel volume form"),
            );
        }
    }
    let residual = second_bianchi_residual(&nabla);
    report.checks.push(Check::vanishing(
        "second_bianchi",
        Some(residual.valid_order()),
        field_witness(residual.first_nonzero()),
    ));
    Ok(Output { report, artifact: None })
}

pub fn cmd_dims(m: usize) -> Result<Output, CliError> {
    check_dimension(m)?;
    let mut report = Report::new(format!("dims --m {m}"), None, m, None);
    let formulas = ComponentDimensions::from_formulas(m);
    let detail = |d: &ComponentDimensions| format!("weyl={} sym={} alt={} total={}", d.weyl, d.sym, d.alt, d.total);
    match component_dimensions(m) {
        Ok(d) => report
            .checks
            .push(Check::new("formula_matches_rank", Status::Pass, None).with_detail(detail(&d))),
        Err(e) => report
            .checks
            .push(Check::new("formula_matches_rank", Status::Fail, None).with_detail(e.to_string())),
    }
    let nullity = constraint_nullity(m);
    report.checks.push(
        Check::holds("total_matches_constraint_nullity", None, nullity == formulas.total)
            .with_detail(format!("nullity={nullity}")),
    );
    Ok(Output { report, artifact: None })
}
