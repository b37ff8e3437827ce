//! Experiment runners. Each returns the summary and its tables; nothing is
//! written here.

use std::collections::BTreeMap;

use monoscheme_core::bvp1d::{
    analytic_solution, convergence_order, determinant_scan, residual_bound, solve_base, solve_form12,
    solve_monotonized, Bvp1dSolution, OrderStatus, SchemeKind,
};
use monoscheme_core::metrics::{
    check_prop3, count_extrema_3d, find_extrema_3d, max_step_change, sharpness_metrics, MonotonicityReport,
};
use monoscheme_core::ns3d::{centerline_profile, snapshot, solve_steady, SolutionReport, Variant};
use monoscheme_core::stencil::{apply_m_1d, Axis};
use monoscheme_core::timestep::{run_to_steady, stationary_residual, StepForm};
use monoscheme_core::{BoundaryData1D, Field1D, Field3D, Mesh1D, Mesh3D, Region3D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{
    Experiment, MetricsSection, OrderSection, RunConfig, ScanSection, SchemeChoice, Solve1dSection, Solve3dSection,
    TimestepSection,
};
use crate::error::{CliError, CliResult};
use crate::output::Table;
use crate::summary::{
    AnswerMetrics, Check, Details, FlowRun, MetricsDetails, OrderDetails, ScanDetails, Solve1dDetails,
    Solve3dDetails, Summary, TimestepDetails,
};

/// Ratio limits reported as checks.
pub const CLOSENESS_LIMIT: f64 = 0.05;
pub const FORM_LIMIT: f64 = 1e-10;
pub const RATIO_LIMIT: f64 = 0.6;
pub const ORDER_RANGE: (f64, f64) = (1.8, 2.2);

pub struct Output {
    pub summary: Summary,
    pub tables: Vec<Table>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

fn missing(section: &str) -> CliError {
    CliError::Parse(format!("missing [{section}] section"))
}

/// Validate every parameter of the selected experiment before computing.
pub fn validate(cfg: &RunConfig, ov: &Overrides) -> CliResult<()> {
    if let Some(t) = ov.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Validation(format!("--tol must be positive, got {t}")));
        }
    }
    match cfg.experiment {
        Experiment::Solve1d => {
            let s = cfg.solve1d.as_ref().ok_or_else(|| missing("solve1d"))?;
            s.coefficients()?;
            s.mesh()?;
            if s.reference_points != 0 {
                Mesh1D::with_total_points(s.interval[0], s.interval[1], s.reference_points)
                    .map_err(CliError::validation)?;
            }
        }
        Experiment::Solve3d => {
            cfg.solve3d.as_ref().ok_or_else(|| missing("solve3d"))?.flow_config(ov.tol)?;
        }
        Experiment::Metrics => {
            let m = cfg.metrics.as_ref().ok_or_else(|| missing("metrics"))?;
            if m.sequence.is_empty() && m.random_fields == 0 {
                return Err(CliError::Validation("metrics needs a sequence or random_fields > 0".into()));
            }
            if m.random_fields > 0 && !(2..=40).contains(&m.max_n) {
                return Err(CliError::Validation(format!("max_n must lie in 2..=40, got {}", m.max_n)));
            }
        }
        Experiment::Order => {
            let o = cfg.order.as_ref().ok_or_else(|| missing("order"))?;
            o.coefficients()?;
            if o.n.len() < 3 || o.n.windows(2).any(|w| w[1] <= w[0]) || o.n[0] == 0 {
                return Err(CliError::Validation("order needs at least three increasing n".into()));
            }
            if o.schemes.is_empty() {
                return Err(CliError::Validation("order needs at least one scheme".into()));
            }
            Mesh1D::new(o.interval[0], o.interval[1], o.n[0]).map_err(CliError::validation)?;
        }
        Experiment::ScanDet => {
            let s = cfg.scan_det.as_ref().ok_or_else(|| missing("scan-det"))?;
            s.coefficients()?;
            if s.cells[0] < 2 || s.cells[0] > s.cells[1] {
                return Err(CliError::Validation("cells must satisfy 2 <= from <= to".into()));
            }
            Mesh1D::new(s.interval[0], s.interval[1], 1).map_err(CliError::validation)?;
        }
        Experiment::Timestep => {
            let t = cfg.timestep.as_ref().ok_or_else(|| missing("timestep"))?;
            t.coefficients()?;
            t.step_config()?;
            Mesh1D::with_total_points(t.interval[0], t.interval[1], t.points).map_err(CliError::validation)?;
            let tol = ov.tol.unwrap_or(t.steady_tol);
            if tol.is_nan() || tol <= 0.0 || t.max_steps == 0 {
                return Err(CliError::Validation("steady_tol and max_steps must be positive".into()));
            }
        }
    }
    Ok(())
}

pub fn run(cfg: &RunConfig, ov: &Overrides) -> CliResult<Output> {
    validate(cfg, ov)?;
    match cfg.experiment {
        Experiment::Solve1d => solve1d(cfg.solve1d.as_ref().expect("validated")),
        Experiment::Solve3d => solve3d(cfg.solve3d.as_ref().expect("validated"), ov),
        Experiment::Metrics => metrics(cfg.metrics.as_ref().expect("validated"), ov),
        Experiment::Order => order(cfg.order.as_ref().expect("validated")),
        Experiment::ScanDet => scan(cfg.scan_det.as_ref().expect("validated")),
        Experiment::Timestep => timestep(cfg.timestep.as_ref().expect("validated"), ov),
    }
}

/// Piecewise-linear interpolation of nodal values `ys` on the uniform mesh
/// `a + i (b - a) / (len - 1)`.
fn interpolate(a: f64, b: f64, ys: &[f64], x: f64) -> f64 {
    let m = ys.len() - 1;
    let t = ((x - a) / (b - a) * m as f64).clamp(0.0, m as f64);
    let i = (t.floor() as usize).min(m - 1);
    let w = t - i as f64;
    if w == 0.0 {
        ys[i]
    } else {
        (1.0 - w) * ys[i] + w * ys[i + 1]
    }
}

fn nodes(mesh: &Mesh1D) -> Vec<f64> {
    (0..=mesh.n() + 1).map(|i| mesh.x(i)).collect()
}

fn solve1d(s: &Solve1dSection) -> CliResult<Output> {
    let c = s.coefficients()?;
    let mesh = s.mesh()?;
    let bc = s.bc();
    let xs = nodes(&mesh);
    let want_base = s.scheme != SchemeChoice::Monotonized;
    let want_mono = s.scheme != SchemeChoice::Base;
    let base = want_base.then(|| solve_base(&c, &mesh, &bc)).transpose().map_err(CliError::solver)?;
    let mono = want_mono.then(|| solve_monotonized(&c, &mesh, &bc)).transpose().map_err(CliError::solver)?;

    let reference = if s.reference_points > 0 {
        let fine = Mesh1D::with_total_points(s.interval[0], s.interval[1], s.reference_points)
            .map_err(CliError::validation)?;
        let sol = solve_base(&c, &fine, &bc).map_err(CliError::solver)?;
        Some((nodes(&fine), sol.full()))
    } else {
        None
    };
    let reference_at: Option<Vec<f64>> = reference
        .as_ref()
        .map(|(_, r)| xs.iter().map(|&x| interpolate(s.interval[0], s.interval[1], r, x)).collect());
    let exact = analytic_solution(&c, &bc, s.interval[0], s.interval[1]).ok();

    let mut answers = Vec::new();
    let mut residuals = BTreeMap::new();
    let mut checks = Vec::new();
    let mut columns = vec![("x".to_owned(), xs.clone())];
    let dist = |full: &[f64]| reference_at.as_ref().map(|r| monoscheme_core::dist_c(full, r));
    for (label, sol) in [("u", base.as_ref()), ("y", mono.as_ref())] {
        let Some(sol) = sol else { continue };
        let full = sol.full();
        answers.push(AnswerMetrics::from_report(label, &MonotonicityReport::for_sequence(&full), dist(&full)));
        residuals.insert(label.to_owned(), sol.residual_c_norm);
        checks.push(Check::at_most(&format!("residual-{label}"), Some(sol.residual_c_norm), residual_bound(&c, sol)));
        if let Some(v) = &sol.auxiliary {
            columns.push(("v".to_owned(), v.with_boundary(&bc)));
        }
        columns.push((label.to_owned(), full));
    }
    if let Some(r) = &reference_at {
        columns.push(("reference".to_owned(), r.clone()));
    }
    if let Some(e) = &exact {
        columns.push(("exact".to_owned(), xs.iter().map(|&x| e.eval(x)).collect()));
    }

    let form12_gap = match &mono {
        Some(m) => {
            let f12 = solve_form12(&c, &mesh, &bc).map_err(CliError::solver)?;
            let gap = f12.solution.dist_c(&m.solution);
            checks.push(Check::at_most("form12-agreement", Some(gap), FORM_LIMIT));
            Some(gap)
        }
        None => None,
    };
    let (closeness, prop3) = match (&base, &mono) {
        (Some(b), Some(m)) => {
            let v = m.auxiliary.as_ref().expect("monotonized carries v");
            let ratio = b.solution.dist_c(v) / b.solution.norm_c();
            checks.push(Check::at_most("closeness", Some(ratio), CLOSENESS_LIMIT));
            let prop3 = prop3_report(b, v, &bc);
            if let Some(p) = &prop3 {
                checks.push(Check {
                    name: "prop3-interval".into(),
                    passed: p.premises_hold && p.inside,
                    value: Some(p.k1),
                    limit: p.interval.map_or(f64::NAN, |i| i.1),
                });
            }
            (Some(ratio), prop3)
        }
        _ => (None, None),
    };

    let mut tables = vec![Table::from_columns("solution", columns)];
    if let Some((x, r)) = reference {
        tables.push(Table::from_columns("reference", vec![("x".into(), x), ("u".into(), r)]));
    }
    let details = Details::Solve1d(Solve1dDetails {
        n: mesh.n(),
        h: mesh.h(),
        residuals,
        closeness,
        form12_gap,
        prop3,
        reference_points: s.reference_points,
    });
    Ok(finish(Experiment::Solve1d, answers, checks, details, tables))
}

fn prop3_report(
    base: &Bvp1dSolution,
    v: &Field1D,
    bc: &BoundaryData1D,
) -> Option<monoscheme_core::metrics::Prop3Report> {
    let u = base.full();
    let v = v.with_boundary(bc);
    let m_full = |w: &[f64]| {
        let n = w.len();
        let inner = Field1D::from_values(*base.mesh(), w[1..n - 1].to_vec()).expect("same mesh");
        let ends = BoundaryData1D::new(w[0], w[n - 1]);
        apply_m_1d(&inner, &ends).with_boundary(&ends)
    };
    check_prop3(&u, &v, m_full, max_step_change, 2.0, 1.0).ok()
}

fn finish(
    experiment: Experiment,
    answers: Vec<AnswerMetrics>,
    checks: Vec<Check>,
    details: Details,
    tables: Vec<Table>,
) -> Output {
    Output { summary: Summary { experiment, answers, checks, details, tables: Vec::new() }, tables }
}

struct FieldStats {
    interior: [usize; 3],
    central: [usize; 3],
    f: f64,
    a: Option<f64>,
    b: Option<f64>,
}

fn field_stats(v: &[Field3D; 3], interior: &Region3D, central: &Region3D) -> FieldStats {
    let mut s = FieldStats { interior: [0; 3], central: [0; 3], f: 0.0, a: None, b: None };
    for (c, comp) in v.iter().enumerate() {
        let report = MonotonicityReport::for_field(comp, interior);
        s.interior[c] = report.extremum_count;
        s.f = s.f.max(report.f_value);
        let ext = find_extrema_3d(comp, central);
        s.central[c] = ext.len();
        if let Ok(sh) = sharpness_metrics(comp, &ext) {
            s.a = Some(s.a.map_or(sh.a, |a| a.max(sh.a)));
            s.b = Some(s.b.map_or(sh.b, |b| b.max(sh.b)));
        }
    }
    s
}

fn solve3d(s: &Solve3dSection, ov: &Overrides) -> CliResult<Output> {
    let cfg = s.flow_config(ov.tol)?;
    let variants = s.variant.variants();
    // The variants are independent; run them side by side.
    let reports: Vec<SolutionReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = variants.iter().map(|&v| scope.spawn(move || solve_steady(&cfg, v))).collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect::<Result<Vec<_>, _>>()
    })
    .map_err(CliError::solver)?;

    let mesh = cfg.mesh().map_err(CliError::validation)?;
    let interior = Region3D::interior(&mesh);
    let central = Region3D::cube(cfg.hole_lo, cfg.hole_hi);
    let mut answers = Vec::new();
    let mut runs = Vec::new();
    let mut checks = Vec::new();
    let mut columns = vec![("x".to_owned(), (0..mesh.n()).map(|i| mesh.center(i)).collect::<Vec<_>>())];
    let mut tables = Vec::new();
    let mut per_answer = BTreeMap::new();
    for rep in &reports {
        let mut interior_extrema = BTreeMap::new();
        let mut central_extrema = BTreeMap::new();
        let mut fields: Vec<(&str, &[Field3D; 3])> = Vec::new();
        match rep.variant {
            Variant::Base => fields.push(("u", &rep.field.v)),
            Variant::Monotonized => {
                fields.push(("v", &rep.field.v));
                fields.push(("y", rep.y.as_ref().expect("monotonized carries y")));
            }
        }
        for (label, f) in &fields {
            let st = field_stats(f, &interior, &central);
            interior_extrema.insert(label.to_string(), st.interior);
            central_extrema.insert(label.to_string(), st.central);
            columns.push((format!("{label}_vx"), centerline_profile(f, &cfg, Axis::X).into_iter().map(|p| p.1).collect()));
            if *label != "v" {
                answers.push(AnswerMetrics {
                    label: label.to_string(),
                    f: st.f,
                    extremum_count: st.interior.iter().sum(),
                    oscillates: None,
                    sharpness_a: st.a,
                    sharpness_b: st.b,
                    dist_ref: None,
                });
                per_answer.insert(label.to_string(), (st.interior.iter().sum::<usize>(), st.a));
            }
        }
        checks.push(Check {
            name: format!("converged-{}", variant_name(rep.variant)),
            passed: rep.converged,
            value: Some(rep.residuals.update.max(rep.residuals.divergence)),
            limit: cfg.tol,
        });
        runs.push(FlowRun {
            variant: rep.variant,
            iterations: rep.iterations,
            converged: rep.converged,
            residuals: rep.residuals,
            interior_extrema,
            central_extrema,
            pressure_extrema: count_extrema_3d(&rep.field.p, &interior),
        });
        if s.snapshot {
            let label = match rep.variant {
                Variant::Base => "snapshot_u",
                Variant::Monotonized => "snapshot_v",
            };
            tables.push(Table::snapshot(label, &snapshot(&rep.field)));
        }
    }
    if let (Some(&(nu, au)), Some(&(ny, ay))) = (per_answer.get("u"), per_answer.get("y")) {
        let ratio = (nu > 0).then(|| ny as f64 / nu as f64);
        checks.push(Check::at_most("extremum-ratio", ratio, RATIO_LIMIT));
        let sharp = match (au, ay) {
            (Some(a), Some(b)) => Some(b / a),
            (Some(_), None) => Some(0.0),
            _ => None,
        };
        checks.push(Check::at_most("central-sharpness-ratio", sharp, RATIO_LIMIT));
    }
    tables.insert(0, Table::from_columns("centerline", columns));
    let details = Details::Solve3d(Solve3dDetails {
        n: cfg.n,
        h: mesh.h(),
        hole: [cfg.hole_lo, cfg.hole_hi],
        sigma_v: cfg.sigma_v,
        sigma_p: cfg.sigma_p,
        tol: cfg.tol,
        runs,
    });
    Ok(finish(Experiment::Solve3d, answers, checks, details, tables))
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Base => "base",
        Variant::Monotonized => "monotonized",
    }
}

/// Naive scan: `(count, a, b)` over interior strict extrema.
fn brute_extrema(u: &Field3D) -> (usize, f64, f64) {
    let n = u.mesh().n();
    let (mut count, mut a, mut b) = (0, 0.0f64, 0.0f64);
    for k in 1..n.saturating_sub(1) {
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let c = u.at(i, j, k);
                let nb = [
                    u.at(i + 1, j, k),
                    u.at(i - 1, j, k),
                    u.at(i, j + 1, k),
                    u.at(i, j - 1, k),
                    u.at(i, j, k + 1),
                    u.at(i, j, k - 1),
                ];
                if nb.iter().all(|&x| c > x) || nb.iter().all(|&x| c < x) {
                    count += 1;
                    let jumps = nb.map(|x| (c - x).abs());
                    a = a.max(jumps.iter().cloned().fold(0.0, f64::max));
                    b = b.max(jumps.iter().cloned().fold(f64::INFINITY, f64::min));
                }
            }
        }
    }
    (count, a, b)
}

fn metrics(m: &MetricsSection, ov: &Overrides) -> CliResult<Output> {
    let seed = ov.seed.unwrap_or(m.seed);
    let mut answers = Vec::new();
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    if !m.sequence.is_empty() {
        answers.push(AnswerMetrics::from_report("sequence", &MonotonicityReport::for_sequence(&m.sequence), None));
    }
    let mut mismatches = 0;
    if m.random_fields > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols = ["field", "n", "extrema", "a", "b", "f"];
        let mut rows = Vec::with_capacity(m.random_fields);
        for idx in 0..m.random_fields {
            let n = rng.gen_range(2..=m.max_n);
            let mesh = Mesh3D::new(1.0, n).map_err(CliError::validation)?;
            let coarse = rng.gen_bool(0.5);
            let vals = (0..mesh.cell_count())
                .map(|_| if coarse { f64::from(rng.gen_range(0..3)) } else { rng.gen_range(-1.0..1.0) })
                .collect();
            let u = Field3D::from_values(mesh, vals).map_err(CliError::solver)?;
            let region = Region3D::interior(&mesh);
            let report = MonotonicityReport::for_field(&u, &region);
            let (count, a, b) = brute_extrema(&u);
            let same = count == report.extremum_count
                && (count == 0 || (report.sharpness_a == Some(a) && report.sharpness_b == Some(b)));
            mismatches += usize::from(!same);
            rows.push(vec![
                idx as f64,
                n as f64,
                report.extremum_count as f64,
                report.sharpness_a.unwrap_or(f64::NAN),
                report.sharpness_b.unwrap_or(f64::NAN),
                report.f_value,
            ]);
        }
        checks.push(Check::at_most("brute-force-mismatches", Some(mismatches as f64), 0.0));
        tables.push(Table::new("fields", &cols, rows));
    }
    let details = Details::Metrics(MetricsDetails { seed, random_fields: m.random_fields, oracle_mismatches: mismatches });
    Ok(finish(Experiment::Metrics, answers, checks, details, tables))
}

fn order(o: &OrderSection) -> CliResult<Output> {
    let c = o.coefficients()?;
    let bc = BoundaryData1D::new(o.boundary[0], o.boundary[1]);
    let mut studies = Vec::new();
    let mut checks = Vec::new();
    for &kind in &o.schemes {
        let s = convergence_order(&c, &bc, o.interval[0], o.interval[1], kind, &o.n).map_err(CliError::solver)?;
        let in_range = s.status == OrderStatus::Converging
            && s.order.is_some_and(|p| (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&p));
        checks.push(Check {
            name: format!("order-{}", scheme_name(kind)),
            passed: in_range,
            value: s.order,
            limit: ORDER_RANGE.0,
        });
        studies.push(s);
    }
    let mut columns = vec![
        ("n".to_owned(), o.n.iter().map(|&n| n as f64).collect::<Vec<_>>()),
        ("h".to_owned(), studies[0].h.clone()),
    ];
    for s in &studies {
        columns.push((format!("error_{}", scheme_name(s.scheme)), s.errors.clone()));
    }
    let tables = vec![Table::from_columns("order", columns)];
    Ok(finish(Experiment::Order, Vec::new(), checks, Details::Order(OrderDetails { studies }), tables))
}

fn scheme_name(k: SchemeKind) -> &'static str {
    match k {
        SchemeKind::Base => "base",
        SchemeKind::Monotonized => "monotonized",
        SchemeKind::Form12 => "form12",
    }
}

fn scan(s: &ScanSection) -> CliResult<Output> {
    let c = s.coefficients()?;
    let [a, b] = s.interval;
    let hs: Vec<f64> = (s.cells[0]..=s.cells[1]).map(|m| (b - a) / m as f64).collect();
    let entries = determinant_scan(&c, a, b, &hs).map_err(CliError::solver)?;
    let cols = ["h", "n", "base_indicator", "mono_indicator", "base_det_sign", "mono_det_sign", "flagged"];
    let rows = entries
        .iter()
        .map(|e| {
            vec![
                e.h,
                e.n as f64,
                e.base_indicator,
                e.mono_indicator,
                f64::from(e.base_det_sign),
                f64::from(e.mono_det_sign),
                f64::from(u8::from(e.flagged)),
            ]
        })
        .collect();
    let flagged_h = entries.iter().filter(|e| e.flagged).map(|e| e.h).collect();
    let tables = vec![Table::new("scan", &cols, rows)];
    Ok(finish(Experiment::ScanDet, Vec::new(), Vec::new(), Details::ScanDet(ScanDetails { entries, flagged_h }), tables))
}

fn timestep(t: &TimestepSection, ov: &Overrides) -> CliResult<Output> {
    let f = t.coefficients()?;
    let cfg = t.step_config()?;
    let mesh = Mesh1D::with_total_points(t.interval[0], t.interval[1], t.points).map_err(CliError::validation)?;
    let bc = BoundaryData1D::new(t.boundary[0], t.boundary[1]);
    let steady_tol = ov.tol.unwrap_or(t.steady_tol);
    let start = Field1D::constant(mesh, t.initial);
    let run = run_to_steady(&start, &bc, &f, &cfg, t.form, steady_tol, t.max_steps, t.snapshot_every)
        .map_err(CliError::solver)?;

    // The stationary problem F = 0 has the same coefficients.
    let stationary = match t.form {
        StepForm::Base => solve_base(&f, &mesh, &bc),
        StepForm::Monotonized | StepForm::MonotonizedAlt => solve_monotonized(&f, &mesh, &bc),
    }
    .map_err(CliError::solver)?;
    let answer = run.y.as_ref().unwrap_or(&run.state);
    let steady_gap = answer.dist_c(&stationary.solution);
    let residual = (t.form != StepForm::Base).then(|| stationary_residual(&f, &run.state, &bc));
    let full = answer.with_boundary(&bc);
    let label = if t.form == StepForm::Base { "u" } else { "y" };
    let answers = vec![AnswerMetrics::from_report(
        label,
        &MonotonicityReport::for_sequence(&full),
        Some(monoscheme_core::dist_c(&full, &stationary.full())),
    )];
    let checks = vec![
        Check { name: "converged".into(), passed: run.converged, value: run.trajectory.last().map(|r| r.update_rate), limit: steady_tol },
        Check::at_most("steady-state-gap", Some(steady_gap), 10.0 * steady_tol),
    ];

    let mut tables = vec![Table::new(
        "trajectory",
        &["step", "t", "update_rate"],
        run.trajectory.iter().map(|r| vec![r.step as f64, r.t, r.update_rate]).collect(),
    )];
    let xs = nodes(&mesh);
    let mut columns = vec![("x".to_owned(), xs.clone()), ("state".to_owned(), run.state.with_boundary(&bc))];
    if let Some(y) = &run.y {
        columns.push(("y".to_owned(), y.with_boundary(&bc)));
    }
    columns.push(("stationary".to_owned(), stationary.full()));
    tables.push(Table::from_columns("final", columns));
    if t.snapshot_every > 0 {
        let mut rows = Vec::new();
        for r in &run.trajectory {
            if let Some(s) = &r.snapshot {
                let full: Vec<f64> = std::iter::once(bc.u0).chain(s.iter().copied()).chain([bc.u_np1]).collect();
                rows.extend(xs.iter().zip(full).map(|(&x, v)| vec![r.step as f64, r.t, x, v]));
            }
        }
        tables.push(Table::new("snapshots", &["step", "t", "x", "value"], rows));
    }
    let last_rate = run.trajectory.last().map_or(f64::NAN, |r| r.update_rate);
    let details = Details::Timestep(TimestepDetails {
        steps: run.steps,
        converged: run.converged,
        final_rate: last_rate,
        steady_gap,
        stationary_residual: residual,
    });
    Ok(finish(Experiment::Timestep, answers, checks, details, tables))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_hits_nodes() {
        let ys = [0.0, 1.0, 4.0];
        assert_eq!(interpolate(0.0, 1.0, &ys, 0.5), 1.0);
        assert_eq!(interpolate(0.0, 1.0, &ys, 0.75), 2.5);
        assert_eq!(interpolate(0.0, 1.0, &ys, 1.0), 4.0);
    }
}
