//! Execution of a resolved [`RunConfig`].

use hubent_core::bethe::{
    double_occupancy, ev_half_filling, gs_energy_per_site, series_strong_ev, series_strong_w, series_weak_ev,
    series_weak_w, QuadratureSpec, SeriesValue,
};
use hubent_core::observables::{charge_gap_with, entanglement_with, sector_for};
use hubent_core::scan::{
    scan_filling, scan_uv, scan_v, select_sector, slope_jump_at_half_filling, EntanglementCurve, FeatureReport,
    MuSelection, PointRecord, ScanOptions,
};
use hubent_core::{HubbardError, LocalRdm};
use serde::Serialize;

use crate::config::{Command, RunConfig, SeriesKind};
use crate::output::{num, Report, Table};

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    /// Bad input; reported with exit status 2.
    Usage(String),
    /// Numerical failure; reported with exit status 1.
    Numerical(String),
}

impl From<HubbardError> for Failure {
    fn from(e: HubbardError) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Numerical(format!("{e:#}"))
    }
}

type Outcome = Result<Report, Failure>;

pub fn run(config: &RunConfig) -> Outcome {
    config.validate().map_err(Failure::Usage)?;
    match config.command {
        Command::Point => point(config),
        Command::ScanUv => grid(config),
        Command::ScanV => v_sweep(config),
        Command::ScanN => filling(config),
        Command::Slope => slope(config),
        Command::Gap => gap(config),
        Command::Bethe => bethe(config),
    }
}

fn options(config: &RunConfig) -> ScanOptions {
    ScanOptions {
        solver: config.solver(),
        cusp_threshold: config.cusp_threshold,
    }
}

fn bool_text(b: bool) -> String {
    b.to_string()
}

fn rdm_cells(rdm: Option<&LocalRdm>) -> Vec<String> {
    match rdm {
        Some(r) => vec![num(r.z), num(r.u_plus), num(r.u_minus), num(r.w)],
        None => vec![num(f64::NAN); 4],
    }
}

#[derive(Serialize)]
struct PointResult {
    sites: usize,
    n_up: usize,
    n_down: usize,
    ev: f64,
    rdm: LocalRdm,
    energy: f64,
    eigenvalues: Vec<f64>,
    residuals: Vec<f64>,
    residual_bound: f64,
    degeneracy: usize,
    degenerate: bool,
    matvecs: usize,
    selection: Option<MuSelection>,
}

fn point(config: &RunConfig) -> Outcome {
    let params = config.model();
    params.validate()?;
    let mut selection = None;
    let (n_up, n_down) = if config.select_by_mu {
        let sel = select_sector(&params, &options(config))?;
        let sector = sector_for(sel.particles);
        selection = Some(sel);
        sector
    } else if let Some(n) = config.particles {
        sector_for(n)
    } else {
        match (config.n_up, config.n_down) {
            (Some(a), Some(b)) => (a, b),
            (None, None) if config.sites.is_multiple_of(2) => (config.sites / 2, config.sites / 2),
            (None, None) => {
                return Err(Failure::Usage(
                    "odd lattice: give --nup and --ndown, --N, or --select-by-mu".into(),
                ))
            }
            _ => return Err(Failure::Usage("--nup and --ndown must be given together".into())),
        }
    };
    let p = entanglement_with(&params, n_up, n_down, config.solver())?;
    let g = &p.ground;
    let result = PointResult {
        sites: config.sites,
        n_up,
        n_down,
        ev: p.ev,
        rdm: p.rdm,
        energy: g.ground_energy(),
        eigenvalues: g.eigenvalues.clone(),
        residuals: g.residuals.clone(),
        residual_bound: g.residual_bound,
        degeneracy: g.degeneracy,
        degenerate: g.degeneracy > 1,
        matvecs: g.matvecs,
        selection,
    };
    let mut table = Table::new(&[
        "L",
        "n_up",
        "n_down",
        "U",
        "V",
        "mu",
        "E_v",
        "z",
        "u_plus",
        "u_minus",
        "w",
        "energy",
        "degeneracy",
        "degenerate",
        "max_residual",
    ]);
    let mut row = vec![
        config.sites.to_string(),
        n_up.to_string(),
        n_down.to_string(),
        num(config.u),
        num(config.v),
        num(config.mu),
        num(p.ev),
    ];
    row.extend(rdm_cells(Some(&p.rdm)));
    row.extend([
        num(result.energy),
        g.degeneracy.to_string(),
        bool_text(result.degenerate),
        num(g.residuals.iter().copied().fold(0.0, f64::max)),
    ]);
    table.push(row);
    Report::new(&result, table).map_err(Into::into)
}

fn record_cells(p: &PointRecord) -> Vec<String> {
    let mut cells = vec![num(p.ev)];
    cells.extend(rdm_cells(p.rdm.as_ref()));
    cells.extend([num(p.energy), p.degeneracy.to_string(), bool_text(p.degenerate())]);
    cells
}

fn grid(config: &RunConfig) -> Outcome {
    let (us, vs) = match (config.u_sweep, config.v_sweep) {
        (Some(u), Some(v)) => (u.values(), v.values()),
        _ => {
            return Err(Failure::Usage(
                "scan-uv needs --u-range/--u-steps and --v-range/--v-steps".into(),
            ))
        }
    };
    let g = scan_uv(config.sites, &us, &vs, &options(config))?;
    let mut table = Table::new(&[
        "U",
        "V",
        "E_v",
        "z",
        "u_plus",
        "u_minus",
        "w",
        "energy",
        "degeneracy",
        "degenerate",
        "error",
    ]);
    let mut failures = Vec::new();
    let mut matrix = format!(
        "# E_v at half filling, L={}; first row: column count then V values; following rows: U then E_v\n{}",
        config.sites,
        vs.len()
    );
    for v in &vs {
        matrix.push(' ');
        matrix.push_str(&num(*v));
    }
    matrix.push('\n');
    for (i, u) in us.iter().enumerate() {
        matrix.push_str(&num(*u));
        for (j, v) in vs.iter().enumerate() {
            let p = &g.points[i][j];
            let mut row = vec![num(*u), num(*v)];
            row.extend(record_cells(p));
            row.push(p.error.clone().unwrap_or_default());
            table.push(row);
            if let Some(e) = &p.error {
                failures.push(format!("U={}, V={}: {e}", num(*u), num(*v)));
            }
            matrix.push(' ');
            matrix.push_str(&num(p.ev));
        }
        matrix.push('\n');
    }
    let mut report = Report::new(&g, table)?;
    report.matrix = Some(matrix);
    report.failures = failures;
    Ok(report)
}

#[derive(Serialize)]
struct CurveResult<'a> {
    curve: &'a EntanglementCurve,
    features: &'a FeatureReport,
}

fn feature_cells(curve: &EntanglementCurve, report: &FeatureReport) -> Vec<String> {
    let mut cells = vec![String::new(); curve.len()];
    for f in &report.features {
        let kind = serde_json::to_value(f.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        let cell = &mut cells[f.index];
        if !cell.is_empty() {
            cell.push(';');
        }
        cell.push_str(&kind);
    }
    cells
}

fn curve_failures(curve: &EntanglementCurve) -> Vec<String> {
    curve
        .failures()
        .map(|(x, e)| format!("{}={}: {e}", curve.axis_name, num(x)))
        .collect()
}

fn v_sweep(config: &RunConfig) -> Outcome {
    let vs = config
        .v_sweep
        .ok_or_else(|| Failure::Usage("scan-v needs --v-range and --v-steps".into()))?
        .values();
    let (curve, features) = scan_v(config.sites, config.u, &vs, &options(config))?;
    let marks = feature_cells(&curve, &features);
    let mut table = Table::new(&[
        "V",
        "E_v",
        "z",
        "u_plus",
        "u_minus",
        "w",
        "energy",
        "degeneracy",
        "degenerate",
        "feature",
        "error",
    ]);
    for (k, p) in curve.points.iter().enumerate() {
        let mut row = vec![num(curve.axis_values[k])];
        row.extend(record_cells(p));
        row.push(marks[k].clone());
        row.push(p.error.clone().unwrap_or_default());
        table.push(row);
    }
    let mut report = Report::new(
        &CurveResult {
            curve: &curve,
            features: &features,
        },
        table,
    )?;
    report.failures = curve_failures(&curve);
    Ok(report)
}

fn filling(config: &RunConfig) -> Outcome {
    let (curve, features) = scan_filling(config.sites, config.u, config.v, &options(config))?;
    let marks = feature_cells(&curve, &features);
    let mut table = Table::new(&[
        "N",
        "n",
        "n_up",
        "n_down",
        "E_v",
        "z",
        "u_plus",
        "u_minus",
        "w",
        "energy",
        "degeneracy",
        "degenerate",
        "feature",
        "error",
    ]);
    for (k, p) in curve.points.iter().enumerate() {
        let mut row = vec![
            (p.n_up + p.n_down).to_string(),
            num(curve.axis_values[k]),
            p.n_up.to_string(),
            p.n_down.to_string(),
        ];
        row.extend(record_cells(p));
        row.push(marks[k].clone());
        row.push(p.error.clone().unwrap_or_default());
        table.push(row);
    }
    let mut report = Report::new(
        &CurveResult {
            curve: &curve,
            features: &features,
        },
        table,
    )?;
    report.failures = curve_failures(&curve);
    Ok(report)
}

#[derive(Serialize)]
struct SlopeResult {
    #[serde(flatten)]
    slope: hubent_core::scan::SlopeJump,
    jump: f64,
    jump_second_order: f64,
}

fn slope(config: &RunConfig) -> Outcome {
    let s = slope_jump_at_half_filling(config.sites, config.u, &options(config))?;
    let mut table = Table::new(&[
        "L",
        "U",
        "slope_minus",
        "slope_plus",
        "jump",
        "slope_minus_second_order",
        "slope_plus_second_order",
        "jump_second_order",
        "eq6_rhs",
        "gap",
        "d_gap_du",
        "free_point",
    ]);
    table.push(vec![
        s.sites.to_string(),
        num(s.u),
        num(s.slope_minus),
        num(s.slope_plus),
        num(s.jump()),
        num(s.slope_minus_second_order),
        num(s.slope_plus_second_order),
        num(s.jump_second_order()),
        num(s.eq6_rhs),
        num(s.gap),
        num(s.d_gap_du),
        bool_text(s.free_point),
    ]);
    let result = SlopeResult {
        slope: s,
        jump: s.jump(),
        jump_second_order: s.jump_second_order(),
    };
    Report::new(&result, table).map_err(Into::into)
}

#[derive(Serialize)]
struct GapOutput {
    sites: usize,
    particles: usize,
    #[serde(flatten)]
    gap: hubent_core::GapResult,
}

fn gap(config: &RunConfig) -> Outcome {
    let n = config.particles.ok_or_else(|| Failure::Usage("gap needs --N".into()))?;
    let params = config.model();
    let g = charge_gap_with(&params, n, config.solver())?;
    let mut table = Table::new(&["L", "N", "U", "V", "delta_e", "e_minus", "e_zero", "e_plus"]);
    table.push(vec![
        config.sites.to_string(),
        n.to_string(),
        num(config.u),
        num(config.v),
        num(g.delta_e),
        num(g.e_minus),
        num(g.e_zero),
        num(g.e_plus),
    ]);
    Report::new(
        &GapOutput {
            sites: config.sites,
            particles: n,
            gap: g,
        },
        table,
    )
    .map_err(Into::into)
}

#[derive(Serialize)]
struct SeriesOutput {
    kind: SeriesKind,
    w_series: f64,
    w_difference: f64,
    ev_series: f64,
    ev_difference: f64,
    in_window: bool,
    warning: Option<String>,
}

#[derive(Serialize)]
struct BetheOutput {
    u: f64,
    energy_per_site: f64,
    double_occupancy: f64,
    ev: f64,
    series: Option<SeriesOutput>,
}

fn bethe(config: &RunConfig) -> Outcome {
    let q = QuadratureSpec::default();
    let u = config.u;
    let e = gs_energy_per_site(u, &q)?;
    let w = double_occupancy(u, &q)?;
    let ev = ev_half_filling(u, &q)?;
    let series = config.series.map(|kind| {
        let (sw, se): (SeriesValue, SeriesValue) = match kind {
            SeriesKind::Strong => (series_strong_w(u), series_strong_ev(u)),
            SeriesKind::Weak => (series_weak_w(u), series_weak_ev(u)),
        };
        SeriesOutput {
            kind,
            w_series: sw.value,
            w_difference: w - sw.value,
            ev_series: se.value,
            ev_difference: ev - se.value,
            in_window: sw.in_window,
            warning: sw.warning,
        }
    });
    let mut table = Table::new(&[
        "U",
        "e",
        "w",
        "E_v",
        "series",
        "w_series",
        "w_difference",
        "E_v_series",
        "E_v_difference",
        "in_window",
    ]);
    let mut row = vec![num(u), num(e), num(w), num(ev)];
    match &series {
        Some(s) => row.extend([
            match s.kind {
                SeriesKind::Strong => "strong".into(),
                SeriesKind::Weak => "weak".into(),
            },
            num(s.w_series),
            num(s.w_difference),
            num(s.ev_series),
            num(s.ev_difference),
            bool_text(s.in_window),
        ]),
        None => row.extend(std::iter::repeat_n(String::new(), 6)),
    }
    table.push(row);
    let result = BetheOutput {
        u,
        energy_per_site: e,
        double_occupancy: w,
        ev,
        series,
    };
    Report::new(&result, table).map_err(Into::into)
}
