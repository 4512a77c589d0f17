//! Parameter sweeps of the local entanglement and feature detection on the
//! resulting curves.
//!
//! Points are independent ground-state solves with seeded start vectors, so a
//! sweep is reproducible bit for bit whatever order the points finish in.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{SolverConfig, DEGENERACY_TOL};
use crate::error::{HubbardError, Result};
use crate::hamiltonian::ModelParams;
use crate::observables::{entanglement_with, ground_energy, sector_for, EntanglementPoint, LocalRdm};

/// Default multiple of the median second difference that marks a cusp.
pub const DEFAULT_CUSP_THRESHOLD: f64 = 10.0;

/// Second differences below this are never reported as cusps.
const CUSP_FLOOR: f64 = 1e-9;

pub const SECTOR_POLICY: &str = "even N: N_up = N_down = N/2; odd N: N_up = (N+1)/2, N_down = (N-1)/2";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub solver: SolverConfig,
    pub cusp_threshold: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            cusp_threshold: DEFAULT_CUSP_THRESHOLD,
        }
    }
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

/// One evaluated point of a sweep. `ev` is NaN when the solve failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub ev: f64,
    pub rdm: Option<LocalRdm>,
    pub n_up: usize,
    pub n_down: usize,
    pub energy: f64,
    pub degeneracy: usize,
    pub max_residual: f64,
    pub error: Option<String>,
}

impl PointRecord {
    fn from_result(res: Result<EntanglementPoint>, n_up: usize, n_down: usize) -> Self {
        match res {
            Ok(p) => Self {
                ev: p.ev,
                rdm: Some(p.rdm),
                n_up,
                n_down,
                energy: p.ground.ground_energy(),
                degeneracy: p.ground.degeneracy,
                max_residual: p.ground.residuals.iter().copied().fold(0.0, f64::max),
                error: None,
            },
            Err(e) => Self {
                ev: f64::NAN,
                rdm: None,
                n_up,
                n_down,
                energy: f64::NAN,
                degeneracy: 0,
                max_residual: f64::NAN,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn degenerate(&self) -> bool {
        self.degeneracy > 1
    }
}

fn evaluate(params: &ModelParams, n_up: usize, n_down: usize, solver: SolverConfig) -> PointRecord {
    PointRecord::from_result(entanglement_with(params, n_up, n_down, solver), n_up, n_down)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    /// Parameters at the first point; the swept field varies along the axis.
    pub params: ModelParams,
    pub sector_policy: String,
    pub cusp_threshold: f64,
}

/// Entanglement along one swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementCurve {
    pub axis_name: String,
    pub axis_values: Vec<f64>,
    pub ev_values: Vec<f64>,
    pub points: Vec<PointRecord>,
    pub metadata: CurveMetadata,
}

impl EntanglementCurve {
    pub fn len(&self) -> usize {
        self.axis_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis_values.is_empty()
    }

    pub fn degenerate_flags(&self) -> Vec<bool> {
        self.points.iter().map(PointRecord::degenerate).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = (f64, &str)> {
        self.axis_values
            .iter()
            .zip(&self.points)
            .filter_map(|(x, p)| p.error.as_deref().map(|e| (*x, e)))
    }

    /// Axis value of the largest finite entanglement. Values within
    /// [`ARGMAX_TIE_TOL`] of the maximum count as ties and the first one wins,
    /// so mirror-symmetric filling curves report the `n <= 1` branch.
    pub fn argmax(&self) -> Option<(f64, f64)> {
        let best = self
            .ev_values
            .iter()
            .copied()
            .filter(|e| e.is_finite())
            .max_by(f64::total_cmp)?;
        self.axis_values
            .iter()
            .zip(&self.ev_values)
            .find(|(_, e)| e.is_finite() && best - **e <= ARGMAX_TIE_TOL)
            .map(|(x, e)| (*x, *e))
    }
}

/// Tolerance below which two curve values are treated as equal by
/// [`EntanglementCurve::argmax`].
pub const ARGMAX_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementGrid {
    pub sites: usize,
    pub u_values: Vec<f64>,
    pub v_values: Vec<f64>,
    pub ev_matrix: Vec<Vec<f64>>,
    pub points: Vec<Vec<PointRecord>>,
}

impl EntanglementGrid {
    pub fn degenerate_flags(&self) -> Vec<Vec<bool>> {
        self.points
            .iter()
            .map(|row| row.iter().map(PointRecord::degenerate).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    Maximum,
    Minimum,
    /// Second-difference outlier at a change of slope sign.
    Cusp,
    /// Second-difference outlier without a change of slope sign.
    SlopeJump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Feature {
    pub location: f64,
    pub index: usize,
    pub kind: FeatureKind,
    /// Magnitude of the second divided difference at `location`.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FeatureReport {
    pub features: Vec<Feature>,
    pub warning: Option<String>,
}

impl FeatureReport {
    /// Sharpest cusp or slope jump, or failing those the sharpest extremum.
    pub fn dominant(&self) -> Option<&Feature> {
        let sharpest = |kinds: &[FeatureKind]| {
            self.features
                .iter()
                .filter(|f| kinds.contains(&f.kind))
                .max_by(|a, b| a.magnitude.total_cmp(&b.magnitude))
        };
        sharpest(&[FeatureKind::Cusp, FeatureKind::SlopeJump])
            .or_else(|| sharpest(&[FeatureKind::Maximum, FeatureKind::Minimum]))
    }

    pub fn of_kind(&self, kind: FeatureKind) -> impl Iterator<Item = &Feature> {
        self.features.iter().filter(move |f| f.kind == kind)
    }
}

/// Interior extrema by three-point comparison and cusps where the second
/// divided difference exceeds `threshold` times the median over the curve.
/// Failed (non-finite) points are skipped.
pub fn detect_features(curve: &EntanglementCurve, threshold: f64) -> FeatureReport {
    let pts: Vec<(usize, f64, f64)> = curve
        .axis_values
        .iter()
        .zip(&curve.ev_values)
        .enumerate()
        .filter(|(_, (_, e))| e.is_finite())
        .map(|(i, (x, e))| (i, *x, *e))
        .collect();
    detect_in_samples(&pts, threshold)
}

/// Feature detection on raw `(x, y)` samples with ascending `x`.
pub fn detect_features_xy(xs: &[f64], ys: &[f64], threshold: f64) -> FeatureReport {
    let pts: Vec<(usize, f64, f64)> = xs.iter().zip(ys).enumerate().map(|(i, (x, y))| (i, *x, *y)).collect();
    detect_in_samples(&pts, threshold)
}

fn detect_in_samples(pts: &[(usize, f64, f64)], threshold: f64) -> FeatureReport {
    if pts.len() < 5 {
        return FeatureReport {
            features: Vec::new(),
            warning: Some(format!("feature detection needs at least 5 points, got {}", pts.len())),
        };
    }
    let slope = |a: (usize, f64, f64), b: (usize, f64, f64)| (b.2 - a.2) / (b.1 - a.1);
    let second: Vec<f64> = pts
        .windows(3)
        .map(|w| 2.0 * (slope(w[1], w[2]) - slope(w[0], w[1])) / (w[2].1 - w[0].1))
        .collect();
    let mut mags: Vec<f64> = second.iter().map(|d| d.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let median = if mags.len() % 2 == 1 {
        mags[mags.len() / 2]
    } else {
        0.5 * (mags[mags.len() / 2 - 1] + mags[mags.len() / 2])
    };
    let cut = (threshold * median).max(CUSP_FLOOR);

    let mut features = Vec::new();
    for (k, w) in pts.windows(3).enumerate() {
        let (i, x, y) = w[1];
        let magnitude = second[k].abs();
        let left = y - w[0].2;
        let right = w[2].2 - y;
        let turn = left * right < 0.0;
        if left > 0.0 && right < 0.0 {
            features.push(Feature {
                location: x,
                index: i,
                kind: FeatureKind::Maximum,
                magnitude,
            });
        } else if left < 0.0 && right > 0.0 {
            features.push(Feature {
                location: x,
                index: i,
                kind: FeatureKind::Minimum,
                magnitude,
            });
        }
        if magnitude > cut {
            let kind = if turn {
                FeatureKind::Cusp
            } else {
                FeatureKind::SlopeJump
            };
            features.push(Feature {
                location: x,
                index: i,
                kind,
                magnitude,
            });
        }
    }
    FeatureReport {
        features,
        warning: None,
    }
}

/// Half-filling entanglement over the Cartesian product of `u_values × v_values`.
pub fn scan_uv(sites: usize, u_values: &[f64], v_values: &[f64], options: &ScanOptions) -> Result<EntanglementGrid> {
    if !sites.is_multiple_of(2) {
        return Err(HubbardError::InvalidParams(format!(
            "half-filling scans need an even lattice, got {sites}"
        )));
    }
    if u_values.is_empty() || v_values.is_empty() {
        return Err(HubbardError::InvalidParams("scan axes must be non-empty".into()));
    }
    ModelParams::new(sites, 0.0, 0.0).validate()?;
    let half = sites / 2;
    let nv = v_values.len();
    let flat: Vec<PointRecord> = (0..u_values.len() * nv)
        .into_par_iter()
        .map(|k| {
            let p = ModelParams::new(sites, u_values[k / nv], v_values[k % nv]);
            evaluate(&p, half, half, options.solver)
        })
        .collect();
    let points: Vec<Vec<PointRecord>> = flat.chunks(nv).map(<[PointRecord]>::to_vec).collect();
    let ev_matrix = points.iter().map(|row| row.iter().map(|p| p.ev).collect()).collect();
    Ok(EntanglementGrid {
        sites,
        u_values: u_values.to_vec(),
        v_values: v_values.to_vec(),
        ev_matrix,
        points,
    })
}

/// Half-filling entanglement versus `V` at fixed `U`.
pub fn scan_v(
    sites: usize,
    u: f64,
    v_values: &[f64],
    options: &ScanOptions,
) -> Result<(EntanglementCurve, FeatureReport)> {
    let grid = scan_uv(sites, &[u], v_values, options)?;
    let points = grid.points.into_iter().next().unwrap_or_default();
    let curve = EntanglementCurve {
        axis_name: "V".into(),
        axis_values: v_values.to_vec(),
        ev_values: points.iter().map(|p| p.ev).collect(),
        points,
        metadata: CurveMetadata {
            params: ModelParams::new(sites, u, v_values[0]),
            sector_policy: SECTOR_POLICY.into(),
            cusp_threshold: options.cusp_threshold,
        },
    };
    let report = detect_features(&curve, options.cusp_threshold);
    Ok((curve, report))
}

/// Entanglement versus filling `n = N/L` for `N = 1 ..= 2L - 1`.
pub fn scan_filling(sites: usize, u: f64, v: f64, options: &ScanOptions) -> Result<(EntanglementCurve, FeatureReport)> {
    let params = ModelParams::new(sites, u, v);
    params.validate()?;
    let counts: Vec<usize> = (1..2 * sites).collect();
    let points: Vec<PointRecord> = counts
        .par_iter()
        .map(|&n| {
            let (nu, nd) = sector_for(n);
            evaluate(&params, nu, nd, options.solver)
        })
        .collect();
    let curve = EntanglementCurve {
        axis_name: "n".into(),
        axis_values: counts.iter().map(|&n| n as f64 / sites as f64).collect(),
        ev_values: points.iter().map(|p| p.ev).collect(),
        points,
        metadata: CurveMetadata {
            params,
            sector_policy: SECTOR_POLICY.into(),
            cusp_threshold: options.cusp_threshold,
        },
    };
    let report = detect_features(&curve, options.cusp_threshold);
    Ok((curve, report))
}

/// One-sided slopes of `E_v(n)` at half filling and the charge-gap form of the
/// left derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeJump {
    pub u: f64,
    pub sites: usize,
    /// `(E_v(1) - E_v(1 - 2/L)) / (2/L)`
    pub slope_minus: f64,
    /// `(E_v(1 + 2/L) - E_v(1)) / (2/L)`
    pub slope_plus: f64,
    /// Second-order one-sided difference `(3 E_v(1) - 4 E_v(1-h) + E_v(1-2h)) / 2h`
    /// with `h = 2/L`. Removes the curvature bias of `slope_minus`.
    pub slope_minus_second_order: f64,
    /// Mirror of `slope_minus_second_order` on the `n > 1` side.
    pub slope_plus_second_order: f64,
    /// `-(log2 u⁺ - log2 z) [1/2 + 2 dΔE/dU]` at `n = 1`.
    pub eq6_rhs: f64,
    pub ev_below: f64,
    pub ev_half: f64,
    pub ev_above: f64,
    pub rdm_half: LocalRdm,
    pub gap: f64,
    pub d_gap_du: f64,
    /// `U = 0`, where no discontinuity is expected.
    pub free_point: bool,
}

impl SlopeJump {
    pub fn jump(&self) -> f64 {
        self.slope_plus - self.slope_minus
    }

    pub fn jump_second_order(&self) -> f64 {
        self.slope_plus_second_order - self.slope_minus_second_order
    }
}

/// Step used for the centered `dΔE/dU` difference.
pub const GAP_DERIVATIVE_STEP: f64 = 0.1;

pub fn slope_jump_at_half_filling(sites: usize, u: f64, options: &ScanOptions) -> Result<SlopeJump> {
    if !sites.is_multiple_of(2) || sites < 4 {
        return Err(HubbardError::InvalidParams(format!(
            "slope analysis needs an even lattice of at least 4 sites, got {sites}"
        )));
    }
    let params = ModelParams::new(sites, u, 0.0);
    params.validate()?;
    let step = 2.0 / sites as f64;
    let at = |n: usize| -> Result<EntanglementPoint> {
        let (nu, nd) = sector_for(n);
        entanglement_with(&params, nu, nd, options.solver)
    };
    let far_below = at(sites - 4)?;
    let below = at(sites - 2)?;
    let half = at(sites)?;
    let above = at(sites + 2)?;
    let far_above = at(sites + 4)?;

    let gap_at = |uu: f64| -> Result<f64> {
        let p = params.with_u(uu);
        let e = |n: usize| ground_energy(&p, n, options.solver);
        Ok(e(sites + 1)? + e(sites - 1)? - 2.0 * e(sites)?)
    };
    let h = GAP_DERIVATIVE_STEP;
    let d_gap_du = (gap_at(u + h)? - gap_at(u - h)?) / (2.0 * h);
    let gap = gap_at(u)?;
    let rdm = half.rdm;
    let eq6_rhs = -(rdm.u_plus.log2() - rdm.z.log2()) * (0.5 + 2.0 * d_gap_du);
    Ok(SlopeJump {
        u,
        sites,
        slope_minus: (half.ev - below.ev) / step,
        slope_plus: (above.ev - half.ev) / step,
        slope_minus_second_order: (3.0 * half.ev - 4.0 * below.ev + far_below.ev) / (2.0 * step),
        slope_plus_second_order: -(3.0 * half.ev - 4.0 * above.ev + far_above.ev) / (2.0 * step),
        eq6_rhs,
        ev_below: below.ev,
        ev_half: half.ev,
        ev_above: above.ev,
        rdm_half: rdm,
        gap,
        d_gap_du,
        free_point: u == 0.0,
    })
}

/// Particle number selected by a chemical potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuSelection {
    pub mu: f64,
    pub particles: usize,
    /// `E0(N*) - μ N*`
    pub grand_energy: f64,
    /// `E0(N)` at `μ = 0` for `N = 0 ..= 2L`.
    pub sector_energies: Vec<f64>,
    /// Other particle numbers within the degeneracy tolerance of the minimum.
    pub tied_with: Vec<usize>,
}

/// Sector energies `E0(N)` at `μ = 0` for every `N = 0 ..= 2L`.
pub fn sector_energies(params: &ModelParams, solver: SolverConfig) -> Result<Vec<f64>> {
    let params = params.with_mu(0.0);
    params.validate()?;
    (0..=2 * params.sites)
        .into_par_iter()
        .map(|n| ground_energy(&params, n, solver))
        .collect()
}

/// Minimize `E0(N) - μN` over every particle number on a periodic chain.
pub fn select_sector_by_mu(sites: usize, u: f64, v: f64, mu: f64, options: &ScanOptions) -> Result<MuSelection> {
    select_sector(&ModelParams::new(sites, u, v).with_mu(mu), options)
}

/// Minimize `E0(N) - μN` with `μ = params.mu`.
pub fn select_sector(params: &ModelParams, options: &ScanOptions) -> Result<MuSelection> {
    let energies = sector_energies(params, options.solver)?;
    Ok(select_from_energies(&energies, params.mu))
}

pub fn select_from_energies(energies: &[f64], mu: f64) -> MuSelection {
    let grand: Vec<f64> = energies.iter().enumerate().map(|(n, e)| e - mu * n as f64).collect();
    let (best, &min) = grand
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least one sector");
    let tied_with = grand
        .iter()
        .enumerate()
        .filter(|&(n, g)| n != best && (g - min).abs() <= DEGENERACY_TOL * min.abs().max(1.0))
        .map(|(n, _)| n)
        .collect();
    MuSelection {
        mu,
        particles: best,
        grand_energy: min,
        sector_energies: energies.to_vec(),
        tied_with,
    }
}
