//! Python bindings for the `hubent` core library.

use hubent_core::bethe::{self, QuadratureSpec};
use hubent_core::fock_basis::Boundary;
use hubent_core::observables::{self, sector_for};
use hubent_core::scan::{self, FeatureKind, ScanOptions};
use hubent_core::{HubbardError, SectorBasis, SolverConfig};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: HubbardError) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn solver(seed: Option<u64>, tol: Option<f64>) -> SolverConfig {
    let mut c = SolverConfig::default();
    if let Some(s) = seed {
        c.seed = s;
    }
    if let Some(t) = tol {
        c.tol = t;
    }
    c
}

fn options(seed: Option<u64>, tol: Option<f64>) -> ScanOptions {
    ScanOptions {
        solver: solver(seed, tol),
        ..ScanOptions::default()
    }
}

/// Couplings and lattice of the extended Hubbard chain. Energies are in units
/// of the hopping amplitude.
#[pyclass(name = "ModelParams", get_all, set_all, skip_from_py_object)]
#[derive(Clone)]
struct PyModelParams {
    sites: usize,
    u: f64,
    v: f64,
    mu: f64,
    boundary: String,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (sites, u, v=0.0, mu=0.0, boundary="periodic"))]
    fn new(sites: usize, u: f64, v: f64, mu: f64, boundary: &str) -> PyResult<Self> {
        let p = Self {
            sites,
            u,
            v,
            mu,
            boundary: boundary.to_owned(),
        };
        p.inner()?.validate().map_err(to_py)?;
        Ok(p)
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(sites={}, u={}, v={}, mu={}, boundary='{}')",
            self.sites, self.u, self.v, self.mu, self.boundary
        )
    }
}

impl PyModelParams {
    fn inner(&self) -> PyResult<hubent_core::ModelParams> {
        let boundary = match self.boundary.as_str() {
            "periodic" => Boundary::Periodic,
            "open" => Boundary::Open,
            other => return Err(PyValueError::new_err(format!("unknown boundary '{other}'"))),
        };
        Ok(hubent_core::ModelParams::new(self.sites, self.u, self.v)
            .with_mu(self.mu)
            .with_boundary(boundary))
    }
}

/// Diagonal of the one-site reduced density matrix.
#[pyclass(name = "LocalRdm", get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLocalRdm {
    z: f64,
    u_plus: f64,
    u_minus: f64,
    w: f64,
}

impl From<hubent_core::LocalRdm> for PyLocalRdm {
    fn from(r: hubent_core::LocalRdm) -> Self {
        Self {
            z: r.z,
            u_plus: r.u_plus,
            u_minus: r.u_minus,
            w: r.w,
        }
    }
}

#[pymethods]
impl PyLocalRdm {
    #[new]
    fn new(z: f64, u_plus: f64, u_minus: f64, w: f64) -> Self {
        Self { z, u_plus, u_minus, w }
    }

    /// `[z, u_plus, u_minus, w]`
    fn populations(&self) -> [f64; 4] {
        [self.z, self.u_plus, self.u_minus, self.w]
    }

    /// Von Neumann entropy in bits.
    fn entropy(&self) -> f64 {
        observables::von_neumann_entropy(&hubent_core::LocalRdm::new(self.z, self.u_plus, self.u_minus, self.w))
    }

    fn __repr__(&self) -> String {
        format!(
            "LocalRdm(z={}, u_plus={}, u_minus={}, w={})",
            self.z, self.u_plus, self.u_minus, self.w
        )
    }
}

/// Local entanglement of one ground state.
#[pyclass(name = "EntanglementPoint", get_all, frozen)]
struct PyPoint {
    ev: f64,
    rdm: PyLocalRdm,
    energy: f64,
    eigenvalues: Vec<f64>,
    residuals: Vec<f64>,
    degeneracy: usize,
    n_up: usize,
    n_down: usize,
}

#[pymethods]
impl PyPoint {
    fn __repr__(&self) -> String {
        format!(
            "EntanglementPoint(ev={}, energy={}, degeneracy={})",
            self.ev, self.energy, self.degeneracy
        )
    }
}

#[pyclass(name = "GapResult", get_all, frozen)]
struct PyGap {
    delta_e: f64,
    e_minus: f64,
    e_zero: f64,
    e_plus: f64,
}

#[pyclass(name = "Feature", get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFeature {
    location: f64,
    index: usize,
    /// One of `maximum`, `minimum`, `cusp`, `slope-jump`.
    kind: String,
    magnitude: f64,
}

#[pymethods]
impl PyFeature {
    fn __repr__(&self) -> String {
        format!(
            "Feature({} at {}, magnitude {})",
            self.kind, self.location, self.magnitude
        )
    }
}

fn kind_name(k: FeatureKind) -> &'static str {
    match k {
        FeatureKind::Maximum => "maximum",
        FeatureKind::Minimum => "minimum",
        FeatureKind::Cusp => "cusp",
        FeatureKind::SlopeJump => "slope-jump",
    }
}

/// Entanglement along a swept axis with detected features.
#[pyclass(name = "Curve", get_all, frozen)]
struct PyCurve {
    axis_name: String,
    axis_values: Vec<f64>,
    ev_values: Vec<f64>,
    degeneracy: Vec<usize>,
    errors: Vec<Option<String>>,
    features: Vec<PyFeature>,
    dominant: Option<PyFeature>,
    /// `(axis value, E_v)` of the largest value; near-ties keep the first point.
    argmax: Option<(f64, f64)>,
    warning: Option<String>,
}

fn feature(f: &scan::Feature) -> PyFeature {
    PyFeature {
        location: f.location,
        index: f.index,
        kind: kind_name(f.kind).into(),
        magnitude: f.magnitude,
    }
}

impl PyCurve {
    fn build(curve: scan::EntanglementCurve, report: scan::FeatureReport) -> Self {
        Self {
            degeneracy: curve.points.iter().map(|p| p.degeneracy).collect(),
            errors: curve.points.iter().map(|p| p.error.clone()).collect(),
            features: report.features.iter().map(feature).collect(),
            dominant: report.dominant().map(feature),
            argmax: curve.argmax(),
            warning: report.warning,
            axis_name: curve.axis_name,
            axis_values: curve.axis_values,
            ev_values: curve.ev_values,
        }
    }
}

#[pymethods]
impl PyCurve {
    fn __len__(&self) -> usize {
        self.axis_values.len()
    }
}

/// Half-filling entanglement on a U x V grid; `ev[i][j]` is at `(u_values[i], v_values[j])`.
#[pyclass(name = "Grid", get_all, frozen)]
struct PyGrid {
    u_values: Vec<f64>,
    v_values: Vec<f64>,
    ev: Vec<Vec<f64>>,
    degeneracy: Vec<Vec<usize>>,
}

#[pyclass(name = "SlopeJump", get_all, frozen)]
struct PySlope {
    u: f64,
    sites: usize,
    slope_minus: f64,
    slope_plus: f64,
    jump: f64,
    slope_minus_second_order: f64,
    slope_plus_second_order: f64,
    jump_second_order: f64,
    eq6_rhs: f64,
    gap: f64,
    d_gap_du: f64,
    free_point: bool,
}

#[pyclass(name = "MuSelection", get_all, frozen)]
struct PyMuSelection {
    mu: f64,
    particles: usize,
    grand_energy: f64,
    sector_energies: Vec<f64>,
    tied_with: Vec<usize>,
}

#[pyclass(name = "SeriesValue", get_all, frozen)]
struct PySeries {
    value: f64,
    in_window: bool,
    warning: Option<String>,
}

impl From<bethe::SeriesValue> for PySeries {
    fn from(s: bethe::SeriesValue) -> Self {
        Self {
            value: s.value,
            in_window: s.in_window,
            warning: s.warning,
        }
    }
}

/// Dimension of the `(n_up, n_down)` sector on `sites` sites.
#[pyfunction]
fn sector_dim(sites: usize, n_up: usize, n_down: usize) -> PyResult<usize> {
    Ok(SectorBasis::new(sites, n_up, n_down).map_err(to_py)?.dim())
}

/// `(n_up, n_down)` used for a total particle number.
#[pyfunction]
fn sector_for_particles(particles: usize) -> (usize, usize) {
    sector_for(particles)
}

/// Apply the Hamiltonian to a vector in the `(n_up, n_down)` sector.
#[pyfunction]
fn apply_hamiltonian(params: &PyModelParams, n_up: usize, n_down: usize, vector: Vec<f64>) -> PyResult<Vec<f64>> {
    let p = params.inner()?;
    let basis = SectorBasis::new(p.sites, n_up, n_down).map_err(to_py)?;
    hubent_core::apply_hamiltonian(&p, &basis, &vector).map_err(to_py)
}

/// Lowest `k` eigenvalues of a sector.
#[pyfunction]
#[pyo3(signature = (params, n_up, n_down, k=3, seed=None, tol=None))]
fn lowest_eigenvalues(
    py: Python<'_>,
    params: &PyModelParams,
    n_up: usize,
    n_down: usize,
    k: usize,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<Vec<f64>> {
    let p = params.inner()?;
    py.detach(|| {
        let basis = SectorBasis::new(p.sites, n_up, n_down)?;
        let h = hubent_core::Hamiltonian::new(p, &basis)?;
        let mv = |x: &[f64], out: &mut [f64]| h.apply_into(x, out);
        Ok(hubent_core::lowest_eigenpairs(basis.dim(), &mv, k, solver(seed, tol))?.eigenvalues)
    })
    .map_err(to_py)
}

/// Ground state of a sector and its local entanglement. Degenerate ground
/// levels are averaged with equal weights.
#[pyfunction]
#[pyo3(signature = (params, n_up, n_down, seed=None, tol=None))]
fn entanglement_at(
    py: Python<'_>,
    params: &PyModelParams,
    n_up: usize,
    n_down: usize,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<PyPoint> {
    let p = params.inner()?;
    let pt = py
        .detach(|| observables::entanglement_with(&p, n_up, n_down, solver(seed, tol)))
        .map_err(to_py)?;
    Ok(PyPoint {
        ev: pt.ev,
        rdm: pt.rdm.into(),
        energy: pt.ground.ground_energy(),
        eigenvalues: pt.ground.eigenvalues.clone(),
        residuals: pt.ground.residuals.clone(),
        degeneracy: pt.ground.degeneracy,
        n_up,
        n_down,
    })
}

#[pyfunction]
fn von_neumann_entropy(rdm: &PyLocalRdm) -> f64 {
    rdm.entropy()
}

/// `E0(N+1) + E0(N-1) - 2 E0(N)`.
#[pyfunction]
#[pyo3(signature = (params, particles, seed=None, tol=None))]
fn charge_gap(
    py: Python<'_>,
    params: &PyModelParams,
    particles: usize,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<PyGap> {
    let p = params.inner()?;
    let g = py
        .detach(|| observables::charge_gap_with(&p, particles, solver(seed, tol)))
        .map_err(to_py)?;
    Ok(PyGap {
        delta_e: g.delta_e,
        e_minus: g.e_minus,
        e_zero: g.e_zero,
        e_plus: g.e_plus,
    })
}

#[pyfunction]
#[pyo3(signature = (sites, u_values, v_values, seed=None, tol=None))]
fn scan_uv(
    py: Python<'_>,
    sites: usize,
    u_values: Vec<f64>,
    v_values: Vec<f64>,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<PyGrid> {
    let g = py
        .detach(|| scan::scan_uv(sites, &u_values, &v_values, &options(seed, tol)))
        .map_err(to_py)?;
    Ok(PyGrid {
        degeneracy: g
            .points
            .iter()
            .map(|r| r.iter().map(|p| p.degeneracy).collect())
            .collect(),
        u_values: g.u_values,
        v_values: g.v_values,
        ev: g.ev_matrix,
    })
}

#[pyfunction]
#[pyo3(signature = (sites, u, v_values, seed=None, tol=None))]
fn scan_v(
    py: Python<'_>,
    sites: usize,
    u: f64,
    v_values: Vec<f64>,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<PyCurve> {
    let (c, r) = py
        .detach(|| scan::scan_v(sites, u, &v_values, &options(seed, tol)))
        .map_err(to_py)?;
    Ok(PyCurve::build(c, r))
}

/// Entanglement for `N = 1 .. 2L-1`; the axis holds `n = N/L`.
#[pyfunction]
#[pyo3(signature = (sites, u, v=0.0, seed=None, tol=None))]
fn scan_filling(
    py: Python<'_>,
    sites: usize,
    u: f64,
    v: f64,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<PyCurve> {
    let (c, r) = py
        .detach(|| scan::scan_filling(sites, u, v, &options(seed, tol)))
        .map_err(to_py)?;
    Ok(PyCurve::build(c, r))
}

#[pyfunction]
#[pyo3(signature = (sites, u, seed=None, tol=None))]
fn slope_jump_at_half_filling(
    py: Python<'_>,
    sites: usize,
    u: f64,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<PySlope> {
    let s = py
        .detach(|| scan::slope_jump_at_half_filling(sites, u, &options(seed, tol)))
        .map_err(to_py)?;
    Ok(PySlope {
        u: s.u,
        sites: s.sites,
        slope_minus: s.slope_minus,
        slope_plus: s.slope_plus,
        jump: s.jump(),
        slope_minus_second_order: s.slope_minus_second_order,
        slope_plus_second_order: s.slope_plus_second_order,
        jump_second_order: s.jump_second_order(),
        eq6_rhs: s.eq6_rhs,
        gap: s.gap,
        d_gap_du: s.d_gap_du,
        free_point: s.free_point,
    })
}

/// Particle number minimizing `E0(N) - mu N` with `mu = params.mu`.
#[pyfunction]
#[pyo3(signature = (params, seed=None, tol=None))]
fn select_sector_by_mu(
    py: Python<'_>,
    params: &PyModelParams,
    seed: Option<u64>,
    tol: Option<f64>,
) -> PyResult<PyMuSelection> {
    let p = params.inner()?;
    let s = py
        .detach(|| scan::select_sector(&p, &options(seed, tol)))
        .map_err(to_py)?;
    Ok(PyMuSelection {
        mu: s.mu,
        particles: s.particles,
        grand_energy: s.grand_energy,
        sector_energies: s.sector_energies,
        tied_with: s.tied_with,
    })
}

/// Ground-state energy per site of the infinite half-filled chain.
#[pyfunction]
fn gs_energy_per_site(u: f64) -> PyResult<f64> {
    bethe::gs_energy_per_site(u, &QuadratureSpec::default()).map_err(to_py)
}

/// Double occupancy of the infinite half-filled chain.
#[pyfunction]
fn double_occupancy(u: f64) -> PyResult<f64> {
    bethe::double_occupancy(u, &QuadratureSpec::default()).map_err(to_py)
}

/// Local entanglement of the infinite half-filled chain.
#[pyfunction]
fn ev_half_filling(u: f64) -> PyResult<f64> {
    bethe::ev_half_filling(u, &QuadratureSpec::default()).map_err(to_py)
}

#[pyfunction]
fn series_strong_w(u: f64) -> PySeries {
    bethe::series_strong_w(u).into()
}

#[pyfunction]
fn series_weak_w(u: f64) -> PySeries {
    bethe::series_weak_w(u).into()
}

#[pyfunction]
fn series_strong_ev(u: f64) -> PySeries {
    bethe::series_strong_ev(u).into()
}

#[pyfunction]
fn series_weak_ev(u: f64) -> PySeries {
    bethe::series_weak_ev(u).into()
}

/// Local entanglement at infinite U for filling `n` in `[0, 2]`.
#[pyfunction]
fn ev_infinite_u(n: f64) -> PyResult<f64> {
    if !(0.0..=2.0).contains(&n) {
        return Err(PyValueError::new_err(format!("filling {n} outside [0, 2]")));
    }
    Ok(bethe::ev_infinite_u(n))
}

#[pymodule]
fn hubent(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyLocalRdm>()?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PyGap>()?;
    m.add_class::<PyFeature>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PySlope>()?;
    m.add_class::<PyMuSelection>()?;
    m.add_class::<PySeries>()?;
    for f in [
        wrap_pyfunction!(sector_dim, m)?,
        wrap_pyfunction!(sector_for_particles, m)?,
        wrap_pyfunction!(apply_hamiltonian, m)?,
        wrap_pyfunction!(lowest_eigenvalues, m)?,
        wrap_pyfunction!(entanglement_at, m)?,
        wrap_pyfunction!(von_neumann_entropy, m)?,
        wrap_pyfunction!(charge_gap, m)?,
        wrap_pyfunction!(scan_uv, m)?,
        wrap_pyfunction!(scan_v, m)?,
        wrap_pyfunction!(scan_filling, m)?,
        wrap_pyfunction!(slope_jump_at_half_filling, m)?,
        wrap_pyfunction!(select_sector_by_mu, m)?,
        wrap_pyfunction!(gs_energy_per_site, m)?,
        wrap_pyfunction!(double_occupancy, m)?,
        wrap_pyfunction!(ev_half_filling, m)?,
        wrap_pyfunction!(series_strong_w, m)?,
        wrap_pyfunction!(series_weak_w, m)?,
        wrap_pyfunction!(series_strong_ev, m)?,
        wrap_pyfunction!(series_weak_ev, m)?,
        wrap_pyfunction!(ev_infinite_u, m)?,
    ] {
        m.add_function(f)?;
    }
    m.add("DEFAULT_SEED", hubent_core::eigensolver::DEFAULT_SEED)?;
    Ok(())
}
