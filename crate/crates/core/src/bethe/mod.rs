//! Thermodynamic-limit oracle for the half-filled Hubbard chain (`V = 0`).
//!
//! The ground-state energy per site of the Lieb–Wu solution is
//!
//! ```text
//! e(U) = -4 ∫_0^∞ dω J0(ω) J1(ω) / [ω (1 + exp(ωU/2))],   U >= 0
//! ```
//!
//! and the double occupancy is `w = de/dU`. Differentiating under the integral
//! and integrating once by parts with `J0 J1 = -(J0²)'/2` gives
//!
//! ```text
//! w(U) = 1/4 + 1/4 ∫_0^∞ dω J0(ω)² s'(ω),   s(ω) = sech²(ωU/4)
//! ```
//!
//! whose integrand decays exponentially for every `U > 0` and vanishes at
//! `U = 0`. Both integrals are cut at `omega_max`; the remainder is replaced by
//! its leading asymptotic form using `J0² ~ (1 + sin 2ω)/(πω)` and
//! `J0 J1 ~ 1/(2πω²) - cos 2ω/(πω)`, leaving an `O(omega_max^-3)` error.
//!
//! Negative `U` follows from the particle-hole transformation of one spin
//! species: `e(-U) = e(U) - U/2` and `w(-U) = 1/2 - w(U)`.

pub mod bessel;
pub mod quadrature;

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::observables::half_filling_entropy;
use bessel::j0_j1;
use quadrature::integrate;

pub const ZETA3: f64 = 1.202_056_903_159_594_3;
pub const ZETA5: f64 = 1.036_927_755_143_37;

/// Integration controls for the Lieb–Wu integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    /// Upper cut of the oscillatory integral; beyond it the asymptotic tail is used.
    pub omega_max: f64,
    /// Initial panel width, matched to the `π` period of `J0 J1`.
    pub panel_width: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            omega_max: 3000.0,
            panel_width: PI / 2.0,
        }
    }
}

/// `exp(-ωU/2)` below 1e-18 past this point.
const DECAY_EXPONENT: f64 = 42.0;

fn cutoff(u: f64, q: &QuadratureSpec) -> f64 {
    if u > 0.0 {
        (2.0 * DECAY_EXPONENT / u).min(q.omega_max)
    } else {
        q.omega_max
    }
}

/// `1 / (1 + e^x)` without overflow.
fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// `d/dω sech²(ωU/4) = -(U/2) sech²(ωU/4) tanh(ωU/4)`.
fn sech2_derivative(omega: f64, u: f64) -> f64 {
    let y = 0.25 * omega * u;
    let e = (-2.0 * y.abs()).exp();
    let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    -0.5 * u * sech2 * y.tanh()
}

/// Ground-state energy per site at half filling in the thermodynamic limit.
pub fn gs_energy_per_site(u: f64, q: &QuadratureSpec) -> Result<f64> {
    if u < 0.0 {
        return Ok(gs_energy_per_site(-u, q)? + 0.5 * u);
    }
    let g = |omega: f64| fermi(0.5 * omega * u) / omega;
    let integrand = |omega: f64| {
        let (j0, j1) = j0_j1(omega);
        j0 * j1 * g(omega)
    };
    let cut = cutoff(u, q);
    let body = integrate(&integrand, 0.0, cut, q.panel_width, 0.5 * q.abs_tol)?;
    // ∫_Ω^∞ g/(2πω²) with ω = Ω/t, plus the boundary term of the cos 2ω part.
    let smooth = |t: f64| g(cut / t) / cut;
    let tail = integrate(&smooth, 0.0, 1.0, 1.0, 0.25 * q.abs_tol)?.value / (2.0 * PI)
        + g(cut) * (2.0 * cut).sin() / (2.0 * PI * cut);
    Ok(-4.0 * (body.value + tail))
}

/// Double occupancy `w = <n↑ n↓>` at half filling in the thermodynamic limit.
pub fn double_occupancy(u: f64, q: &QuadratureSpec) -> Result<f64> {
    if u < 0.0 {
        return Ok(0.5 - double_occupancy(-u, q)?);
    }
    if u == 0.0 {
        return Ok(0.25);
    }
    let integrand = |omega: f64| {
        let j0 = j0_j1(omega).0;
        j0 * j0 * sech2_derivative(omega, u)
    };
    let cut = cutoff(u, q);
    let body = integrate(&integrand, 0.0, cut, q.panel_width, 2.0 * q.abs_tol)?;
    // ∫_Ω^∞ s'(ω)/(πω) with ω = Ω/t, plus the boundary term of the sin 2ω part.
    let smooth = |t: f64| sech2_derivative(cut / t, u) / t;
    let tail = integrate(&smooth, 0.0, 1.0, 1.0, q.abs_tol)?.value / PI
        + (2.0 * cut).cos() * sech2_derivative(cut, u) / (2.0 * PI * cut);
    Ok(0.25 + 0.25 * (body.value + tail))
}

/// Local entanglement at half filling in the thermodynamic limit.
pub fn ev_half_filling(u: f64, q: &QuadratureSpec) -> Result<f64> {
    Ok(half_filling_entropy(double_occupancy(u, q)?))
}

/// Value of a truncated series with a flag for its validity window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub in_window: bool,
    pub warning: Option<String>,
}

impl SeriesValue {
    fn new(value: f64, in_window: bool, window: &str, u: f64) -> Self {
        Self {
            value,
            in_window,
            warning: (!in_window).then(|| format!("U = {u} lies outside the validity window {window}")),
        }
    }
}

const STRONG_WINDOW: &str = "U >= 8";
const WEAK_WINDOW: &str = "|U| <= 1";

/// `w = 4 ln2/U² - 27 ζ(3)/U⁴ + 375 ζ(5)/U⁶`.
pub fn series_strong_w(u: f64) -> SeriesValue {
    let u2 = u * u;
    let value = 4.0 * LN_2 / u2 - 27.0 * ZETA3 / (u2 * u2) + 375.0 * ZETA5 / (u2 * u2 * u2);
    SeriesValue::new(value, u >= 8.0, STRONG_WINDOW, u)
}

/// `w = 1/4 - 7 ζ(3) U/(8π³) - 93 ζ(5) U³/(2⁹ π⁵)`.
pub fn series_weak_w(u: f64) -> SeriesValue {
    let value = 0.25 - 7.0 * ZETA3 * u / (8.0 * PI.powi(3)) - 93.0 * ZETA5 * u.powi(3) / (512.0 * PI.powi(5));
    SeriesValue::new(value, u.abs() <= 1.0, WEAK_WINDOW, u)
}

/// `E_v = 1 + 16 ln U / U²`.
pub fn series_strong_ev(u: f64) -> SeriesValue {
    let value = 1.0 + 16.0 * u.ln() / (u * u);
    SeriesValue::new(value, u >= 8.0, STRONG_WINDOW, u)
}

/// `E_v = 2 - [7 ζ(3) U / (2π³)]² / ln 2`.
pub fn series_weak_ev(u: f64) -> SeriesValue {
    let c = 7.0 * ZETA3 * u / (2.0 * PI.powi(3));
    SeriesValue::new(2.0 - c * c / LN_2, u.abs() <= 1.0, WEAK_WINDOW, u)
}

/// Quadratic expansion of the half-filling entropy around `w = 1/4` driven by
/// the linear term of [`series_weak_w`]: `E_v = 2 - 8 δ²/ln 2` with
/// `δ = 7 ζ(3) U/(8π³)`.
pub fn series_weak_ev_from_w(u: f64) -> SeriesValue {
    let delta = 7.0 * ZETA3 * u / (8.0 * PI.powi(3));
    SeriesValue::new(2.0 - 8.0 * delta * delta / LN_2, u.abs() <= 1.0, WEAK_WINDOW, u)
}

/// Local entanglement at `U = ∞` for filling `n = N/L`: no double occupancy
/// and `u⁺ = u⁻ = n/2`, so `E_v = -(1-n) log2(1-n) - n log2(n/2)`.
/// Fillings above one are mapped through `n -> 2 - n`.
///
/// # Panics
///
/// Panics if `n` lies outside `[0, 2]`.
pub fn ev_infinite_u(n: f64) -> f64 {
    assert!((0.0..=2.0).contains(&n), "filling {n} outside [0, 2]");
    let n = if n > 1.0 { 2.0 - n } else { n };
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    h(1.0 - n) + 2.0 * h(n / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_u_curve() {
        assert_eq!(ev_infinite_u(0.0), 0.0);
        assert!((ev_infinite_u(1.0) - 1.0).abs() < 1e-15);
        assert!((ev_infinite_u(2.0 / 3.0) - 3f64.log2()).abs() < 1e-14);
        // maximum at 2/3
        let best = (0..=3000)
            .map(|i| i as f64 / 3000.0)
            .max_by(|a, b| ev_infinite_u(*a).total_cmp(&ev_infinite_u(*b)))
            .unwrap();
        assert!((best - 2.0 / 3.0).abs() < 1e-3);
        assert_eq!(ev_infinite_u(1.5), ev_infinite_u(0.5));
    }

    #[test]
    fn series_constants() {
        assert_eq!(series_weak_w(0.0).value, 0.25);
        let s = series_strong_w(16.0);
        let direct = 4.0 * LN_2 / 256.0 - 27.0 * ZETA3 / 65536.0 + 375.0 * ZETA5 / 16f64.powi(6);
        assert_eq!(s.value, direct);
        assert!((s.value - 1.0359e-2).abs() < 1e-6);
        assert!(s.in_window);
        assert!(series_strong_w(4.0).warning.is_some());
        assert!(series_weak_ev(2.0).warning.is_some());
        let c: f64 = 7.0 * ZETA3 * 0.2 / (2.0 * PI.powi(3));
        assert_eq!(series_weak_ev(0.2).value, 2.0 - c * c / LN_2);
    }

    #[test]
    fn fermi_is_stable() {
        assert_eq!(fermi(1e4), 0.0);
        assert_eq!(fermi(-1e4), 1.0);
        assert!((fermi(0.0) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn negative_coupling_mapping() {
        let q = QuadratureSpec::default();
        let w = double_occupancy(3.0, &q).unwrap();
        assert_eq!(double_occupancy(-3.0, &q).unwrap(), 0.5 - w);
        let e = gs_energy_per_site(3.0, &q).unwrap();
        assert!((gs_energy_per_site(-3.0, &q).unwrap() - (e - 1.5)).abs() < 1e-15);
        assert!((ev_half_filling(3.0, &q).unwrap() - ev_half_filling(-3.0, &q).unwrap()).abs() < 1e-12);
    }
}
