//! Single-site reduced density matrix, local entanglement and charge gaps.
//!
//! Particle number and `S^z` conservation make the one-site density matrix
//! diagonal in `{|0>, |↑>, |↓>, |↑↓>}`, so it is fully described by four
//! populations `(z, u⁺, u⁻, w)`.

use serde::{Deserialize, Serialize};

use crate::eigensolver::{ground_multiplet, lowest_eigenpairs, GroundStateResult, SolverConfig};
use crate::error::{HubbardError, Result};
use crate::fock_basis::SectorBasis;
use crate::hamiltonian::{Hamiltonian, ModelParams};

/// Negative populations down to this size are treated as roundoff.
const CLAMP_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-8;

/// Diagonal of the one-site reduced density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalRdm {
    /// empty
    pub z: f64,
    /// spin up only
    pub u_plus: f64,
    /// spin down only
    pub u_minus: f64,
    /// doubly occupied
    pub w: f64,
}

impl LocalRdm {
    pub fn new(z: f64, u_plus: f64, u_minus: f64, w: f64) -> Self {
        Self { z, u_plus, u_minus, w }
    }

    /// Populations from `w` and the spin densities `<n↑>`, `<n↓>`.
    pub fn from_densities(n_up: f64, n_down: f64, w: f64) -> Self {
        let u_plus = n_up - w;
        let u_minus = n_down - w;
        Self {
            z: 1.0 - u_plus - u_minus - w,
            u_plus,
            u_minus,
            w,
        }
    }

    pub fn populations(&self) -> [f64; 4] {
        [self.z, self.u_plus, self.u_minus, self.w]
    }

    pub fn total(&self) -> f64 {
        self.populations().iter().sum()
    }

    /// Clamp roundoff-sized negatives to zero; larger negatives are an error.
    pub fn clamped(&self) -> Result<Self> {
        let fix = |p: f64| {
            if p >= 0.0 {
                Ok(p.min(1.0))
            } else if p >= -CLAMP_TOL {
                Ok(0.0)
            } else {
                Err(HubbardError::NegativePopulation(p))
            }
        };
        Ok(Self {
            z: fix(self.z)?,
            u_plus: fix(self.u_plus)?,
            u_minus: fix(self.u_minus)?,
            w: fix(self.w)?,
        })
    }
}

/// Site-averaged populations of a state, or the equal-weight average over a
/// degenerate multiplet.
pub fn local_rdm(states: &[Vec<f64>], basis: &SectorBasis) -> Result<LocalRdm> {
    if states.is_empty() {
        return Err(HubbardError::InvalidParams("no states supplied".into()));
    }
    let sites = basis.sites() as f64;
    let (mut doublons, mut up, mut down) = (0.0, 0.0, 0.0);
    for psi in states {
        if psi.len() != basis.dim() {
            return Err(HubbardError::InvalidParams(format!(
                "state has length {} but sector dimension is {}",
                psi.len(),
                basis.dim()
            )));
        }
        let norm2: f64 = psi.iter().map(|x| x * x).sum();
        if (norm2.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(HubbardError::Unnormalized(norm2.sqrt()));
        }
        for (idx, amp) in psi.iter().enumerate() {
            let p = amp * amp;
            if p == 0.0 {
                continue;
            }
            let (u, d) = basis.config(idx);
            doublons += p * (u & d).count_ones() as f64;
            up += p * u.count_ones() as f64;
            down += p * d.count_ones() as f64;
        }
    }
    let m = states.len() as f64 * sites;
    LocalRdm::from_densities(up / m, down / m, doublons / m).clamped()
}

/// Von Neumann entropy of the local density matrix, in bits.
pub fn von_neumann_entropy(rdm: &LocalRdm) -> f64 {
    rdm.populations()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Two-population form valid for a spin singlet at half filling, where
/// `u⁺ = u⁻ = 1/2 - w` and `z = w`.
pub fn half_filling_entropy(w: f64) -> f64 {
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    2.0 * h(w) + 2.0 * h(0.5 - w)
}

/// Spin sector used for `N` particles: `S^z = 0` for even `N`, `S^z = +1/2` for odd.
pub fn sector_for(particles: usize) -> (usize, usize) {
    (particles.div_ceil(2), particles / 2)
}

/// Entanglement of one ground-state evaluation.
#[derive(Debug, Clone)]
pub struct EntanglementPoint {
    pub ev: f64,
    pub rdm: LocalRdm,
    pub ground: GroundStateResult,
}

/// Eigenpairs computed per ground-state solve before checking for degeneracy.
pub const DEFAULT_PAIRS: usize = 3;

/// Ground state of `params` in the `(n_up, n_down)` sector and its local entanglement.
pub fn entanglement_at(params: &ModelParams, n_up: usize, n_down: usize) -> Result<EntanglementPoint> {
    entanglement_with(params, n_up, n_down, SolverConfig::default())
}

pub fn entanglement_with(
    params: &ModelParams,
    n_up: usize,
    n_down: usize,
    config: SolverConfig,
) -> Result<EntanglementPoint> {
    let basis = SectorBasis::new(params.sites, n_up, n_down)?;
    let ground = solve_sector(params, &basis, config)?;
    let rdm = local_rdm(ground.ground_multiplet(), &basis)?;
    Ok(EntanglementPoint {
        ev: von_neumann_entropy(&rdm),
        rdm,
        ground,
    })
}

/// Lowest levels of one sector, with the ground multiplet resolved.
pub fn solve_sector(params: &ModelParams, basis: &SectorBasis, config: SolverConfig) -> Result<GroundStateResult> {
    let h = Hamiltonian::new(*params, basis)?;
    let matvec = |x: &[f64], out: &mut [f64]| h.apply_into(x, out);
    ground_multiplet(basis.dim(), &matvec, DEFAULT_PAIRS, config)
}

/// Ground energy of the sector holding `particles` fermions. Only the lowest
/// level is needed, so the multiplet is not resolved.
pub fn ground_energy(params: &ModelParams, particles: usize, config: SolverConfig) -> Result<f64> {
    let (nu, nd) = sector_for(particles);
    let basis = SectorBasis::new(params.sites, nu, nd)?;
    let h = Hamiltonian::new(*params, &basis)?;
    let matvec = |x: &[f64], out: &mut [f64]| h.apply_into(x, out);
    Ok(lowest_eigenpairs(basis.dim(), &matvec, 1, config)?.ground_energy())
}

/// Charge gap `E0(N+1) + E0(N-1) - 2 E0(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub delta_e: f64,
    pub e_minus: f64,
    pub e_zero: f64,
    pub e_plus: f64,
}

pub fn charge_gap(params: &ModelParams, particles: usize) -> Result<GapResult> {
    charge_gap_with(params, particles, SolverConfig::default())
}

pub fn charge_gap_with(params: &ModelParams, particles: usize, config: SolverConfig) -> Result<GapResult> {
    if particles < 2 || particles + 1 > 2 * params.sites {
        return Err(HubbardError::InvalidSector(format!(
            "charge gap needs 1 <= N-1 and N+1 <= 2L (N={particles}, L={})",
            params.sites
        )));
    }
    let e_minus = ground_energy(params, particles - 1, config)?;
    let e_zero = ground_energy(params, particles, config)?;
    let e_plus = ground_energy(params, particles + 1, config)?;
    Ok(GapResult {
        delta_e: e_plus + e_minus - 2.0 * e_zero,
        e_minus,
        e_zero,
        e_plus,
    })
}
