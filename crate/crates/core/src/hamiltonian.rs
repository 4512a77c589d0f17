//! Matrix-free extended Hubbard Hamiltonian on a fixed-number sector.
//!
//! ```text
//! H = -Σ_{σ,j,δ=±1} c†_{jσ} c_{j+δ,σ} + U Σ_j n_{j↑} n_{j↓} + V Σ_j n_j n_{j+1} - μ Σ_j n_j
//! ```
//!
//! Hopping is fixed to unit amplitude; every coupling is in units of it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HubbardError, Result};
use crate::fock_basis::{bonds, validate_lattice, Boundary, HopTable, Mask, SectorBasis, DEFAULT_MAX_SITES};

/// Couplings and lattice geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub u: f64,
    pub v: f64,
    #[serde(default)]
    pub mu: f64,
    pub sites: usize,
    #[serde(default)]
    pub boundary: Boundary,
}

impl ModelParams {
    /// Periodic chain with `mu = 0`.
    pub fn new(sites: usize, u: f64, v: f64) -> Self {
        Self {
            u,
            v,
            mu: 0.0,
            sites,
            boundary: Boundary::Periodic,
        }
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_u(mut self, u: f64) -> Self {
        self.u = u;
        self
    }

    pub fn with_v(mut self, v: f64) -> Self {
        self.v = v;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u.is_finite() && self.v.is_finite() && self.mu.is_finite()) {
            return Err(HubbardError::InvalidParams(format!(
                "couplings must be finite (U={}, V={}, mu={})",
                self.u, self.v, self.mu
            )));
        }
        validate_lattice(self.sites, self.boundary, DEFAULT_MAX_SITES)
    }
}

/// Diagonal (density-density and chemical potential) energy of one configuration.
pub fn diagonal_energy(up: Mask, down: Mask, params: &ModelParams) -> f64 {
    let doublons = (up & down).count_ones() as f64;
    let occ = |j: usize| ((up >> j) & 1) as f64 + ((down >> j) & 1) as f64;
    let nn: f64 = bonds(params.sites, params.boundary)
        .into_iter()
        .map(|(i, j)| occ(i) * occ(j))
        .sum();
    let particles = (up.count_ones() + down.count_ones()) as f64;
    params.u * doublons + params.v * nn - params.mu * particles
}

/// Sector Hamiltonian with precomputed hopping tables and diagonal.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    params: ModelParams,
    n_up_states: usize,
    n_down_states: usize,
    up_hops: HopTable,
    down_hops: HopTable,
    diagonal: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(params: ModelParams, basis: &SectorBasis) -> Result<Self> {
        params.validate()?;
        if basis.sites() != params.sites {
            return Err(HubbardError::InvalidParams(format!(
                "basis has {} sites but parameters specify {}",
                basis.sites(),
                params.sites
            )));
        }
        let bond_list = bonds(params.sites, params.boundary);
        let up_hops = HopTable::build(basis.up_states(), |m| basis.up_rank(m), &bond_list);
        let down_hops = HopTable::build(basis.down_states(), |m| basis.down_rank(m), &bond_list);
        let diagonal = (0..basis.dim())
            .into_par_iter()
            .map(|idx| {
                let (u, d) = basis.config(idx);
                diagonal_energy(u, d, &params)
            })
            .collect();
        Ok(Self {
            params,
            n_up_states: basis.up_states().len(),
            n_down_states: basis.down_states().len(),
            up_hops,
            down_hops,
            diagonal,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// `out = H x`.
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.dim(), "vector length does not match sector dimension");
        assert_eq!(out.len(), self.dim(), "output length does not match sector dimension");
        let nd = self.n_down_states;
        out.par_chunks_mut(nd).enumerate().for_each(|(b, row)| {
            let xrow = &x[b * nd..(b + 1) * nd];
            let diag = &self.diagonal[b * nd..(b + 1) * nd];
            for d in 0..nd {
                let mut acc = diag[d] * xrow[d];
                for &(c, amp) in self.down_hops.row(d) {
                    acc += amp * xrow[c as usize];
                }
                row[d] = acc;
            }
            for &(a, amp) in self.up_hops.row(b) {
                let src = &x[a as usize * nd..(a as usize + 1) * nd];
                for (o, s) in row.iter_mut().zip(src) {
                    *o += amp * s;
                }
            }
        });
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.apply_into(x, &mut out);
        out
    }

    /// Dense matrix assembled column by column; intended for small sectors.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.apply(&e);
            m.column_mut(j).copy_from_slice(&col);
            e[j] = 0.0;
        }
        m
    }

    pub fn up_state_count(&self) -> usize {
        self.n_up_states
    }
}

/// Free-standing form of the matvec for one-off use.
pub fn apply_hamiltonian(params: &ModelParams, basis: &SectorBasis, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != basis.dim() {
        return Err(HubbardError::InvalidParams(format!(
            "vector has length {} but sector dimension is {}",
            v.len(),
            basis.dim()
        )));
    }
    Ok(Hamiltonian::new(*params, basis)?.apply(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn diagonal_examples() {
        let p = ModelParams::new(2, 4.0, 1.0).with_boundary(Boundary::Open);
        assert_eq!(diagonal_energy(0b01, 0b01, &p), 4.0);
        assert_eq!(diagonal_energy(0b01, 0b10, &p), 1.0);
        assert_eq!(diagonal_energy(0b11, 0b11, &p.with_mu(2.0)), 4.0);
    }

    #[test]
    fn dimer_ground_energy() {
        let basis = SectorBasis::new(2, 1, 1).unwrap();
        for u in [0.0, 1.0, 4.0, -3.0, 10.0] {
            let p = ModelParams::new(2, u, 0.0).with_boundary(Boundary::Open);
            let h = Hamiltonian::new(p, &basis).unwrap().to_dense();
            let e0 = h.symmetric_eigenvalues().min();
            assert!((e0 - (u - (u * u + 16.0f64).sqrt()) / 2.0).abs() < 1e-12, "U={u}: {e0}");
        }
    }

    #[test]
    fn symmetric_bilinear_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (l, nu, nd, u, v) in [(6, 3, 3, 4.0, 1.5), (5, 2, 3, -2.0, 0.7), (8, 3, 4, 1.0, -1.0)] {
            let basis = SectorBasis::new(l, nu, nd).unwrap();
            let h = Hamiltonian::new(ModelParams::new(l, u, v).with_mu(0.3), &basis).unwrap();
            for _ in 0..20 {
                let x: Vec<f64> = (0..basis.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let y: Vec<f64> = (0..basis.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let lhs = dot(&x, &h.apply(&y));
                let rhs = dot(&h.apply(&x), &y);
                assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn rejects_length_mismatch() {
        let basis = SectorBasis::new(4, 2, 2).unwrap();
        assert!(apply_hamiltonian(&ModelParams::new(4, 1.0, 0.0), &basis, &[1.0; 3]).is_err());
        assert!(Hamiltonian::new(ModelParams::new(5, 1.0, 0.0), &basis).is_err());
        assert!(Hamiltonian::new(ModelParams::new(4, f64::NAN, 0.0), &basis).is_err());
    }
}
