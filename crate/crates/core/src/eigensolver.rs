//! Lowest eigenpairs of a real symmetric operator by Lanczos iteration.
//!
//! Each eigenpair is found by a separate Lanczos run on the operator deflated
//! against all previously locked eigenvectors. Every run keeps its full Krylov
//! basis and reorthogonalizes each new vector against it and against the locked
//! set, then restarts from the current lowest Ritz vector when the Krylov
//! dimension limit is reached. Locking one pair per run means a degenerate
//! level yields one copy per run, so multiplets are recovered in full.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HubbardError, Result};

/// Seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5EED_0F1D;

/// Absolute width used to group eigenvalues into a degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Largest number of eigenpairs a caller may request.
pub const MAX_PAIRS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Residual bound, relative to `max(1, ||H||)` as estimated from Ritz values.
    pub tol: f64,
    /// Total matvec budget for one eigenpair, across restarts.
    pub max_iter: usize,
    /// Krylov dimension before a restart, never more than `max(200, 4k)`.
    pub max_krylov: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 20_000,
            max_krylov: 200,
            seed: DEFAULT_SEED,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Lowest eigenpairs and their diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
    /// `||H v - λ v||` for each pair.
    pub residuals: Vec<f64>,
    /// Number of eigenvalues within [`DEGENERACY_TOL`] of the minimum.
    pub degeneracy: usize,
    pub converged: bool,
    /// Absolute residual bound the pairs were accepted against.
    pub residual_bound: f64,
    pub matvecs: usize,
}

impl GroundStateResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Vectors spanning the lowest level.
    pub fn ground_multiplet(&self) -> &[Vec<f64>] {
        &self.vectors[..self.degeneracy]
    }

    /// True when every computed pair lies in the lowest level, so the
    /// multiplet may be larger than what was computed.
    pub fn multiplet_saturated(&self) -> bool {
        self.degeneracy == self.eigenvalues.len()
    }
}

/// Below this length vector kernels run sequentially.
const PAR_MIN_LEN: usize = 1 << 13;
const CHUNK: usize = 1 << 12;

fn dot_seq(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    if a.len() < PAR_MIN_LEN || rayon::current_num_threads() == 1 {
        return dot_seq(a, b);
    }
    a.par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| dot_seq(x, y))
        .sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    if y.len() < PAR_MIN_LEN || rayon::current_num_threads() == 1 {
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += alpha * xi;
        }
        return;
    }
    y.par_chunks_mut(CHUNK).zip(x.par_chunks(CHUNK)).for_each(|(ys, xs)| {
        for (yi, xi) in ys.iter_mut().zip(xs) {
            *yi += alpha * xi;
        }
    });
}

/// Classical Gram-Schmidt against `basis`, repeated once when the first pass
/// removes more than half of the norm.
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    if basis.is_empty() {
        return;
    }
    let mut before = norm(v);
    for _ in 0..2 {
        gram_schmidt_pass(v, basis);
        let after = norm(v);
        if after > 0.5 * before {
            break;
        }
        before = after;
    }
}

fn gram_schmidt_pass(v: &mut [f64], basis: &[Vec<f64>]) {
    if v.len() < PAR_MIN_LEN || rayon::current_num_threads() == 1 {
        let coeffs: Vec<f64> = basis.iter().map(|q| dot_seq(q, v)).collect();
        for (q, c) in basis.iter().zip(&coeffs) {
            axpy(-c, q, v);
        }
        return;
    }
    let coeffs: Vec<f64> = basis.par_iter().map(|q| dot(q, v)).collect();
    v.par_chunks_mut(CHUNK).enumerate().for_each(|(i, chunk)| {
        let start = i * CHUNK;
        for (q, c) in basis.iter().zip(&coeffs) {
            let qs = &q[start..start + chunk.len()];
            for (vi, qi) in chunk.iter_mut().zip(qs) {
                *vi -= c * qi;
            }
        }
    });
}

struct Pair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
    bound: f64,
}

/// Incremental solver that locks one eigenpair per call to [`next_pair`](Self::next_pair).
pub struct DeflatedLanczos<'a, F>
where
    F: Fn(&[f64], &mut [f64]),
{
    dim: usize,
    matvec: &'a F,
    config: SolverConfig,
    krylov_limit: usize,
    locked: Vec<Vec<f64>>,
    values: Vec<f64>,
    residuals: Vec<f64>,
    /// Running estimate of the operator norm.
    scale: f64,
    bound: f64,
    matvecs: usize,
    rng: ChaCha8Rng,
}

impl<'a, F> DeflatedLanczos<'a, F>
where
    F: Fn(&[f64], &mut [f64]),
{
    pub fn new(dim: usize, matvec: &'a F, config: SolverConfig, k_hint: usize) -> Result<Self> {
        if dim == 0 {
            return Err(HubbardError::InvalidParams(
                "operator dimension must be positive".into(),
            ));
        }
        if config.tol.is_nan() || config.tol <= 0.0 {
            return Err(HubbardError::InvalidParams("tolerance must be positive".into()));
        }
        let krylov_limit = config.max_krylov.min(200.max(4 * k_hint)).max(2).min(dim);
        Ok(Self {
            dim,
            matvec,
            config,
            krylov_limit,
            locked: Vec::new(),
            values: Vec::new(),
            residuals: Vec::new(),
            scale: 1.0,
            bound: config.tol,
            matvecs: 0,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
        })
    }

    pub fn locked_count(&self) -> usize {
        self.locked.len()
    }

    fn apply(&mut self, x: &[f64], out: &mut [f64]) {
        (self.matvec)(x, out);
        self.matvecs += 1;
    }

    fn random_start(&mut self) -> Vec<f64> {
        loop {
            let mut v: Vec<f64> = (0..self.dim).map(|_| self.rng.random_range(-1.0..1.0)).collect();
            orthogonalize(&mut v, &self.locked);
            let n = norm(&v);
            if n > 1e-8 {
                v.iter_mut().for_each(|x| *x /= n);
                return v;
            }
        }
    }

    /// Residual bound currently in force.
    fn required(&self) -> f64 {
        self.config.tol * self.scale.max(1.0)
    }

    /// Lock the lowest eigenpair of the operator restricted to the orthogonal
    /// complement of the pairs locked so far. Returns its eigenvalue.
    pub fn next_pair(&mut self) -> Result<f64> {
        if self.locked.len() >= self.dim {
            return Err(HubbardError::InvalidParams("all eigenpairs already locked".into()));
        }
        let remaining = self.dim - self.locked.len();
        let limit = self.krylov_limit.min(remaining);
        let mut start = self.random_start();
        let start_matvecs = self.matvecs;
        let mut best = f64::INFINITY;
        loop {
            let used = self.matvecs - start_matvecs;
            let budget = self.config.max_iter.saturating_sub(used).max(1);
            let pair = self.lanczos_run(&start, limit.min(budget))?;
            best = best.min(pair.residual);
            if pair.residual <= pair.bound {
                self.values.push(pair.value);
                self.residuals.push(pair.residual);
                self.bound = self.bound.max(pair.bound);
                self.locked.push(pair.vector);
                return Ok(pair.value);
            }
            if self.matvecs - start_matvecs >= self.config.max_iter {
                return Err(HubbardError::NotConverged {
                    iterations: self.matvecs - start_matvecs,
                    best_residual: best,
                    required: pair.bound,
                });
            }
            start = pair.vector;
        }
    }

    /// One Lanczos pass of at most `limit` steps from a normalized start vector.
    fn lanczos_run(&mut self, start: &[f64], limit: usize) -> Result<Pair> {
        let n = self.dim;
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(limit);
        let mut alpha: Vec<f64> = Vec::with_capacity(limit);
        let mut beta: Vec<f64> = Vec::with_capacity(limit);
        let mut w = vec![0.0; n];
        basis.push(start.to_vec());
        let check_every = 4;
        loop {
            let j = basis.len() - 1;
            let q = basis[j].clone();
            self.apply(&q, &mut w);
            let a = dot(&q, &w);
            alpha.push(a);
            axpy(-a, &q, &mut w);
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut w);
            }
            orthogonalize(&mut w, &basis);
            orthogonalize(&mut w, &self.locked);
            let b = norm(&w);
            let m = basis.len();
            self.scale = self.scale.max(a.abs());

            let exhausted = b <= 1e-13 * self.scale.max(1.0);
            let at_limit = m >= limit;
            if exhausted || at_limit || m.is_multiple_of(check_every) {
                let (theta, s) = tridiagonal_lowest(&alpha, &beta);
                self.scale = self.scale.max(theta.abs());
                let estimate = b * s[m - 1].abs();
                if exhausted || at_limit || estimate <= 0.1 * self.required() {
                    let mut x = vec![0.0; n];
                    for (coef, qv) in s.iter().zip(&basis) {
                        axpy(*coef, qv, &mut x);
                    }
                    orthogonalize(&mut x, &self.locked);
                    let nx = norm(&x);
                    x.iter_mut().for_each(|v| *v /= nx);
                    let mut hx = vec![0.0; n];
                    self.apply(&x, &mut hx);
                    let value = dot(&x, &hx);
                    // residual of the deflated operator
                    let mut r = hx;
                    axpy(-value, &x, &mut r);
                    for q in &self.locked {
                        let c = dot(q, &r);
                        axpy(-c, q, &mut r);
                    }
                    let residual = norm(&r);
                    let bound = self.required();
                    if residual <= bound || exhausted || at_limit {
                        return Ok(Pair {
                            value,
                            vector: x,
                            residual,
                            bound,
                        });
                    }
                }
            }
            beta.push(b);
            w.iter_mut().for_each(|v| *v /= b);
            basis.push(std::mem::replace(&mut w, vec![0.0; n]));
        }
    }

    /// Collect the locked pairs, sorted by eigenvalue.
    pub fn finish(self) -> GroundStateResult {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| self.values[i]).collect();
        let residuals: Vec<f64> = order.iter().map(|&i| self.residuals[i]).collect();
        let mut locked = self.locked;
        let vectors: Vec<Vec<f64>> = order.iter().map(|&i| std::mem::take(&mut locked[i])).collect();
        let degeneracy = count_degenerate(&eigenvalues);
        GroundStateResult {
            eigenvalues,
            vectors,
            residuals,
            degeneracy,
            converged: true,
            residual_bound: self.bound,
            matvecs: self.matvecs,
        }
    }
}

fn count_degenerate(sorted: &[f64]) -> usize {
    match sorted.first() {
        Some(&e0) => sorted.iter().take_while(|&&e| e - e0 <= DEGENERACY_TOL).count(),
        None => 0,
    }
}

/// Lowest eigenvalue and eigenvector of the symmetric tridiagonal matrix with
/// diagonal `alpha` and off-diagonal `beta`.
fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (imin, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (theta, eig.eigenvectors.column(imin).iter().copied().collect())
}

/// The `k` lowest eigenpairs of the symmetric operator `matvec` on `R^dim`.
///
/// `matvec(x, out)` must write `H x` into `out`. Results are deterministic for
/// a fixed `config.seed`.
pub fn lowest_eigenpairs<F>(dim: usize, matvec: &F, k: usize, config: SolverConfig) -> Result<GroundStateResult>
where
    F: Fn(&[f64], &mut [f64]),
{
    if k == 0 || k > dim.min(MAX_PAIRS) {
        return Err(HubbardError::InvalidParams(format!(
            "requested {k} eigenpairs; allowed range is 1..={}",
            dim.min(MAX_PAIRS)
        )));
    }
    let mut solver = DeflatedLanczos::new(dim, matvec, config, k)?;
    for _ in 0..k {
        solver.next_pair()?;
    }
    Ok(solver.finish())
}

/// Lowest eigenpairs, extended past `k` while every computed pair still belongs
/// to the lowest level, so the returned ground multiplet is complete unless it
/// exceeds [`MAX_PAIRS`] or the dimension.
pub fn ground_multiplet<F>(dim: usize, matvec: &F, k: usize, config: SolverConfig) -> Result<GroundStateResult>
where
    F: Fn(&[f64], &mut [f64]),
{
    let k = k.clamp(1, dim.min(MAX_PAIRS));
    let mut solver = DeflatedLanczos::new(dim, matvec, config, k)?;
    let mut values = Vec::new();
    for _ in 0..k {
        values.push(solver.next_pair()?);
    }
    loop {
        values.sort_by(f64::total_cmp);
        let all_degenerate = count_degenerate(&values) == values.len();
        if !all_degenerate || values.len() >= dim.min(MAX_PAIRS) {
            break;
        }
        values.push(solver.next_pair()?);
    }
    Ok(solver.finish())
}
