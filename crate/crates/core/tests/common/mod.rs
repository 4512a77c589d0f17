//! Brute-force fermion operators in the full Fock space, used as oracles.
#![allow(dead_code)]

use nalgebra::DMatrix;

/// `c_mode` acting on occupation bitstring `state` under the Jordan–Wigner
/// ordering where lower modes sit to the left.
pub fn annihilate(state: u64, mode: usize) -> Option<(u64, f64)> {
    if state >> mode & 1 == 0 {
        return None;
    }
    let below = (state & ((1u64 << mode) - 1)).count_ones();
    Some((
        state & !(1u64 << mode),
        if below.is_multiple_of(2) { 1.0 } else { -1.0 },
    ))
}

pub fn create(state: u64, mode: usize) -> Option<(u64, f64)> {
    if state >> mode & 1 == 1 {
        return None;
    }
    let below = (state & ((1u64 << mode) - 1)).count_ones();
    Some((state | 1u64 << mode, if below.is_multiple_of(2) { 1.0 } else { -1.0 }))
}

/// `c†_to c_from` applied to one basis state.
pub fn hop(state: u64, from: usize, to: usize) -> Option<(u64, f64)> {
    let (mid, s1) = annihilate(state, from)?;
    let (out, s2) = create(mid, to)?;
    Some((out, s1 * s2))
}

/// Matrix of `c†_to c_from` over all `2^modes` states.
pub fn hop_matrix(modes: usize, from: usize, to: usize) -> DMatrix<f64> {
    let n = 1usize << modes;
    let mut m = DMatrix::zeros(n, n);
    for s in 0..n as u64 {
        if let Some((t, sign)) = hop(s, from, to) {
            m[(t as usize, s as usize)] += sign;
        }
    }
    m
}

/// Extended Hubbard Hamiltonian on `2L` modes, up spins on modes `0..L` and
/// down spins on modes `L..2L`, as a dense `4^L` matrix.
pub fn full_hamiltonian(sites: usize, periodic: bool, u: f64, v: f64, mu: f64) -> DMatrix<f64> {
    let modes = 2 * sites;
    let n = 1usize << modes;
    let mut bonds: Vec<(usize, usize)> = (0..sites - 1).map(|i| (i, i + 1)).collect();
    if periodic && sites >= 3 {
        bonds.push((sites - 1, 0));
    }
    let occ = |s: u64, m: usize| (s >> m & 1) as f64;
    let mut h = DMatrix::zeros(n, n);
    for s in 0..n as u64 {
        let mut diag = 0.0;
        for j in 0..sites {
            diag += u * occ(s, j) * occ(s, j + sites);
            diag -= mu * (occ(s, j) + occ(s, j + sites));
        }
        for &(a, b) in &bonds {
            diag += v * (occ(s, a) + occ(s, a + sites)) * (occ(s, b) + occ(s, b + sites));
        }
        h[(s as usize, s as usize)] += diag;
        for &(a, b) in &bonds {
            for off in [0, sites] {
                for (from, to) in [(a + off, b + off), (b + off, a + off)] {
                    if let Some((t, sign)) = hop(s, from, to) {
                        h[(t as usize, s as usize)] -= sign;
                    }
                }
            }
        }
    }
    h
}

pub fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
