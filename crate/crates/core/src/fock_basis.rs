//! Spin-resolved occupation basis for a fixed particle-number sector.
//!
//! A many-fermion configuration is stored as a pair of bitmasks, one per spin
//! species, with bit `j` set when site `j` is occupied. Basis states are
//! ordered with every spin-up creation operator to the left of every spin-down
//! one and sites ascending within a species:
//!
//! ```text
//! |up, down> = c†_{i1↑} c†_{i2↑} ... c†_{j1↓} c†_{j2↓} ... |0>,   i1 < i2 < ..., j1 < j2 < ...
//! ```
//!
//! Under this ordering a number-conserving hop of one species never picks up a
//! sign from the other species, so the sector factorizes as
//! `up_states ⊗ down_states` with composite index `iu * n_down_states + id`.

use serde::{Deserialize, Serialize};

use crate::error::{HubbardError, Result};

/// Bitmask of occupied sites for one spin species.
pub type Mask = u32;

/// Largest lattice accepted by [`SectorBasis::new`].
pub const DEFAULT_MAX_SITES: usize = 16;

/// Marker for masks that are not in the sector.
const NO_RANK: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    #[default]
    Periodic,
}

/// Directed nearest-neighbour bonds `(i, i+1)` of the chain. Each bond appears once.
pub fn bonds(sites: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..sites.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic && sites >= 3 {
        out.push((sites - 1, 0));
    }
    out
}

/// Check that `sites`/`boundary` form a usable chain.
pub fn validate_lattice(sites: usize, boundary: Boundary, max_sites: usize) -> Result<()> {
    if sites < 2 {
        return Err(HubbardError::InvalidSector(format!(
            "lattice needs at least 2 sites, got {sites}"
        )));
    }
    if sites > max_sites {
        return Err(HubbardError::InvalidSector(format!(
            "lattice of {sites} sites exceeds the cap of {max_sites}"
        )));
    }
    if boundary == Boundary::Periodic && sites < 3 {
        return Err(HubbardError::InvalidSector(
            "periodic boundary requires at least 3 sites".into(),
        ));
    }
    Ok(())
}

/// All masks over `sites` bits with exactly `count` bits set, ascending.
pub fn masks_with_popcount(sites: usize, count: usize) -> Vec<Mask> {
    if count > sites {
        return Vec::new();
    }
    if count == 0 {
        return vec![0];
    }
    let limit: u64 = 1 << sites;
    let mut out = Vec::new();
    // Gosper's hack: next larger integer with the same popcount.
    let mut m: u64 = (1 << count) - 1;
    while m < limit {
        out.push(m as Mask);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

/// Single-species hop `c†_to c_from` acting on `mask`.
///
/// Returns the new mask and the fermionic sign, or `None` when the hop is
/// Pauli blocked (`from` empty or `to` occupied). The sign is `(-1)^k` where
/// `k` counts occupied sites strictly between `from` and `to` in site order,
/// which for a wrap-around bond equals `(-1)^(n-1)` with `n` particles.
///
/// # Panics
///
/// Panics if `from` and `to` are not nearest neighbours under `boundary`.
pub fn apply_hop(mask: Mask, from: usize, to: usize, sites: usize, boundary: Boundary) -> Option<(Mask, f64)> {
    assert!(from < sites && to < sites && from != to, "hop sites out of range");
    let adjacent =
        from.abs_diff(to) == 1 || (boundary == Boundary::Periodic && sites >= 3 && from.abs_diff(to) == sites - 1);
    assert!(adjacent, "hop between non-adjacent sites {from} and {to}");
    hop_unchecked(mask, from, to)
}

#[inline]
fn hop_unchecked(mask: Mask, from: usize, to: usize) -> Option<(Mask, f64)> {
    let from_bit = 1 << from;
    let to_bit = 1 << to;
    if mask & from_bit == 0 || mask & to_bit != 0 {
        return None;
    }
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    // bits strictly between lo and hi
    let between: Mask = ((1 << hi) - 1) & !((1 << (lo + 1)) - 1);
    let sign = if (mask & between).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Some((mask ^ from_bit ^ to_bit, sign))
}

/// Enumerated configuration space of a fixed `(n_up, n_down)` sector.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    sites: usize,
    n_up: usize,
    n_down: usize,
    up_states: Vec<Mask>,
    down_states: Vec<Mask>,
    up_rank: Vec<u32>,
    down_rank: Vec<u32>,
}

impl SectorBasis {
    pub fn new(sites: usize, n_up: usize, n_down: usize) -> Result<Self> {
        Self::with_cap(sites, n_up, n_down, DEFAULT_MAX_SITES)
    }

    pub fn with_cap(sites: usize, n_up: usize, n_down: usize, max_sites: usize) -> Result<Self> {
        if sites < 2 {
            return Err(HubbardError::InvalidSector(format!(
                "lattice needs at least 2 sites, got {sites}"
            )));
        }
        if sites > max_sites.min(31) {
            return Err(HubbardError::InvalidSector(format!(
                "lattice of {sites} sites exceeds the cap of {max_sites}"
            )));
        }
        if n_up > sites || n_down > sites {
            return Err(HubbardError::InvalidSector(format!(
                "particle counts ({n_up}, {n_down}) do not fit on {sites} sites"
            )));
        }
        let up_states = masks_with_popcount(sites, n_up);
        let down_states = masks_with_popcount(sites, n_down);
        let up_rank = rank_table(sites, &up_states);
        let down_rank = if n_up == n_down {
            up_rank.clone()
        } else {
            rank_table(sites, &down_states)
        };
        Ok(Self {
            sites,
            n_up,
            n_down,
            up_states,
            down_states,
            up_rank,
            down_rank,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn n_down(&self) -> usize {
        self.n_down
    }

    pub fn up_states(&self) -> &[Mask] {
        &self.up_states
    }

    pub fn down_states(&self) -> &[Mask] {
        &self.down_states
    }

    /// Total dimension `C(L, n_up) * C(L, n_down)`.
    pub fn dim(&self) -> usize {
        self.up_states.len() * self.down_states.len()
    }

    pub fn up_rank(&self, mask: Mask) -> Option<usize> {
        lookup(&self.up_rank, mask)
    }

    pub fn down_rank(&self, mask: Mask) -> Option<usize> {
        lookup(&self.down_rank, mask)
    }

    /// Composite index of the configuration `(up, down)`.
    pub fn index(&self, up: Mask, down: Mask) -> Option<usize> {
        Some(self.up_rank(up)? * self.down_states.len() + self.down_rank(down)?)
    }

    /// Configuration at composite index `idx`.
    pub fn config(&self, idx: usize) -> (Mask, Mask) {
        let nd = self.down_states.len();
        (self.up_states[idx / nd], self.down_states[idx % nd])
    }
}

fn rank_table(sites: usize, states: &[Mask]) -> Vec<u32> {
    let mut table = vec![NO_RANK; 1 << sites];
    for (k, &m) in states.iter().enumerate() {
        table[m as usize] = k as u32;
    }
    table
}

#[inline]
fn lookup(table: &[u32], mask: Mask) -> Option<usize> {
    match table.get(mask as usize) {
        Some(&r) if r != NO_RANK => Some(r as usize),
        _ => None,
    }
}

/// Off-diagonal hopping table for one species: for every state index `b`,
/// the list of `(a, amplitude)` with `<b| T |a> = amplitude`, where
/// `T = -Σ c†_i c_j` over directed nearest-neighbour pairs.
#[derive(Debug, Clone)]
pub struct HopTable {
    pub offsets: Vec<usize>,
    pub entries: Vec<(u32, f64)>,
}

impl HopTable {
    pub fn build(states: &[Mask], rank: impl Fn(Mask) -> Option<usize>, bonds: &[(usize, usize)]) -> Self {
        let mut offsets = Vec::with_capacity(states.len() + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for &target in states {
            // <target| c†_to c_from |source>: source = hop target back from `to` to `from`.
            for &(i, j) in bonds {
                for (from, to) in [(i, j), (j, i)] {
                    if let Some((source, sign)) = hop_unchecked(target, to, from) {
                        let a = rank(source).expect("hop leaves the sector");
                        entries.push((a as u32, -sign));
                    }
                }
            }
            offsets.push(entries.len());
        }
        Self { offsets, entries }
    }

    #[inline]
    pub fn row(&self, b: usize) -> &[(u32, f64)] {
        &self.entries[self.offsets[b]..self.offsets[b + 1]]
    }
}
