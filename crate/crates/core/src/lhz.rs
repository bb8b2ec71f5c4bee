//! Parity (LHZ) encoding of all-to-all Ising problems.
//!
//! Logical spins `s_0..s_{N-1}` become `K = N(N-1)/2` physical spins, one per
//! pair `(i, j)` with `i < j`, holding the product `s_i s_j`. Physical bits are
//! laid out in a triangle whose row `i` holds the pairs `(i, j)` for `j > i`,
//! so the base row is `(0, 1), (0, 2), ..., (0, N-1)` and row-major order is
//! the lexicographic pair order.
//!
//! Plaquettes join `(i, j), (i, j+1), (i+1, j), (i+1, j+1)`. Along the
//! boundary the three-body loops `(i, i+1), (i, i+2), (i+1, i+2)` are closed
//! by one of the `N - 2` fixed spins pinned to +1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{IsingProblem, SpinConfig};

pub fn physical_count(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 logical spins, got {n}")));
    }
    Ok(n * (n - 1) / 2)
}

pub fn constraint_count(n: usize) -> Result<usize> {
    Ok(physical_count(n)? + 1 - n)
}

/// Index of the physical bit for the pair `(i, j)`, `i < j < n`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// One plaquette slot: a physical bit or a member of the fixed row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Physical(usize),
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub north: Slot,
    pub east: Slot,
    pub south: Slot,
    pub west: Slot,
}

impl Tile {
    pub fn slots(&self) -> [Slot; 4] {
        [self.north, self.east, self.south, self.west]
    }

    pub fn touches_fixed_row(&self) -> bool {
        self.slots().iter().any(|s| matches!(s, Slot::Fixed(_)))
    }

    pub fn contains(&self, k: usize) -> bool {
        self.slots().contains(&Slot::Physical(k))
    }

    /// Product of the four members; fixed slots count as +1.
    pub fn product(&self, physical: &[i8]) -> i8 {
        self.slots()
            .iter()
            .map(|s| match *s {
                Slot::Physical(k) => physical[k],
                Slot::Fixed(_) => 1,
            })
            .product()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalBit {
    pub k: usize,
    pub row: usize,
    pub col: usize,
    /// Logical pair `(i, j)`, zero-based.
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhzLayout {
    pub n_logical: usize,
    pub k_physical: usize,
    /// Row lengths from the base row up: `N-1, N-2, ..., 1`.
    pub rows: Vec<usize>,
    /// Number of fixed +1 spins closing the boundary.
    pub fixed_row: usize,
    pub tiles: Vec<Tile>,
    pub bits: Vec<PhysicalBit>,
}

pub fn build_layout(n: usize) -> Result<LhzLayout> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "an LHZ layout needs at least 3 logical spins, got {n}"
        )));
    }
    let k_physical = physical_count(n)?;
    let rows: Vec<usize> = (1..n).rev().collect();
    let mut bits = Vec::with_capacity(k_physical);
    for i in 0..n {
        for j in (i + 1)..n {
            bits.push(PhysicalBit {
                k: bits.len(),
                row: i,
                col: j - i - 1,
                pair: (i, j),
            });
        }
    }
    let p = |i, j| Slot::Physical(pair_index(n, i, j));

    let mut tiles = Vec::with_capacity(k_physical + 1 - n);
    // Boundary triangles first, one per fixed spin.
    for i in 0..n - 2 {
        tiles.push(Tile {
            north: p(i, i + 2),
            east: p(i + 1, i + 2),
            south: Slot::Fixed(i),
            west: p(i, i + 1),
        });
    }
    for i in 0..n - 2 {
        for j in (i + 2)..(n - 1) {
            tiles.push(Tile {
                north: p(i, j + 1),
                east: p(i + 1, j + 1),
                south: p(i + 1, j),
                west: p(i, j),
            });
        }
    }

    Ok(LhzLayout {
        n_logical: n,
        k_physical,
        rows,
        fixed_row: n - 2,
        tiles,
        bits,
    })
}

impl LhzLayout {
    /// Physical configuration `s_i s_j` for each pair.
    pub fn encode(&self, logical: &SpinConfig) -> Result<SpinConfig> {
        if logical.len() != self.n_logical {
            return Err(Error::invalid(format!(
                "logical configuration has {} spins, layout has {}",
                logical.len(),
                self.n_logical
            )));
        }
        let s = logical.spins();
        SpinConfig::new(self.bits.iter().map(|b| s[b.pair.0] * s[b.pair.1]).collect())
    }

    /// Indices of tiles whose product is -1.
    pub fn violated_tiles(&self, physical: &SpinConfig) -> Vec<usize> {
        self.tiles
            .iter()
            .enumerate()
            .filter(|(_, t)| t.product(physical.spins()) < 0)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn tiles_containing(&self, k: usize) -> usize {
        self.tiles.iter().filter(|t| t.contains(k)).count()
    }
}

/// Local fields `J_k` and penalty `C` on the physical spins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhzProblem {
    pub j_fields: Vec<f64>,
    pub c_penalty: f64,
}

impl LhzProblem {
    pub fn new(j_fields: Vec<f64>, c_penalty: f64) -> Result<Self> {
        if !(c_penalty > 0.0) {
            return Err(Error::invalid(format!(
                "penalty strength must be positive, got {c_penalty}"
            )));
        }
        Ok(Self {
            j_fields,
            c_penalty,
        })
    }

    /// `C <= max |J_k|`: the penalty may not dominate the local fields.
    pub fn penalty_possibly_weak(&self) -> bool {
        let max = self.j_fields.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.c_penalty <= max
    }
}

/// Local fields for a pure coupling problem, in lexicographic pair order.
///
/// The physical energy adds `+J_k s~_k`, while the logical energy subtracts
/// `J_ij s_i s_j`, so `J_k = -J_ij`.
pub fn map_couplings(problem: &IsingProblem) -> Result<Vec<f64>> {
    if problem.has_fields() {
        return Err(Error::Unsupported(
            "local fields h_i have no parity-encoded counterpart".into(),
        ));
    }
    let n = problem.n();
    if n < 3 {
        return Err(Error::invalid(format!(
            "an LHZ layout needs at least 3 logical spins, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            // 0.0 - x keeps zero couplings at +0.0
            out.push(0.0 - problem.coupling(i, j));
        }
    }
    Ok(out)
}

/// `sum_k J_k s~_k + sum_l C_l` with `C_l = -C` times the plaquette product.
pub fn lhz_energy(problem: &LhzProblem, layout: &LhzLayout, physical: &SpinConfig) -> Result<f64> {
    if physical.len() != layout.k_physical || problem.j_fields.len() != layout.k_physical {
        return Err(Error::invalid(format!(
            "expected {} physical spins and fields, got {} spins and {} fields",
            layout.k_physical,
            physical.len(),
            problem.j_fields.len()
        )));
    }
    let s = physical.spins();
    let field: f64 = problem
        .j_fields
        .iter()
        .zip(s)
        .map(|(j, &v)| j * f64::from(v))
        .sum();
    let penalty: f64 = layout
        .tiles
        .iter()
        .map(|t| -problem.c_penalty * f64::from(t.product(s)))
        .sum();
    Ok(field + penalty)
}

/// Recovers the logical configuration with spin 0 fixed to +1.
pub fn decode_readout(physical: &SpinConfig, layout: &LhzLayout) -> Result<SpinConfig> {
    if physical.len() != layout.k_physical {
        return Err(Error::invalid(format!(
            "expected {} physical spins, got {}",
            layout.k_physical,
            physical.len()
        )));
    }
    if let Some(&tile) = layout.violated_tiles(physical).first() {
        return Err(Error::Decode { tile });
    }
    let n = layout.n_logical;
    let mut logical = vec![1i8; n];
    // Base row holds s_0 s_j.
    for (j, spin) in logical.iter_mut().enumerate().skip(1) {
        *spin = physical.get(pair_index(n, 0, j));
    }
    SpinConfig::new(logical)
}

/// Representative of `{s, -s}` with the first spin up.
pub fn canonical(logical: &SpinConfig) -> SpinConfig {
    if logical.get(0) > 0 {
        logical.clone()
    } else {
        logical.global_flip()
    }
}
