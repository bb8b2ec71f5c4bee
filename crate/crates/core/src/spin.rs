//! Classical Ising and QUBO foundations.
//!
//! Spins take values in {-1, +1}. Throughout the crate a binary digit `b`
//! maps to the spin `2b - 1`, so bit 1 is spin up. When a configuration is
//! packed into an integer the first spin is the most significant bit.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute energy tolerance for ground-set membership.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Largest spin count accepted by [`enumerate_ground_states`].
pub const MAX_ENUMERATION_SPINS: usize = 24;

/// Maps a bit to a spin: 0 -> -1, 1 -> +1.
#[inline]
pub fn bit_to_spin(bit: u8) -> i8 {
    if bit == 0 {
        -1
    } else {
        1
    }
}

/// Maps a spin to a bit: -1 -> 0, +1 -> 1.
#[inline]
pub fn spin_to_bit(spin: i8) -> u8 {
    u8::from(spin > 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::invalid("spin configuration must not be empty"));
        }
        if let Some(pos) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::invalid(format!(
                "spin {} has value {}, expected -1 or +1",
                pos, spins[pos]
            )));
        }
        Ok(Self(spins))
    }

    /// Configuration of all spins up.
    pub fn all_up(n: usize) -> Self {
        assert!(n > 0, "spin configuration must not be empty");
        Self(vec![1; n])
    }

    /// Decodes an integer index, spin 1 being the most significant bit.
    pub fn from_index(index: u64, n: usize) -> Self {
        assert!(n > 0 && n <= 64);
        Self(
            (0..n)
                .map(|k| bit_to_spin(((index >> (n - 1 - k)) & 1) as u8))
                .collect(),
        )
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::invalid("bits must be 0 or 1"));
        }
        Self::new(bits.iter().map(|&b| bit_to_spin(b)).collect())
    }

    pub fn index(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &s| (acc << 1) | u64::from(spin_to_bit(s)))
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    /// Every spin inverted.
    pub fn global_flip(&self) -> Self {
        Self(self.0.iter().map(|&s| -s).collect())
    }

    /// Bit string, first spin leftmost.
    pub fn bit_string(&self) -> String {
        self.0
            .iter()
            .map(|&s| if s > 0 { '1' } else { '0' })
            .collect()
    }

    pub(crate) fn set_from_index(&mut self, index: u64) {
        let n = self.0.len();
        for (k, s) in self.0.iter_mut().enumerate() {
            *s = bit_to_spin(((index >> (n - 1 - k)) & 1) as u8);
        }
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(c: SpinConfig) -> Self {
        c.0
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bit_string())
    }
}

/// Ising problem `H = -sum_i h_i s_i - sum_{i<j} J_ij s_i s_j`.
///
/// Each unordered pair contributes once to the coupling sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingProblem {
    n: usize,
    h: Vec<f64>,
    /// Row-major `n x n`, symmetric, zero diagonal.
    j: Vec<f64>,
}

impl IsingProblem {
    /// Builds a problem from fields and a dense row-major coupling matrix.
    pub fn new(h: Vec<f64>, j: Vec<f64>) -> Result<Self> {
        let n = h.len();
        if n == 0 {
            return Err(Error::invalid("Ising problem needs at least one spin"));
        }
        if j.len() != n * n {
            return Err(Error::invalid(format!(
                "coupling matrix has {} entries, expected {}",
                j.len(),
                n * n
            )));
        }
        for r in 0..n {
            if j[r * n + r] != 0.0 {
                return Err(Error::invalid(format!("J[{r}][{r}] must be zero")));
            }
            for c in (r + 1)..n {
                if j[r * n + c] != j[c * n + r] {
                    return Err(Error::invalid(format!(
                        "coupling matrix is not symmetric at ({r}, {c})"
                    )));
                }
            }
        }
        if h.iter().chain(j.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("Ising parameters must be finite"));
        }
        Ok(Self { n, h, j })
    }

    /// Builds a problem from `(i, j, J_ij)` triples; unspecified pairs are zero.
    pub fn from_pairs(h: Vec<f64>, pairs: &[(usize, usize, f64)]) -> Result<Self> {
        let n = h.len();
        let mut j = vec![0.0; n * n];
        let mut seen = vec![false; n * n];
        for &(a, b, v) in pairs {
            if a >= n || b >= n {
                return Err(Error::invalid(format!(
                    "pair ({a}, {b}) out of range for {n} spins"
                )));
            }
            if a == b {
                return Err(Error::invalid(format!("self-coupling ({a}, {a})")));
            }
            let (lo, hi) = (a.min(b), a.max(b));
            if seen[lo * n + hi] {
                return Err(Error::invalid(format!("pair ({lo}, {hi}) given twice")));
            }
            seen[lo * n + hi] = true;
            j[lo * n + hi] = v;
            j[hi * n + lo] = v;
        }
        Self::new(h, j)
    }

    /// Pure coupling problem with zero local fields.
    pub fn couplings_only(n: usize, pairs: &[(usize, usize, f64)]) -> Result<Self> {
        Self::from_pairs(vec![0.0; n], pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.j[i * self.n + j]
    }

    pub fn coupling_matrix(&self) -> &[f64] {
        &self.j
    }

    pub fn has_fields(&self) -> bool {
        self.h.iter().any(|&v| v != 0.0)
    }
}

pub fn ising_energy(problem: &IsingProblem, config: &SpinConfig) -> Result<f64> {
    if config.len() != problem.n {
        return Err(Error::invalid(format!(
            "configuration has {} spins, problem has {}",
            config.len(),
            problem.n
        )));
    }
    Ok(ising_energy_unchecked(problem, config.spins()))
}

pub(crate) fn ising_energy_unchecked(problem: &IsingProblem, s: &[i8]) -> f64 {
    let n = problem.n;
    let mut e = 0.0;
    for i in 0..n {
        let si = f64::from(s[i]);
        e -= problem.h[i] * si;
        let row = &problem.j[i * n..(i + 1) * n];
        for j in (i + 1)..n {
            e -= row[j] * si * f64::from(s[j]);
        }
    }
    e
}

/// QUBO objective `x^T Q x` over binary `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboProblem {
    n: usize,
    q: Vec<f64>,
}

impl QuboProblem {
    pub fn new(n: usize, q: Vec<f64>) -> Result<Self> {
        if n == 0 || q.len() != n * n {
            return Err(Error::invalid(format!(
                "QUBO matrix must be {n}x{n}, got {} entries",
                q.len()
            )));
        }
        for r in 0..n {
            for c in (r + 1)..n {
                if q[r * n + c] != q[c * n + r] {
                    return Err(Error::invalid(format!(
                        "QUBO matrix is not symmetric at ({r}, {c})"
                    )));
                }
            }
        }
        Ok(Self { n, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, bits: &[u8]) -> f64 {
        let n = self.n;
        let mut v = 0.0;
        for i in 0..n {
            for j in 0..n {
                v += self.q[i * n + j] * f64::from(bits[i]) * f64::from(bits[j]);
            }
        }
        v
    }
}

/// Rewrites a QUBO as an Ising problem under `x = (1 + s) / 2`.
///
/// Returns the problem and an offset with `x^T Q x = ising_energy(s) + offset`.
pub fn qubo_to_ising(q: &QuboProblem) -> Result<(IsingProblem, f64)> {
    let n = q.n;
    let mut h = vec![0.0; n];
    let mut j = vec![0.0; n * n];
    let mut offset = 0.0;
    for r in 0..n {
        let row = &q.q[r * n..(r + 1) * n];
        h[r] = -row.iter().sum::<f64>() / 2.0;
        offset += row[r] / 2.0;
        for c in 0..n {
            if c != r {
                offset += row[c] / 4.0;
                j[r * n + c] = -row[c] / 2.0;
            }
        }
    }
    Ok((IsingProblem::new(h, j)?, offset))
}

/// Product of all spins.
pub fn parity(config: &SpinConfig) -> Result<i8> {
    if config.is_empty() {
        return Err(Error::invalid("parity of an empty configuration"));
    }
    Ok(config.spins().iter().product())
}

/// Exact minimum of an energy function and every configuration attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundSet {
    pub min_energy: f64,
    /// Sorted by configuration index.
    pub configs: Vec<SpinConfig>,
}

/// Exhaustive search over all `2^n` configurations.
///
/// Configurations within [`DEGENERACY_TOL`] of the minimum are all returned.
/// The search space is split across rayon workers; the result does not
/// depend on the split.
pub fn enumerate_ground_states<F>(energy_fn: F, n: usize) -> Result<GroundSet>
where
    F: Fn(&SpinConfig) -> f64 + Sync,
{
    if n == 0 {
        return Err(Error::invalid("cannot enumerate zero spins"));
    }
    if n > MAX_ENUMERATION_SPINS {
        return Err(Error::Capacity {
            requested: n,
            limit: MAX_ENUMERATION_SPINS,
        });
    }
    let total = 1u64 << n;
    let chunk = 1u64 << n.saturating_sub(6).min(16);
    let chunks = total.div_ceil(chunk);

    let partials: Vec<(f64, Vec<(u64, f64)>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(total);
            let mut buf = SpinConfig::all_up(n);
            let mut best = f64::INFINITY;
            let mut cands: Vec<(u64, f64)> = Vec::new();
            for idx in start..end {
                buf.set_from_index(idx);
                let e = energy_fn(&buf);
                if e < best - DEGENERACY_TOL {
                    best = e;
                    cands.retain(|&(_, ce)| ce <= best + DEGENERACY_TOL);
                } else if e < best {
                    best = e;
                }
                if e <= best + DEGENERACY_TOL {
                    cands.push((idx, e));
                }
            }
            (best, cands)
        })
        .collect();

    let min_energy = partials
        .iter()
        .map(|(m, _)| *m)
        .fold(f64::INFINITY, f64::min);
    if !min_energy.is_finite() {
        return Err(Error::invalid("energy function returned non-finite values"));
    }
    let configs = partials
        .into_iter()
        .flat_map(|(_, c)| c)
        .filter(|&(_, e)| e <= min_energy + DEGENERACY_TOL)
        .map(|(idx, _)| SpinConfig::from_index(idx, n))
        .collect();
    Ok(GroundSet {
        min_energy,
        configs,
    })
}
