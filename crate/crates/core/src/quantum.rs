//! Quantum model of the tile on the 64-dimensional six-spin space.
//!
//! ```text
//! H = sum_i J_i Z_i - (J_a1 X_5 + J_a2 X_6 + J_C) Z_1 Z_2 Z_3 Z_4 + U
//! ```
//!
//! Basis states are 6-bit integers with spin 1 most significant and spins 5
//! and 6 the ancillas. `Z` is diagonal with eigenvalue `2b - 1` on bit `b`,
//! matching the crate-wide bit convention. `U` is an optional diagonal
//! random matrix.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::tile::TileParams;

pub const DIM: usize = 64;
pub const LOGICAL_STATES: usize = 16;

/// Relative degeneracy tolerance, scaled by the spectral range.
pub const DEGENERACY_REL_TOL: f64 = 1e-9;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;
const RESIDUAL_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix(DMatrix<f64>);

impl HamiltonianMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Wraps an arbitrary 64x64 matrix, checking symmetry.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != DIM || m.ncols() != DIM {
            return Err(Error::invalid(format!(
                "Hamiltonian must be {DIM}x{DIM}, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.amax().max(f64::MIN_POSITIVE);
        for r in 0..DIM {
            for c in (r + 1)..DIM {
                if (m[(r, c)] - m[(c, r)]).abs() > 1e-12 * scale {
                    return Err(Error::invalid(format!(
                        "Hamiltonian not symmetric at ({r}, {c})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn add_diagonal(&mut self, diag: &[f64]) {
        for (i, d) in diag.iter().enumerate() {
            self.0[(i, i)] += d;
        }
    }
}

fn pauli_z() -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1.0]))
}

fn pauli_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// Kronecker product over the six sites, site 1 outermost.
fn site_product(ops: [&DMatrix<f64>; 6]) -> DMatrix<f64> {
    ops[1..]
        .iter()
        .fold(ops[0].clone(), |acc, op| acc.kronecker(op))
}

fn single_site(op: &DMatrix<f64>, site: usize) -> DMatrix<f64> {
    let id = DMatrix::<f64>::identity(2, 2);
    let mut ops = [&id; 6];
    ops[site] = op;
    site_product(ops)
}

pub fn build_hamiltonian(params: &TileParams) -> HamiltonianMatrix {
    let z = pauli_z();
    let x = pauli_x();
    let id = DMatrix::<f64>::identity(2, 2);

    let mut h = DMatrix::<f64>::zeros(DIM, DIM);
    for (site, j) in params.j.iter().enumerate() {
        h += single_site(&z, site) * *j;
    }
    let plaquette = site_product([&z, &z, &z, &z, &id, &id]);
    let coupler = single_site(&x, 4) * params.j_a1
        + single_site(&x, 5) * params.j_a2
        + DMatrix::<f64>::identity(DIM, DIM) * params.c_cnst;
    h -= &coupler * &plaquette;
    // coupler and plaquette commute, so the product is already symmetric;
    // averaging removes rounding asymmetry.
    let sym = (&h + h.transpose()) * 0.5;
    HamiltonianMatrix(sym)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStates {
    pub e_min: f64,
    /// Dimension of the ground eigenspace.
    pub degeneracy: usize,
    /// Squared amplitude of each basis state in the ground eigenspace, summing to 1.
    pub weights: Vec<f64>,
    /// Next distinct eigenvalue above the ground manifold, if any.
    pub first_excited: Option<f64>,
}

impl GroundStates {
    pub fn gap(&self) -> Option<f64> {
        self.first_excited.map(|e| e - self.e_min)
    }

    /// Marginal over the four logical spins, indexed by the 4-bit logical state.
    pub fn logical_marginal(&self) -> [f64; LOGICAL_STATES] {
        let mut out = [0.0; LOGICAL_STATES];
        for (b, w) in self.weights.iter().enumerate() {
            out[b >> 2] += w;
        }
        out
    }
}

/// Lowest eigenvalue and the basis-state weights of its eigenspace.
///
/// `tol` defaults to [`DEGENERACY_REL_TOL`] times the spectral range.
pub fn ground_states(h: &HamiltonianMatrix, tol: Option<f64>) -> Result<GroundStates> {
    let m = h.matrix();
    let eig = m
        .clone()
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or(Error::Eigensolver {
            iterations: EIGEN_MAX_ITER,
            residual: f64::NAN,
        })?;

    let norm = m.norm();
    let mut worst = 0.0f64;
    for k in 0..DIM {
        let v = eig.eigenvectors.column(k);
        let r = (m * v - v * eig.eigenvalues[k]).norm();
        worst = worst.max(r);
    }
    if worst > RESIDUAL_REL_TOL * norm.max(f64::MIN_POSITIVE) && worst > 0.0 {
        return Err(Error::Eigensolver {
            iterations: EIGEN_MAX_ITER,
            residual: worst,
        });
    }

    let e_min = eig.eigenvalues.min();
    let e_max = eig.eigenvalues.max();
    let tol = tol.unwrap_or(DEGENERACY_REL_TOL * (e_max - e_min));

    let mut weights = vec![0.0; DIM];
    let mut degeneracy = 0;
    let mut first_excited: Option<f64> = None;
    for k in 0..DIM {
        let e = eig.eigenvalues[k];
        if e - e_min <= tol {
            degeneracy += 1;
            for (b, w) in weights.iter_mut().enumerate() {
                let a = eig.eigenvectors[(b, k)];
                *w += a * a;
            }
        } else {
            first_excited = Some(first_excited.map_or(e, |f| f.min(e)));
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(GroundStates {
        e_min,
        degeneracy,
        weights,
        first_excited,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NoiseDistribution {
    /// Uniform on `[-1, 1)`.
    #[default]
    Uniform,
    /// Standard normal.
    Normal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub thermal_coefficient: f64,
    #[serde(default)]
    pub distribution: NoiseDistribution,
    #[serde(default)]
    pub seed: u64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self {
            thermal_coefficient: 0.0,
            distribution: NoiseDistribution::Uniform,
            seed: 0,
        }
    }

    pub fn new(thermal_coefficient: f64, distribution: NoiseDistribution, seed: u64) -> Result<Self> {
        if !(thermal_coefficient >= 0.0) || !thermal_coefficient.is_finite() {
            return Err(Error::invalid(format!(
                "thermal coefficient must be finite and >= 0, got {thermal_coefficient}"
            )));
        }
        Ok(Self {
            thermal_coefficient,
            distribution,
            seed,
        })
    }

    fn diagonal<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..DIM)
            .map(|_| {
                let draw: f64 = match self.distribution {
                    NoiseDistribution::Uniform => rng.random_range(-1.0..1.0),
                    NoiseDistribution::Normal => StandardNormal.sample(rng),
                };
                self.thermal_coefficient * draw
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDistribution {
    pub probabilities: [f64; LOGICAL_STATES],
}

impl StateDistribution {
    /// States with probability above `threshold`, in ascending order.
    pub fn support(&self, threshold: f64) -> Vec<u8> {
        (0..LOGICAL_STATES as u8)
            .filter(|&s| self.probabilities[s as usize] > threshold)
            .collect()
    }

    /// Averages each state with its complement.
    pub fn symmetrize_global_flip(&self) -> Self {
        let mut p = [0.0; LOGICAL_STATES];
        for (s, v) in p.iter_mut().enumerate() {
            *v = 0.5 * (self.probabilities[s] + self.probabilities[s ^ 0xF]);
        }
        Self { probabilities: p }
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// 4-bit label of a logical state, spin 1 leftmost.
pub fn logical_label(state: u8) -> String {
    format!("{:04b}", state)
}

fn trial_marginal(
    params: &TileParams,
    noise: &NoiseSpec,
    stream: u64,
) -> Result<[f64; LOGICAL_STATES]> {
    let mut h = build_hamiltonian(params);
    if noise.thermal_coefficient > 0.0 {
        let mut rng = trial_rng(noise.seed, stream);
        h.add_diagonal(&noise.diagonal(&mut rng));
    }
    Ok(ground_states(&h, None)?.logical_marginal())
}

fn accumulate(parts: Vec<[f64; LOGICAL_STATES]>) -> StateDistribution {
    let n = parts.len() as f64;
    let mut p = [0.0; LOGICAL_STATES];
    for part in &parts {
        for (acc, v) in p.iter_mut().zip(part) {
            *acc += v;
        }
    }
    for v in &mut p {
        *v /= n;
    }
    StateDistribution { probabilities: p }
}

/// Trial-averaged logical ground-state distribution under fresh diagonal noise.
pub fn logical_distribution(
    params: &TileParams,
    noise: &NoiseSpec,
    trials: usize,
) -> Result<StateDistribution> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    if noise.thermal_coefficient == 0.0 {
        // every trial is identical
        return Ok(accumulate(vec![trial_marginal(params, noise, 0)?]));
    }
    let parts = (0..trials as u64)
        .into_par_iter()
        .map(|t| trial_marginal(params, noise, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(accumulate(parts))
}

/// Default field grid: every sign pattern at magnitudes 0 and `J_C / 4`.
pub fn default_sweep(j_c: f64) -> Vec<[f64; 4]> {
    let mut out = Vec::with_capacity(32);
    for mag in [0.0, j_c / 4.0] {
        for signs in 0u8..16 {
            let mut v = [0.0; 4];
            for (i, f) in v.iter_mut().enumerate() {
                let up = (signs >> (3 - i)) & 1 == 1;
                *f = if up { mag } else { -mag };
            }
            out.push(v);
        }
    }
    out
}

/// Distribution accumulated over a list of logical field vectors.
///
/// Trial `t` uses `fields[t % fields.len()]` with its own noise stream.
pub fn sweep_distribution(
    base: &TileParams,
    fields: &[[f64; 4]],
    noise: &NoiseSpec,
    trials: usize,
) -> Result<StateDistribution> {
    if fields.is_empty() {
        return Err(Error::invalid("field sweep is empty"));
    }
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let trials = trials.max(fields.len());
    let parts = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut p = base.clone();
            p.j = fields[t as usize % fields.len()];
            trial_marginal(&p, noise, t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(accumulate(parts))
}

/// Smallest gap above the noise-free ground manifold over a field sweep.
pub fn min_sweep_gap(base: &TileParams, fields: &[[f64; 4]]) -> Result<f64> {
    let mut gap = f64::INFINITY;
    for f in fields {
        let mut p = base.clone();
        p.j = *f;
        if let Some(g) = ground_states(&build_hamiltonian(&p), None)?.gap() {
            gap = gap.min(g);
        }
    }
    Ok(gap)
}
