//! Noisy annealing of the tile as a network of parametric oscillators.
//!
//! Each oscillator carries a real amplitude `c` whose sign is the spin. A
//! positive amplitude reads as spin up, bit 1, at carrier phase pi. The
//! network holds the four logical spins, two ancillas and a reference
//! oscillator that stands in for the coupler's pumped offset source.
//! Amplitudes follow
//!
//! ```text
//! dc = [(p(t) - 1 - c^2) c - beta dE/dc] dt + eta dW
//! E  = sum_i J_i c_ref c_i - (J_a1 c_5 + J_a2 c_6 + C) c_1 c_2 c_3 c_4
//! ```
//!
//! integrated with Euler-Maruyama while the pump `p` ramps through the
//! bifurcation at `p = 1`. Field terms couple through `c_ref`, so both global
//! orientations of a field-selected state are reachable; logical readout is
//! the raw sign of each amplitude.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::K_B;
use crate::error::{Error, Result};
use crate::rng::trial_rng;
use crate::tile::{TileConfig, TileParams};

/// Number of simulated oscillators: 4 logical, 2 ancilla, 1 reference.
pub const OSCILLATORS: usize = 7;
const REF: usize = 6;

/// Signed coupling `j_max cos(delta_theta)` from a pump phase difference.
pub fn coupling_from_phase(j_max: f64, delta_theta: f64) -> f64 {
    j_max * delta_theta.cos()
}

/// Johnson current noise `sqrt(4 R T k_B)`.
pub fn johnson_noise_amplitude(r: f64, t: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!("resistance must be positive, got {r}")));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("temperature must be >= 0, got {t}")));
    }
    Ok((4.0 * r * t * K_B).sqrt())
}

/// Pump phases programming the tile couplings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingProgram {
    /// Pump phase of each oscillator: four logical then two ancillas (rad).
    pub pump_phases: [f64; 6],
    #[serde(default)]
    pub coupler_offset_phase: f64,
    /// Logical coupling magnitude.
    pub j_max: f64,
    /// Ancilla magnitude relative to `j_max`.
    #[serde(default = "default_ancilla_ratio")]
    pub ancilla_ratio: f64,
    pub c_cnst: f64,
}

fn default_ancilla_ratio() -> f64 {
    2.0
}

impl CouplingProgram {
    pub fn new(pump_phases: [f64; 6], j_max: f64, c_cnst: f64) -> Self {
        Self {
            pump_phases,
            coupler_offset_phase: 0.0,
            j_max,
            ancilla_ratio: default_ancilla_ratio(),
            c_cnst,
        }
    }

    /// Field-free logical spins with fully coupled ancillas: every
    /// even-parity state is a ground state.
    pub fn even_parity() -> Self {
        let h = PI / 2.0;
        Self::new([h, h, h, h, 0.0, 0.0], 2.0, 20.0)
    }

    /// Alternating logical fields with ancillas in quadrature: ground
    /// states 0101 and 1010.
    pub fn alternating() -> Self {
        let h = PI / 2.0;
        Self::new([0.0, PI, 0.0, PI, h, h], 2.0, 20.0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self
            .pump_phases
            .iter()
            .chain([&self.coupler_offset_phase, &self.j_max, &self.ancilla_ratio, &self.c_cnst])
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("coupling program values must be finite"));
        }
        if self.j_max < 0.0 {
            return Err(Error::invalid("j_max must be >= 0"));
        }
        Ok(())
    }
}

pub fn effective_tile_couplings(program: &CouplingProgram) -> TileParams {
    let dphi = |k: usize| program.pump_phases[k] - program.coupler_offset_phase;
    let j_anc = program.ancilla_ratio * program.j_max;
    TileParams {
        j: [0, 1, 2, 3].map(|k| coupling_from_phase(program.j_max, dphi(k))),
        j_a1: coupling_from_phase(j_anc, dphi(4)),
        j_a2: coupling_from_phase(j_anc, dphi(5)),
        c_cnst: program.c_cnst,
    }
}

/// Pump ramp and integration grid, in units of the oscillator relaxation time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnealSchedule {
    pub duration: f64,
    pub dt: f64,
    pub p_start: f64,
    pub p_end: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            duration: 50.0,
            dt: 1e-2,
            p_start: 0.5,
            p_end: 2.0,
        }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<usize> {
        if !(self.dt > 0.0) || !(self.duration > 0.0) {
            return Err(Error::invalid("duration and dt must be positive"));
        }
        let steps = self.duration / self.dt;
        let rounded = steps.round();
        if (steps - rounded).abs() > 1e-9 * rounded.max(1.0) || rounded < 10.0 {
            return Err(Error::invalid(format!(
                "duration / dt must be an integer >= 10, got {steps}"
            )));
        }
        if !(self.p_start < 1.0 && self.p_end > 1.0) {
            return Err(Error::invalid(format!(
                "pump must ramp through 1: p_start = {}, p_end = {}",
                self.p_start, self.p_end
            )));
        }
        Ok(rounded as usize)
    }

    /// Linear pump ramp.
    pub fn pump(&self, t: f64) -> f64 {
        self.p_start + (self.p_end - self.p_start) * (t / self.duration).clamp(0.0, 1.0)
    }

    /// Steady-state amplitude of a free oscillator at the end of the ramp.
    pub fn final_amplitude(&self) -> f64 {
        (self.p_end - 1.0).sqrt()
    }

    pub fn saturation(&self) -> f64 {
        1.5 * self.final_amplitude()
    }

    pub fn settle_threshold(&self) -> f64 {
        0.5 * self.final_amplitude()
    }
}

/// Oscillator constants that are not part of the schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OscillatorModel {
    /// Energy-gradient coupling strength.
    pub beta: f64,
    /// Standard deviation of the random initial amplitudes.
    pub init_std: f64,
    /// Keep every n-th step of the trajectory; 0 keeps only the final state.
    pub record_every: usize,
}

impl Default for OscillatorModel {
    fn default() -> Self {
        Self {
            beta: 0.2,
            init_std: 0.01,
            record_every: 0,
        }
    }
}

/// Langevin noise strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealNoise {
    pub eta: f64,
}

impl Default for AnnealNoise {
    fn default() -> Self {
        Self { eta: 0.05 }
    }
}

impl AnnealNoise {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::invalid(format!("eta must be finite and >= 0, got {eta}")));
        }
        Ok(Self { eta })
    }

    /// Scales the Johnson current noise of a resistor into an SDE amplitude.
    pub fn from_johnson(r: f64, t: f64, eta_per_amp: f64) -> Result<Self> {
        Self::new(johnson_noise_amplitude(r, t)? * eta_per_amp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorState {
    pub t: f64,
    pub c: [f64; OSCILLATORS],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialOutcome {
    Settled(TileConfig),
    Unsettled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub outcome: TrialOutcome,
    pub final_state: OscillatorState,
    pub trajectory: Vec<OscillatorState>,
}

impl TrialResult {
    pub fn config(&self) -> Option<TileConfig> {
        match self.outcome {
            TrialOutcome::Settled(c) => Some(c),
            TrialOutcome::Unsettled => None,
        }
    }

    /// Logical spins measured relative to the reference oscillator.
    pub fn referenced_config(&self) -> Option<TileConfig> {
        let c = self.config()?;
        let r = if self.final_state.c[REF] >= 0.0 { 1 } else { -1 };
        Some(TileConfig {
            logical: c.logical.map(|s| s * r),
            ancilla: c.ancilla,
        })
    }
}

fn drift(params: &TileParams, beta: f64, p: f64, c: &[f64; OSCILLATORS], out: &mut [f64; OSCILLATORS]) {
    let prod = c[0] * c[1] * c[2] * c[3];
    let k = params.j_a1 * c[4] + params.j_a2 * c[5] + params.c_cnst;
    let others = [
        c[1] * c[2] * c[3],
        c[0] * c[2] * c[3],
        c[0] * c[1] * c[3],
        c[0] * c[1] * c[2],
    ];
    let mut grad = [0.0; OSCILLATORS];
    for i in 0..4 {
        grad[i] = params.j[i] * c[REF] - k * others[i];
    }
    grad[4] = -params.j_a1 * prod;
    grad[5] = -params.j_a2 * prod;
    grad[REF] = (0..4).map(|i| params.j[i] * c[i]).sum();
    for i in 0..OSCILLATORS {
        out[i] = (p - 1.0 - c[i] * c[i]) * c[i] - beta * grad[i];
    }
}

/// One anneal from small random amplitudes.
pub fn simulate_trial(
    program: &CouplingProgram,
    schedule: &AnnealSchedule,
    model: &OscillatorModel,
    noise: AnnealNoise,
    seed: u64,
) -> Result<TrialResult> {
    simulate_stream(program, schedule, model, noise, seed, 0)
}

fn simulate_stream(
    program: &CouplingProgram,
    schedule: &AnnealSchedule,
    model: &OscillatorModel,
    noise: AnnealNoise,
    seed: u64,
    stream: u64,
) -> Result<TrialResult> {
    program.validate()?;
    let steps = schedule.validate()?;
    let params = effective_tile_couplings(program);
    let mut rng = trial_rng(seed, stream);
    let init = Normal::new(0.0, model.init_std).map_err(|e| Error::invalid(e.to_string()))?;
    let mut c = [0.0; OSCILLATORS];
    for v in &mut c {
        *v = init.sample(&mut rng);
    }
    integrate(&params, schedule, model, noise, c, steps, &mut rng)
}

fn integrate<R: Rng>(
    params: &TileParams,
    schedule: &AnnealSchedule,
    model: &OscillatorModel,
    noise: AnnealNoise,
    mut c: [f64; OSCILLATORS],
    steps: usize,
    rng: &mut R,
) -> Result<TrialResult> {
    let dt = schedule.dt;
    let sat = schedule.saturation();
    let kick = noise.eta * dt.sqrt();
    let mut d = [0.0; OSCILLATORS];
    let mut trajectory = Vec::new();
    if model.record_every > 0 {
        trajectory.push(OscillatorState { t: 0.0, c });
    }
    for step in 0..steps {
        let t = step as f64 * dt;
        drift(params, model.beta, schedule.pump(t), &c, &mut d);
        for i in 0..OSCILLATORS {
            let w: f64 = if kick > 0.0 {
                StandardNormal.sample(rng)
            } else {
                0.0
            };
            c[i] = (c[i] + d[i] * dt + kick * w).clamp(-sat, sat);
            if !c[i].is_finite() {
                return Err(Error::IntegrationBlowup { t: t + dt, dt });
            }
        }
        if model.record_every > 0 && (step + 1) % model.record_every == 0 {
            trajectory.push(OscillatorState {
                t: (step + 1) as f64 * dt,
                c,
            });
        }
    }
    let final_state = OscillatorState {
        t: steps as f64 * dt,
        c,
    };
    let thresh = schedule.settle_threshold();
    let outcome = if c.iter().all(|v| v.abs() > thresh) {
        let s = |v: f64| if v > 0.0 { 1 } else { -1 };
        TrialOutcome::Settled(TileConfig {
            logical: [s(c[0]), s(c[1]), s(c[2]), s(c[3])],
            ancilla: [s(c[4]), s(c[5])],
        })
    } else {
        TrialOutcome::Unsettled
    };
    Ok(TrialResult {
        outcome,
        final_state,
        trajectory,
    })
}

/// Deterministic anneal from a given initial state, without noise.
pub fn simulate_from(
    program: &CouplingProgram,
    schedule: &AnnealSchedule,
    model: &OscillatorModel,
    initial: [f64; OSCILLATORS],
) -> Result<TrialResult> {
    program.validate()?;
    let steps = schedule.validate()?;
    let params = effective_tile_couplings(program);
    let mut rng = trial_rng(0, 0);
    integrate(
        &params,
        schedule,
        model,
        AnnealNoise { eta: 0.0 },
        initial,
        steps,
        &mut rng,
    )
}

/// Counts per basis state of a fixed bit width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateHistogram {
    /// Bits per state label: 4 for logical states, 6 with ancillas.
    pub width: u8,
    /// `counts[s]` for every state `s < 2^width`.
    pub counts: Vec<u64>,
    /// Total trials, settled or not.
    pub trials: u64,
    pub unsettled: u64,
    pub seed: u64,
}

impl StateHistogram {
    pub fn new(width: u8, seed: u64) -> Self {
        Self {
            width,
            counts: vec![0; 1 << width],
            trials: 0,
            unsettled: 0,
            seed,
        }
    }

    pub fn record(&mut self, state: Option<u8>) {
        self.trials += 1;
        match state {
            Some(s) => self.counts[s as usize] += 1,
            None => self.unsettled += 1,
        }
    }

    pub fn settled(&self) -> u64 {
        self.trials - self.unsettled
    }

    pub fn probability(&self, state: u8) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.counts[state as usize] as f64 / self.trials as f64
        }
    }

    /// States with a nonzero count, ascending.
    pub fn support(&self) -> Vec<u8> {
        (0..self.counts.len())
            .filter(|&s| self.counts[s] > 0)
            .map(|s| s as u8)
            .collect()
    }

    pub fn label(&self, state: u8) -> String {
        format!("{:0width$b}", state, width = self.width as usize)
    }

    /// Folds each state onto the representative whose first spin is up.
    pub fn canonical(&self) -> Self {
        let top = 1u8 << (self.width - 1);
        // global flip acts on the four logical bits only
        let flip_mask: u8 = if self.width == 4 { 0xF } else { 0xF << (self.width - 4) };
        let mut out = Self {
            counts: vec![0; self.counts.len()],
            ..self.clone()
        };
        for (s, &n) in self.counts.iter().enumerate() {
            let s = s as u8;
            let rep = if s & top != 0 { s } else { s ^ flip_mask };
            out.counts[rep as usize] += n;
        }
        out
    }
}

/// Independent anneals with per-trial streams split from `master_seed`.
///
/// Runs on the current rayon pool; results do not depend on its size.
pub fn run_trial_results(
    program: &CouplingProgram,
    schedule: &AnnealSchedule,
    model: &OscillatorModel,
    noise: AnnealNoise,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<TrialResult>> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    program.validate()?;
    schedule.validate()?;
    let model = OscillatorModel {
        record_every: 0,
        ..model.clone()
    };
    (0..trials as u64)
        .into_par_iter()
        .map(|t| simulate_stream(program, schedule, &model, noise, master_seed, t))
        .collect()
}

/// Histogram of logical 4-bit outcomes.
pub fn run_trials(
    program: &CouplingProgram,
    schedule: &AnnealSchedule,
    model: &OscillatorModel,
    noise: AnnealNoise,
    trials: usize,
    master_seed: u64,
) -> Result<StateHistogram> {
    let results = run_trial_results(program, schedule, model, noise, trials, master_seed)?;
    Ok(histogram(&results, master_seed))
}

pub fn histogram(results: &[TrialResult], seed: u64) -> StateHistogram {
    let mut h = StateHistogram::new(4, seed);
    for r in results {
        h.record(r.config().map(|c| c.logical_index()));
    }
    h
}

/// Phase of the single-bin DFT of `samples` at `f0`.
///
/// Sample `k` is taken at time `k dt`. The window must span at least four
/// periods of `f0`.
pub fn dft_phase(samples: &[f64], dt: f64, f0: f64) -> Result<f64> {
    if !(dt > 0.0) || !(f0 > 0.0) {
        return Err(Error::invalid("dt and f0 must be positive"));
    }
    let periods = samples.len() as f64 * dt * f0;
    if periods < 4.0 {
        return Err(Error::InsufficientData(format!(
            "window spans {periods:.3} periods of f0, need at least 4"
        )));
    }
    let w = 2.0 * PI * f0 * dt;
    let (mut re, mut im) = (0.0, 0.0);
    for (k, &x) in samples.iter().enumerate() {
        let (s, c) = (w * k as f64).sin_cos();
        re += x * c;
        im -= x * s;
    }
    Ok(im.atan2(re))
}

/// Carrier of an oscillator with amplitude `c`, sampled at `k dt`.
///
/// Spin up (bit 1) rides at phase pi, so the carrier is `-c cos(2 pi f0 t)`.
pub fn carrier(c: f64, f0: f64, dt: f64, samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|k| -c * (2.0 * PI * f0 * k as f64 * dt).cos())
        .collect()
}

/// Bit for a measured phase: 1 near pi, 0 near 0.
pub fn classify_state(phase: f64) -> Result<u8> {
    if !phase.is_finite() {
        return Err(Error::invalid("phase must be finite"));
    }
    // wrap to (-pi, pi]
    let mut p = phase.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    let d0 = p.abs();
    if (d0 - PI / 2.0).abs() <= 1e-12 {
        return Err(Error::AmbiguousPhase { phase });
    }
    Ok(u8::from(d0 > PI / 2.0))
}
