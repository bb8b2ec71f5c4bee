//! TOML input files for the command-line runs.
//!
//! Every file is parsed strictly: unknown keys are rejected, and errors carry
//! the file name, the offending field and the line where it sits.

use std::f64::consts::PI;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::anneal::{AnnealNoise, AnnealSchedule, CouplingProgram, OscillatorModel};
use crate::circuit::{
    calibrate_resonator, JunctionParams, ResonatorParams, SquidParams, DEFAULT_BROWNIAN_DT,
};
use crate::error::{Error, Result};
use crate::quantum::{default_sweep, NoiseDistribution};
use crate::spin::IsingProblem;
use crate::tile::TileParams;

fn parse_error(source: &str, field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source.to_string(),
        field: field.into(),
        message: message.into(),
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Best guess at the key a TOML error points to.
fn field_of(text: &str, err: &toml::de::Error) -> String {
    let msg = err.message();
    if let Some(rest) = msg.split('`').nth(1) {
        if msg.contains("field `") {
            return rest.to_string();
        }
    }
    if let Some(span) = err.span() {
        let start = text[..span.start.min(text.len())]
            .rfind('\n')
            .map_or(0, |p| p + 1);
        let line = &text[start..];
        let line = line.lines().next().unwrap_or("");
        if let Some((key, _)) = line.split_once('=') {
            return key.trim().to_string();
        }
        if line.trim_start().starts_with('[') {
            return line.trim().trim_matches(|c| c == '[' || c == ']').to_string();
        }
    }
    "<document>".to_string()
}

fn from_toml<T: DeserializeOwned>(text: &str, source: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let field = field_of(text, &e);
        let message = match e.span() {
            Some(span) => format!("line {}: {}", line_of(text, span.start), e.message()),
            None => e.message().to_string(),
        };
        parse_error(source, field, message)
    })
}

fn read(path: &Path) -> Result<(String, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok((text, path.display().to_string()))
}

/// Attaches a field label to a validation failure.
fn labelled<T>(source: &str, field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::InvalidArgument(m) | Error::InfeasibleCalibration(m) => parse_error(source, field, m),
        other => other,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    #[serde(default)]
    h: Option<Vec<f64>>,
    #[serde(rename = "J", default)]
    j: Option<toml::Spanned<toml::Value>>,
}

fn number(v: &toml::Value) -> Option<f64> {
    match v {
        toml::Value::Float(f) => Some(*f),
        toml::Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

/// Parses an Ising problem: `n`, optional `h`, and `J` as either a dense
/// row-major `n*n` array or a list of `[i, j, value]` triples.
pub fn parse_problem(text: &str, source: &str) -> Result<IsingProblem> {
    let raw: RawProblem = from_toml(text, source)?;
    let n = raw.n;
    if n == 0 {
        return Err(parse_error(source, "n", "must be at least 1"));
    }
    let h = raw.h.unwrap_or_else(|| vec![0.0; n]);
    if h.len() != n {
        return Err(parse_error(
            source,
            "h",
            format!("has {} entries, expected n = {n}", h.len()),
        ));
    }
    let Some(spanned) = raw.j else {
        return labelled(source, "J", IsingProblem::new(h, vec![0.0; n * n]));
    };
    let line = line_of(text, spanned.span().start);
    let bad = |m: String| parse_error(source, "J", format!("line {line}: {m}"));
    let toml::Value::Array(items) = spanned.get_ref() else {
        return Err(bad("expected an array".into()));
    };
    let nested = items.iter().any(|v| v.is_array());
    let problem = if nested {
        let mut pairs = Vec::with_capacity(items.len());
        for (k, item) in items.iter().enumerate() {
            let triple = item
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| bad(format!("entry {k} is not an [i, j, value] triple")))?;
            let idx = |v: &toml::Value| {
                v.as_integer()
                    .filter(|&i| i >= 0)
                    .map(|i| i as usize)
                    .ok_or_else(|| bad(format!("entry {k}: indices must be non-negative integers")))
            };
            let value = number(&triple[2])
                .ok_or_else(|| bad(format!("entry {k}: value must be a number")))?;
            pairs.push((idx(&triple[0])?, idx(&triple[1])?, value));
        }
        IsingProblem::from_pairs(h, &pairs)
    } else {
        let dense = items
            .iter()
            .map(number)
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| bad("dense entries must be numbers".into()))?;
        IsingProblem::new(h, dense)
    };
    problem.map_err(|e| match e {
        Error::InvalidArgument(m) => bad(m),
        other => other,
    })
}

pub fn load_problem(path: &Path) -> Result<IsingProblem> {
    let (text, source) = read(path)?;
    parse_problem(&text, &source)
}

/// How the quantum run chooses logical fields.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Use the tile's own fields for every trial.
    #[default]
    Fixed,
    /// Cycle through the default grid at `c_cnst / 4`.
    Default,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSection {
    #[serde(default)]
    pub thermal_coefficient: f64,
    #[serde(default)]
    pub distribution: NoiseDistribution,
    #[serde(default)]
    pub sweep: SweepMode,
    /// Explicit field vectors; overrides `sweep`.
    #[serde(default)]
    pub fields: Option<Vec<[f64; 4]>>,
}

impl Default for QuantumSection {
    fn default() -> Self {
        Self {
            thermal_coefficient: 0.0,
            distribution: NoiseDistribution::Uniform,
            sweep: SweepMode::Fixed,
            fields: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTile {
    #[serde(default)]
    j: Option<[f64; 4]>,
    #[serde(default)]
    j_a: Option<f64>,
    #[serde(default)]
    j_a1: Option<f64>,
    #[serde(default)]
    j_a2: Option<f64>,
    c_cnst: f64,
    #[serde(default)]
    clamp: Option<[i8; 2]>,
    #[serde(default)]
    quantum: Option<QuantumSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TileFile {
    pub params: TileParams,
    /// Ancilla values held fixed during enumeration.
    pub clamp: Option<[i8; 2]>,
    pub quantum: QuantumSection,
}

impl TileFile {
    /// Field vectors for the quantum run.
    pub fn sweep_fields(&self) -> Vec<[f64; 4]> {
        match (&self.quantum.fields, self.quantum.sweep) {
            (Some(f), _) => f.clone(),
            (None, SweepMode::Default) => default_sweep(self.params.c_cnst),
            (None, SweepMode::Fixed) => vec![self.params.j],
        }
    }
}

/// Tile parameters: `j = [..4]`, `j_a` (or `j_a1` and `j_a2`), `c_cnst`,
/// optional `clamp = [a1, a2]` and a `[quantum]` table.
pub fn parse_tile(text: &str, source: &str) -> Result<TileFile> {
    let raw: RawTile = from_toml(text, source)?;
    let (j_a1, j_a2) = match (raw.j_a, raw.j_a1, raw.j_a2) {
        (Some(a), None, None) => (a, a),
        (None, Some(a1), Some(a2)) => (a1, a2),
        (None, None, None) => (0.0, 0.0),
        _ => {
            return Err(parse_error(
                source,
                "j_a",
                "give either j_a or both j_a1 and j_a2",
            ))
        }
    };
    let params = TileParams {
        j: raw.j.unwrap_or([0.0; 4]),
        j_a1,
        j_a2,
        c_cnst: raw.c_cnst,
    };
    let finite = params
        .j
        .iter()
        .chain([&params.j_a1, &params.j_a2, &params.c_cnst])
        .all(|v| v.is_finite());
    if !finite {
        return Err(parse_error(source, "j", "tile parameters must be finite"));
    }
    if let Some(c) = raw.clamp {
        if c.iter().any(|&s| s != 1 && s != -1) {
            return Err(parse_error(source, "clamp", "ancilla values must be -1 or +1"));
        }
    }
    let quantum = raw.quantum.unwrap_or_default();
    if !(quantum.thermal_coefficient >= 0.0) || !quantum.thermal_coefficient.is_finite() {
        return Err(parse_error(
            source,
            "quantum.thermal_coefficient",
            "must be finite and >= 0",
        ));
    }
    if quantum.fields.as_ref().is_some_and(|f| f.is_empty()) {
        return Err(parse_error(source, "quantum.fields", "must not be empty"));
    }
    Ok(TileFile {
        params,
        clamp: raw.clamp,
        quantum,
    })
}

pub fn load_tile(path: &Path) -> Result<TileFile> {
    let (text, source) = read(path)?;
    parse_tile(&text, &source)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorSection {
    /// Bare resonance frequency (Hz).
    pub f_r_hz: f64,
    /// Shunt capacitance (F).
    pub c_s: f64,
    /// Resonator inductance (H); calibrated from `target_f0_hz` when absent.
    #[serde(default)]
    pub l_r: Option<f64>,
    #[serde(default)]
    pub target_f0_hz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub i_start: f64,
    pub i_stop: f64,
    pub points: usize,
    /// Flux per unit bias current (Wb/A).
    pub current_to_flux: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IvSection {
    pub i_start: f64,
    pub i_stop: f64,
    pub points: usize,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_brownian_dt")]
    pub dt_eff: f64,
}

fn default_brownian_dt() -> f64 {
    DEFAULT_BROWNIAN_DT
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    #[serde(default)]
    squid: Option<SquidParams>,
    #[serde(default)]
    resonator: Option<ResonatorSection>,
    #[serde(default)]
    sweep: Option<SweepSection>,
    #[serde(default)]
    junction: Option<JunctionParams>,
    #[serde(default)]
    iv: Option<IvSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitFile {
    pub squid: SquidParams,
    /// Resolved resonator, calibrated if requested.
    pub resonator: Option<ResonatorParams>,
    pub sweep: Option<SweepSection>,
    pub junction: Option<JunctionParams>,
    pub iv: Option<IvSection>,
}

/// Circuit description with optional `[squid]`, `[resonator]`, `[sweep]`,
/// `[junction]` and `[iv]` tables. The SQUID defaults to the reference device.
pub fn parse_circuit(text: &str, source: &str) -> Result<CircuitFile> {
    let raw: RawCircuit = from_toml(text, source)?;
    let squid = match raw.squid {
        Some(s) => labelled(source, "squid", SquidParams::new(s.l1, s.l2, s.i_c1, s.i_c2))?,
        None => SquidParams::reference(),
    };
    let resonator = match raw.resonator {
        None => None,
        Some(r) => {
            let omega_r = 2.0 * PI * r.f_r_hz;
            let l_r = match (r.l_r, r.target_f0_hz) {
                (Some(l), None) => l,
                (None, Some(f0)) => labelled(
                    source,
                    "resonator.target_f0_hz",
                    calibrate_resonator(2.0 * PI * f0, omega_r, &squid, squid.l1),
                )?,
                _ => {
                    return Err(parse_error(
                        source,
                        "resonator",
                        "give exactly one of l_r and target_f0_hz",
                    ))
                }
            };
            Some(labelled(
                source,
                "resonator",
                ResonatorParams::new(omega_r, l_r, r.c_s),
            )?)
        }
    };
    if let Some(s) = raw.sweep {
        if s.points == 0 {
            return Err(parse_error(source, "sweep.points", "must be at least 1"));
        }
        if !s.current_to_flux.is_finite() {
            return Err(parse_error(source, "sweep.current_to_flux", "must be finite"));
        }
    }
    let junction = raw
        .junction
        .map(|j| labelled(source, "junction", JunctionParams::new(j.i_c, j.r_shunt)))
        .transpose()?;
    if let Some(iv) = raw.iv {
        if iv.points == 0 {
            return Err(parse_error(source, "iv.points", "must be at least 1"));
        }
        if !(iv.dt_eff > 0.0) {
            return Err(parse_error(source, "iv.dt_eff", "must be positive"));
        }
        if !(iv.temperature >= 0.0) {
            return Err(parse_error(source, "iv.temperature", "must be >= 0"));
        }
    }
    Ok(CircuitFile {
        squid,
        resonator,
        sweep: raw.sweep,
        junction,
        iv: raw.iv,
    })
}

pub fn load_circuit(path: &Path) -> Result<CircuitFile> {
    let (text, source) = read(path)?;
    parse_circuit(&text, &source)
}

/// Default oscillator linewidth (1/s); maps the default duration to 20 ns.
pub const DEFAULT_KAPPA: f64 = 2.5e9;

fn default_kappa() -> f64 {
    DEFAULT_KAPPA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProgram {
    pump_phases: [f64; 6],
    #[serde(default)]
    coupler_offset_phase: f64,
    j_max: f64,
    #[serde(default)]
    ancilla_ratio: Option<f64>,
    c_cnst: f64,
    #[serde(default)]
    schedule: Option<AnnealSchedule>,
    #[serde(default)]
    model: Option<OscillatorModel>,
    #[serde(default)]
    noise: Option<NoiseSection>,
    #[serde(default = "default_kappa")]
    kappa: f64,
}

/// Noise as a direct SDE amplitude, or derived from a Johnson source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub resistance: Option<f64>,
    #[serde(default)]
    pub temperature: Option<f64>,
    /// SDE amplitude per ampere of Johnson current.
    #[serde(default)]
    pub eta_per_amp: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnealFile {
    pub program: CouplingProgram,
    pub schedule: AnnealSchedule,
    pub model: OscillatorModel,
    pub noise: AnnealNoise,
    /// Oscillator linewidth used only to report wall-clock time.
    pub kappa: f64,
}

impl AnnealFile {
    pub fn wall_time_s(&self) -> f64 {
        self.schedule.duration / self.kappa
    }
}

/// Anneal program: `pump_phases` (4 logical then 2 ancilla, rad), `j_max`,
/// `c_cnst`, optional `coupler_offset_phase`, `ancilla_ratio`, `kappa` and
/// `[schedule]`, `[model]`, `[noise]` tables.
pub fn parse_program(text: &str, source: &str) -> Result<AnnealFile> {
    let raw: RawProgram = from_toml(text, source)?;
    let mut program = CouplingProgram::new(raw.pump_phases, raw.j_max, raw.c_cnst);
    program.coupler_offset_phase = raw.coupler_offset_phase;
    if let Some(r) = raw.ancilla_ratio {
        program.ancilla_ratio = r;
    }
    labelled(source, "pump_phases", program.validate())?;
    let schedule = raw.schedule.unwrap_or_default();
    labelled(source, "schedule", schedule.validate())?;
    let model = raw.model.unwrap_or_default();
    if !(model.beta.is_finite() && model.init_std > 0.0 && model.init_std.is_finite()) {
        return Err(parse_error(
            source,
            "model",
            "beta must be finite and init_std positive",
        ));
    }
    let noise = match raw.noise {
        None => AnnealNoise::default(),
        Some(NoiseSection {
            eta: Some(eta),
            resistance: None,
            temperature: None,
            eta_per_amp: None,
        }) => labelled(source, "noise.eta", AnnealNoise::new(eta))?,
        Some(NoiseSection {
            eta: None,
            resistance: Some(r),
            temperature: Some(t),
            eta_per_amp: Some(k),
        }) => labelled(source, "noise", AnnealNoise::from_johnson(r, t, k))?,
        Some(_) => {
            return Err(parse_error(
                source,
                "noise",
                "give either eta, or resistance, temperature and eta_per_amp",
            ))
        }
    };
    if !(raw.kappa > 0.0) {
        return Err(parse_error(source, "kappa", "must be positive"));
    }
    Ok(AnnealFile {
        program,
        schedule,
        model,
        noise,
        kappa: raw.kappa,
    })
}

pub fn load_program(path: &Path) -> Result<AnnealFile> {
    let (text, source) = read(path)?;
    parse_program(&text, &source)
}
