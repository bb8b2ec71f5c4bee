//! Circuit parameters of a flux-tunable Josephson parametric oscillator.
//!
//! SI units throughout: amperes, henries, webers, ohms, kelvin, rad/s.

use std::f64::consts::PI;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::trial_rng;

/// Magnetic flux quantum h/2e (Wb).
pub const PHI0: f64 = 2.067833848e-15;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380649e-23;

/// Closest approach to a half-integer flux quantum, as a fraction of `PHI0`.
pub const DIVERGENCE_GUARD: f64 = 1e-6;

/// Default artificial timestep for the Brownian current walk (s).
pub const DEFAULT_BROWNIAN_DT: f64 = 1e-12;

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionParams {
    /// Critical current (A).
    pub i_c: f64,
    /// Shunt resistance (ohm).
    pub r_shunt: f64,
}

impl JunctionParams {
    pub fn new(i_c: f64, r_shunt: f64) -> Result<Self> {
        positive("critical current", i_c)?;
        positive("shunt resistance", r_shunt)?;
        Ok(Self { i_c, r_shunt })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquidParams {
    pub l1: f64,
    pub l2: f64,
    pub i_c1: f64,
    pub i_c2: f64,
}

impl SquidParams {
    pub fn new(l1: f64, l2: f64, i_c1: f64, i_c2: f64) -> Result<Self> {
        positive("l1", l1)?;
        positive("l2", l2)?;
        positive("i_c1", i_c1)?;
        positive("i_c2", i_c2)?;
        Ok(Self { l1, l2, i_c1, i_c2 })
    }

    /// Symmetric SQUID with 7.5 pH arms and 80 uA junctions.
    pub fn reference() -> Self {
        Self {
            l1: 7.5e-12,
            l2: 7.5e-12,
            i_c1: 80e-6,
            i_c2: 80e-6,
        }
    }

    /// Critical current of the equivalent single junction.
    pub fn total_critical_current(&self) -> f64 {
        self.i_c1 + self.i_c2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorParams {
    /// Bare resonance angular frequency (rad/s).
    pub omega_r: f64,
    /// Resonator inductance (H).
    pub l_r: f64,
    /// Shunt capacitance (F).
    pub c_s: f64,
}

impl ResonatorParams {
    pub fn new(omega_r: f64, l_r: f64, c_s: f64) -> Result<Self> {
        positive("omega_r", omega_r)?;
        positive("l_r", l_r)?;
        positive("c_s", c_s)?;
        Ok(Self { omega_r, l_r, c_s })
    }
}

/// Josephson inductance `PHI0 / (2 pi I_c)`.
pub fn jj_inductance(i_c: f64) -> Result<f64> {
    positive("critical current", i_c)?;
    Ok(PHI0 / (2.0 * PI * i_c))
}

/// Distance from `phi_ext` to the nearest half-integer flux quantum (Wb).
fn half_quantum_distance(phi_ext: f64) -> f64 {
    let frac = (phi_ext / PHI0 - 0.5).rem_euclid(1.0);
    frac.min(1.0 - frac) * PHI0
}

/// Flux-tuned SQUID inductance `L_JJ(I_c1 + I_c2) / |cos(pi phi / PHI0)|`.
pub fn squid_inductance(squid: &SquidParams, phi_ext: f64) -> Result<f64> {
    if !phi_ext.is_finite() {
        return Err(Error::invalid(format!("flux must be finite, got {phi_ext}")));
    }
    if half_quantum_distance(phi_ext) <= DIVERGENCE_GUARD * PHI0 {
        return Err(Error::Divergence { phi_ext });
    }
    let l0 = jj_inductance(squid.total_critical_current())?;
    Ok(l0 / (PI * phi_ext / PHI0).cos().abs())
}

/// `omega_r * (1 + (L_squid(phi) + l1/2) / L_r)`.
pub fn resonance_frequency(
    res: &ResonatorParams,
    squid: &SquidParams,
    l1: f64,
    phi_ext: f64,
) -> Result<f64> {
    let l_sq = squid_inductance(squid, phi_ext)?;
    Ok(res.omega_r * (1.0 + (l_sq + l1 / 2.0) / res.l_r))
}

/// Resonator inductance that places the zero-flux resonance at `target_omega0`.
pub fn calibrate_resonator(
    target_omega0: f64,
    omega_r: f64,
    squid: &SquidParams,
    l1: f64,
) -> Result<f64> {
    positive("omega_r", omega_r)?;
    if !(target_omega0 > omega_r) {
        return Err(Error::InfeasibleCalibration(format!(
            "target {target_omega0} rad/s must exceed the bare resonance {omega_r} rad/s"
        )));
    }
    let l_sq = squid_inductance(squid, 0.0)?;
    Ok(omega_r * (l_sq + l1 / 2.0) / (target_omega0 - omega_r))
}

pub fn pump_frequency(omega0: f64) -> Result<f64> {
    positive("resonance frequency", omega0)?;
    Ok(2.0 * omega0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub i_dc: f64,
    /// Flux actually evaluated (Wb).
    pub flux: f64,
    pub l_squid: f64,
    /// Angular resonance frequency (rad/s).
    pub omega0: f64,
    /// Flux was pulled back from a divergence point.
    pub clipped: bool,
}

impl SweepSample {
    pub fn frequency_hz(&self) -> f64 {
        self.omega0 / (2.0 * PI)
    }
}

/// Evenly spaced bias currents including both ends.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..points)
            .map(|k| start + (stop - start) * k as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Resonance frequency against DC bias current.
///
/// Flux within the divergence guard of a half-integer quantum is moved to
/// the edge of the guard band and the sample is flagged.
pub fn flux_sweep(
    res: &ResonatorParams,
    squid: &SquidParams,
    l1: f64,
    current_to_flux: f64,
    currents: &[f64],
) -> Result<Vec<SweepSample>> {
    if !current_to_flux.is_finite() {
        return Err(Error::invalid("current-to-flux factor must be finite"));
    }
    let guard = 1.01 * DIVERGENCE_GUARD * PHI0;
    currents
        .iter()
        .map(|&i_dc| {
            let mut flux = current_to_flux * i_dc;
            let mut clipped = false;
            if half_quantum_distance(flux) <= guard {
                // pull back toward zero flux
                let half = ((flux / PHI0 - 0.5).round() + 0.5) * PHI0;
                flux = half - guard * half.signum();
                clipped = true;
            }
            let l_squid = squid_inductance(squid, flux)?;
            let omega0 = res.omega_r * (1.0 + (l_squid + l1 / 2.0) / res.l_r);
            Ok(SweepSample {
                i_dc,
                flux,
                l_squid,
                omega0,
                clipped,
            })
        })
        .collect()
}

/// Resistively shunted junction backbone `R sign(I) sqrt(I^2 - I_c^2)`.
pub fn rsj_voltage(junction: &JunctionParams, current: f64) -> f64 {
    if current.abs() <= junction.i_c {
        0.0
    } else {
        junction.r_shunt * current.signum() * (current * current - junction.i_c * junction.i_c).sqrt()
    }
}

/// Per-point standard deviation of the Brownian current walk (A).
///
/// Johnson current density `sqrt(4 k_B T / R)` over a bandwidth `1 / dt`.
pub fn brownian_step_std(junction: &JunctionParams, temperature: f64, dt_eff: f64) -> f64 {
    (4.0 * K_B * temperature / (junction.r_shunt * dt_eff)).sqrt()
}

/// I-V curve with a Brownian (random-walk) current perturbation.
///
/// The walk starts at zero and takes one step per bias point. At zero
/// temperature the curve is the RSJ backbone.
pub fn rsj_iv_curve(
    junction: &JunctionParams,
    temperature: f64,
    currents: &[f64],
    dt_eff: f64,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::invalid(format!(
            "temperature must be >= 0, got {temperature}"
        )));
    }
    positive("Brownian timestep", dt_eff)?;
    let std = brownian_step_std(junction, temperature, dt_eff);
    if std == 0.0 {
        return Ok(currents
            .iter()
            .map(|&i| (i, rsj_voltage(junction, i)))
            .collect());
    }
    let step = Normal::new(0.0, std).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = trial_rng(seed, 0);
    let mut walk = 0.0;
    Ok(currents
        .iter()
        .map(|&i| {
            walk += step.sample(&mut rng);
            (i, rsj_voltage(junction, i + walk))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn josephson_inductance() {
        // independent evaluation: hbar / (2 e I_c) with CODATA constants
        let hbar = 1.054571817e-34;
        let e = 1.602176634e-19;
        let expected = hbar / (2.0 * e * 160e-6);
        assert!(rel(jj_inductance(160e-6).unwrap(), expected) < 1e-8);
        // the quoted 2.0573e-12 is only good to about 2e-4; the exact value is 2.05691e-12
        assert!(rel(jj_inductance(160e-6).unwrap(), 2.0573e-12) < 5e-4);
        assert!(rel(jj_inductance(PHI0 / (2.0 * PI)).unwrap(), 1.0) < 1e-15);
        assert!(
            rel(jj_inductance(320e-6).unwrap(), jj_inductance(160e-6).unwrap() / 2.0) < 1e-15
        );
        assert!(jj_inductance(0.0).is_err());
        assert!(jj_inductance(-1e-6).is_err());
    }

    #[test]
    fn squid_examples() {
        let s = SquidParams::reference();
        let l0 = squid_inductance(&s, 0.0).unwrap();
        assert_eq!(l0, jj_inductance(160e-6).unwrap());
        assert!(rel(squid_inductance(&s, PHI0 / 3.0).unwrap(), 2.0 * l0) < 1e-12);
        assert!(matches!(
            squid_inductance(&s, PHI0 / 2.0),
            Err(Error::Divergence { .. })
        ));
        assert!(squid_inductance(&s, -1.5 * PHI0).is_err());
        assert!(squid_inductance(&s, 0.5 * PHI0 + 2e-6 * PHI0).is_ok());
    }

    #[test]
    fn resonance_limits() {
        let s = SquidParams::reference();
        let res = ResonatorParams::new(2.0 * PI * 7e9, 1e6, 4.5e-12).unwrap();
        let w = resonance_frequency(&res, &s, s.l1, 0.0).unwrap();
        assert!(rel(w, res.omega_r) < 1e-15 * 1e3);

        let res = ResonatorParams::new(2.0 * PI * 7e9, 50e-12, 4.5e-12).unwrap();
        let w0 = resonance_frequency(&res, &s, s.l1, 0.0).unwrap();
        let w3 = resonance_frequency(&res, &s, s.l1, PHI0 / 3.0).unwrap();
        let dl = squid_inductance(&s, PHI0 / 3.0).unwrap() - squid_inductance(&s, 0.0).unwrap();
        assert!(rel(w3 - w0, res.omega_r * dl / res.l_r) < 1e-9);
    }

    #[test]
    fn calibration() {
        let s = SquidParams::reference();
        let target = 2.0 * PI * 7.5e9;
        let omega_r = 2.0 * PI * 7.0e9;
        let l_r = calibrate_resonator(target, omega_r, &s, s.l1).unwrap();
        let res = ResonatorParams::new(omega_r, l_r, 4.5e-12).unwrap();
        assert!(rel(resonance_frequency(&res, &s, s.l1, 0.0).unwrap(), target) < 1e-12);

        let l = calibrate_resonator(2.0 * omega_r, omega_r, &s, s.l1).unwrap();
        let expected = squid_inductance(&s, 0.0).unwrap() + s.l1 / 2.0;
        assert!(rel(l, expected) < 1e-15);

        assert!(matches!(
            calibrate_resonator(omega_r * 0.9, omega_r, &s, s.l1),
            Err(Error::InfeasibleCalibration(_))
        ));
        assert!(calibrate_resonator(omega_r, omega_r, &s, s.l1).is_err());
    }

    #[test]
    fn pump() {
        assert_eq!(pump_frequency(2.0 * PI * 7.5e9).unwrap(), 2.0 * PI * 15e9);
        assert!(pump_frequency(0.0).is_err());
        assert_eq!(pump_frequency(3.0).unwrap() * 2.0, pump_frequency(6.0).unwrap());
    }

    fn calibrated() -> (ResonatorParams, SquidParams) {
        let s = SquidParams::reference();
        let omega_r = 2.0 * PI * 7.0e9;
        let l_r = calibrate_resonator(2.0 * PI * 7.5e9, omega_r, &s, s.l1).unwrap();
        (ResonatorParams::new(omega_r, l_r, 4.5e-12).unwrap(), s)
    }

    #[test]
    fn sweep_shape() {
        let (res, s) = calibrated();
        let m = PHI0 / 1e-3; // one flux quantum per mA
        let currents = linspace(-0.4e-3, 0.4e-3, 81);
        let curve = flux_sweep(&res, &s, s.l1, m, &currents).unwrap();
        let mid = &curve[40];
        assert_eq!(mid.i_dc, 0.0);
        assert!(rel(mid.frequency_hz(), 7.5e9) < 1e-12);
        for k in 0..81 {
            assert!(rel(curve[k].omega0, curve[80 - k].omega0) < 1e-12);
        }
        // grows with |flux|
        for k in 41..81 {
            assert!(curve[k].omega0 > curve[k - 1].omega0);
        }
        let quarter = flux_sweep(&res, &s, s.l1, m, &[0.25e-3]).unwrap()[0];
        assert!(quarter.omega0 > mid.omega0);
        assert!(curve.iter().all(|c| !c.clipped));
    }

    #[test]
    fn sweep_clips_divergence() {
        let (res, s) = calibrated();
        let m = PHI0 / 1e-3;
        let curve = flux_sweep(&res, &s, s.l1, m, &[0.5e-3, -0.5e-3, 1.5e-3]).unwrap();
        for c in &curve {
            assert!(c.clipped);
            assert!(c.omega0.is_finite());
        }
        assert!(curve[0].flux < 0.5 * PHI0);
        assert!(curve[1].flux > -0.5 * PHI0);
    }

    #[test]
    fn iv_backbone() {
        let j = JunctionParams::new(160e-6, 15.0).unwrap();
        let v = rsj_iv_curve(&j, 0.0, &[320e-6], DEFAULT_BROWNIAN_DT, 1).unwrap();
        let expected = 15.0 * 3f64.sqrt() * 160e-6;
        assert!(rel(v[0].1, expected) < 1e-12);
        assert!((v[0].1 - 4.157e-3).abs() < 1e-6);

        let currents = linspace(-160e-6, 160e-6, 33);
        let v = rsj_iv_curve(&j, 0.0, &currents, DEFAULT_BROWNIAN_DT, 1).unwrap();
        assert!(v.iter().all(|&(_, v)| v == 0.0));
        assert!(rsj_iv_curve(&j, -1.0, &currents, DEFAULT_BROWNIAN_DT, 1).is_err());
    }

    #[test]
    fn iv_is_odd_at_zero_temperature() {
        let j = JunctionParams::new(80e-6, 15.0).unwrap();
        let currents = linspace(-400e-6, 400e-6, 101);
        let v = rsj_iv_curve(&j, 0.0, &currents, DEFAULT_BROWNIAN_DT, 3).unwrap();
        for k in 0..101 {
            assert!((v[k].1 + v[100 - k].1).abs() <= 1e-12 * v[k].1.abs().max(1e-9));
        }
    }

    #[test]
    fn noise_rounds_the_knee() {
        let j = JunctionParams::new(160e-6, 15.0).unwrap();
        let seeds = 400;
        let mean: f64 = (0..seeds)
            .map(|s| {
                rsj_iv_curve(&j, 4.2, &[j.i_c], DEFAULT_BROWNIAN_DT, s).unwrap()[0]
                    .1
                    .abs()
            })
            .sum::<f64>()
            / seeds as f64;
        assert!(mean > 0.0);
        let noisy = rsj_iv_curve(&j, 4.2, &[j.i_c], DEFAULT_BROWNIAN_DT, 9).unwrap();
        let again = rsj_iv_curve(&j, 4.2, &[j.i_c], DEFAULT_BROWNIAN_DT, 9).unwrap();
        assert_eq!(noisy, again);
    }

    proptest! {
        #[test]
        fn squid_even_and_periodic(x in -3.0f64..3.0) {
            let s = SquidParams::reference();
            let phi = x * PHI0;
            prop_assume!(half_quantum_distance(phi) > 1e-3 * PHI0);
            let a = squid_inductance(&s, phi).unwrap();
            prop_assert!(rel(squid_inductance(&s, -phi).unwrap(), a) < 1e-12);
            prop_assert!(rel(squid_inductance(&s, phi + PHI0).unwrap(), a) < 1e-9);
        }

        #[test]
        fn frequency_increases_with_inductance(a in 0.0f64..0.45, b in 0.0f64..0.45) {
            prop_assume!((a - b).abs() > 1e-6);
            let (res, s) = calibrated();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let l_lo = squid_inductance(&s, lo * PHI0).unwrap();
            let l_hi = squid_inductance(&s, hi * PHI0).unwrap();
            prop_assert!(l_hi > l_lo);
            prop_assert!(
                resonance_frequency(&res, &s, s.l1, hi * PHI0).unwrap()
                    > resonance_frequency(&res, &s, s.l1, lo * PHI0).unwrap()
            );
        }

        #[test]
        fn calibration_round_trip(f_r in 1e9f64..7.4e9, f0 in 7.5e9f64..12e9) {
            let s = SquidParams::reference();
            let (omega_r, target) = (2.0 * PI * f_r, 2.0 * PI * f0);
            let l_r = calibrate_resonator(target, omega_r, &s, s.l1).unwrap();
            let res = ResonatorParams::new(omega_r, l_r, 4.5e-12).unwrap();
            prop_assert!(rel(resonance_frequency(&res, &s, s.l1, 0.0).unwrap(), target) < 1e-12);
        }
    }
}
