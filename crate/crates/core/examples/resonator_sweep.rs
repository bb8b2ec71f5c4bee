// Calibrate the resonator to 7.5 GHz and sweep the SQUID bias.
//
//     cargo run --example resonator_sweep

use std::f64::consts::TAU;

use lhz_jpo::circuit::{
    calibrate_resonator, flux_sweep, linspace, pump_frequency, resonance_frequency,
    ResonatorParams, SquidParams, PHI0,
};
use lhz_jpo::Result;

/// Returns the calibrated zero-flux frequency and the pump frequency (Hz).
pub fn run_example() -> Result<(f64, f64)> {
    let squid = SquidParams::reference();
    let omega_r = TAU * 5.0e9;
    let l_r = calibrate_resonator(TAU * 7.5e9, omega_r, &squid, squid.l1)?;
    let res = ResonatorParams::new(omega_r, l_r, 1.0e-12)?;
    let f0 = resonance_frequency(&res, &squid, squid.l1, 0.0)? / TAU;
    let pump = pump_frequency(f0 * TAU)? / TAU;
    println!("L_r = {l_r:.4e} H, f0 = {f0:.6e} Hz, pump = {pump:.6e} Hz");

    // one flux quantum per milliamp, swept across a full period
    let m = PHI0 / 1.0e-3;
    let currents = linspace(-1.0e-3, 1.0e-3, 41);
    for s in flux_sweep(&res, &squid, squid.l1, m, &currents)? {
        println!(
            "{:+.3e} A  {:+.3} Phi0  {:.4e} H  {:.4e} Hz{}",
            s.i_dc,
            s.flux / PHI0,
            s.l_squid,
            s.frequency_hz(),
            if s.clipped { "  (clipped)" } else { "" }
        );
    }
    Ok((f0, pump))
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
