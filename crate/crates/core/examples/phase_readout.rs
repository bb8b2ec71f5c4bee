// Read a tile state from oscillator phases, as a spectrum analyser would.
//
// Each settled amplitude becomes a 7.5 GHz carrier whose phase is 0 or pi.
// A single-bin DFT recovers the phase, and the phase gives the bit.
//
//     cargo run --example phase_readout

use lhz_jpo::anneal::{
    carrier, classify_state, dft_phase, simulate_trial, AnnealNoise, AnnealSchedule, CouplingProgram,
    OscillatorModel,
};
use lhz_jpo::Result;

/// Returns the bits read from the carriers and the bits read from the signs.
pub fn run_example(seed: u64) -> Result<(Vec<u8>, Vec<u8>)> {
    let model = OscillatorModel {
        record_every: 500,
        ..Default::default()
    };
    let trial = simulate_trial(
        &CouplingProgram::alternating(),
        &AnnealSchedule::default(),
        &model,
        AnnealNoise::default(),
        seed,
    )?;
    for s in &trial.trajectory {
        println!("t = {:5.1}  c = {:+.3?}", s.t, &s.c[..4]);
    }

    let f0 = 7.5e9;
    let dt = 1.0 / (f0 * 16.0);
    let samples = 16 * 20;
    let mut from_phase = Vec::new();
    for &c in &trial.final_state.c[..4] {
        let phase = dft_phase(&carrier(c, f0, dt, samples), dt, f0)?;
        from_phase.push(classify_state(phase)?);
    }
    let from_sign: Vec<u8> = trial.final_state.c[..4]
        .iter()
        .map(|&c| u8::from(c > 0.0))
        .collect();
    println!("bits from carrier phase {from_phase:?}, from amplitude sign {from_sign:?}");
    Ok((from_phase, from_sign))
}

fn main() -> Result<()> {
    run_example(5)?;
    Ok(())
}
