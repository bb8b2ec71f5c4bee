// Alternating pump phases select 0101 and its global flip 1010.
//
//     cargo run --release --example anneal_alternating

use lhz_jpo::anneal::{
    run_trials, AnnealNoise, AnnealSchedule, CouplingProgram, OscillatorModel, StateHistogram,
};
use lhz_jpo::Result;

pub fn run_example(trials: usize, seed: u64) -> Result<StateHistogram> {
    let hist = run_trials(
        &CouplingProgram::alternating(),
        &AnnealSchedule::default(),
        &OscillatorModel::default(),
        AnnealNoise::default(),
        trials,
        seed,
    )?;
    for s in hist.support() {
        println!("{}  {:>5}  {:.3}", hist.label(s), hist.counts[s as usize], hist.probability(s));
    }
    let folded = hist.canonical();
    println!("canonical: {:?}", folded.support().iter().map(|&s| folded.label(s)).collect::<Vec<_>>());
    Ok(hist)
}

fn main() -> Result<()> {
    run_example(1000, 42)?;
    Ok(())
}
