// Anneal the tile with no logical fields: every outcome has even parity.
//
//     cargo run --release --example anneal_even_parity

use lhz_jpo::anneal::{
    effective_tile_couplings, run_trials, AnnealNoise, AnnealSchedule, CouplingProgram,
    OscillatorModel, StateHistogram,
};
use lhz_jpo::tile::ground_set;
use lhz_jpo::Result;

pub fn run_example(trials: usize, seed: u64) -> Result<StateHistogram> {
    let program = CouplingProgram::even_parity();
    let params = effective_tile_couplings(&program);
    println!("couplings: {params:?}");
    println!("classical ground states: {}", ground_set(&params).configs.len());

    let hist = run_trials(
        &program,
        &AnnealSchedule::default(),
        &OscillatorModel::default(),
        AnnealNoise::default(),
        trials,
        seed,
    )?;
    println!("{} trials, {} unsettled", hist.trials, hist.unsettled);
    for s in hist.support() {
        println!("  {}  {:.3}", hist.label(s), hist.probability(s));
    }
    Ok(hist)
}

fn main() -> Result<()> {
    run_example(1000, 42)?;
    Ok(())
}
