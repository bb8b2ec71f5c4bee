// Ground-state distribution of the tile Hamiltonian over a field sweep.
//
//     cargo run --release --example quantum_tile

use lhz_jpo::quantum::{
    build_hamiltonian, default_sweep, ground_states, logical_label, min_sweep_gap,
    sweep_distribution, NoiseDistribution, NoiseSpec,
};
use lhz_jpo::tile::TileParams;
use lhz_jpo::Result;

/// Returns the supported logical states with and without noise.
pub fn run_example(trials: usize) -> Result<(Vec<u8>, Vec<u8>)> {
    let base = TileParams::uniform(0.0, 1.0, 1.0);
    let g = ground_states(&build_hamiltonian(&base), None)?;
    println!(
        "E_min = {:.6}, degeneracy {}, gap {:.6}",
        g.e_min,
        g.degeneracy,
        g.gap().unwrap_or(f64::NAN)
    );

    let fields = default_sweep(base.c_cnst);
    let clean = sweep_distribution(&base, &fields, &NoiseSpec::none(), fields.len())?;

    let gap = min_sweep_gap(&base, &fields)?;
    let noise = NoiseSpec::new(0.1 * gap, NoiseDistribution::Uniform, 7)?;
    let noisy = sweep_distribution(&base, &fields, &noise, trials)?;

    println!("state  clean     noisy");
    for s in 0..16u8 {
        let (a, b) = (clean.probabilities[s as usize], noisy.probabilities[s as usize]);
        if a > 1e-9 || b > 1e-9 {
            println!("{}   {a:.6}  {b:.6}", logical_label(s));
        }
    }
    Ok((clean.support(1e-9), noisy.support(1e-9)))
}

fn main() -> Result<()> {
    run_example(1000)?;
    Ok(())
}
