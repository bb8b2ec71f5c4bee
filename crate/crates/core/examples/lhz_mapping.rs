// Map a coupling problem onto the parity layout, then decode readouts.
//
//     cargo run --example lhz_mapping

use lhz_jpo::lhz::{
    build_layout, canonical, decode_readout, lhz_energy, map_couplings, LhzProblem, Slot,
};
use lhz_jpo::spin::{ising_energy, IsingProblem, SpinConfig};
use lhz_jpo::Result;

/// Returns the largest mismatch between shifted physical and logical energies.
pub fn run_example() -> Result<f64> {
    let n = 5;
    let problem = IsingProblem::couplings_only(
        n,
        &[(0, 1, 1.0), (1, 2, -0.5), (2, 3, 0.75), (3, 4, -1.0), (0, 4, 0.25), (1, 3, 0.5)],
    )?;
    let layout = build_layout(n)?;
    let fields = map_couplings(&problem)?;
    let lhz = LhzProblem::new(fields, 4.0)?;

    println!("{n} logical spins -> {} physical, {} tiles", layout.k_physical, layout.tiles.len());
    for (l, tile) in layout.tiles.iter().enumerate() {
        let names: Vec<String> = tile
            .slots()
            .iter()
            .map(|s| match s {
                Slot::Physical(k) => {
                    let (i, j) = layout.bits[*k].pair;
                    format!("({i},{j})")
                }
                Slot::Fixed(f) => format!("fixed{f}"),
            })
            .collect();
        println!("  tile {l}: {}", names.join(" "));
    }

    let shift = -lhz.c_penalty * layout.tiles.len() as f64;
    let mut worst = 0.0f64;
    for index in 0..(1u64 << n) {
        let logical = SpinConfig::from_index(index, n);
        let physical = layout.encode(&logical)?;
        let e_phys = lhz_energy(&lhz, &layout, &physical)? - shift;
        let e_log = ising_energy(&problem, &logical)?;
        worst = worst.max((e_phys - e_log).abs());
        assert_eq!(decode_readout(&physical, &layout)?, canonical(&logical));
    }
    println!("max |E_lhz - shift - E_ising| over all states: {worst:e}");

    // a single flipped physical spin breaks at least one tile
    let mut bad = layout.encode(&SpinConfig::all_up(n))?;
    bad.flip(0);
    match decode_readout(&bad, &layout) {
        Err(e) => println!("corrupted readout rejected: {e}"),
        Ok(_) => unreachable!("a flipped spin always violates a tile"),
    }
    Ok(worst)
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
