// Classical energy landscape of the six-spin tile.
//
//     cargo run --example tile_ground_states

use lhz_jpo::tile::{ground_set, ground_set_clamped, lhz_parity_valid, tile_energy, TileConfig, TileParams};
use lhz_jpo::Result;

/// Returns the logical labels of the field-free ground set.
pub fn run_example() -> Result<Vec<u8>> {
    // fields J_b = 1, ancillas twice as strong, penalty J_C = 1
    let table = TileParams::uniform(1.0, 2.0, 1.0);
    for (logical, ancilla) in [
        ([1, 1, 1, 1], [1, 1]),
        ([1, 1, -1, -1], [1, -1]),
        ([-1, -1, -1, -1], [-1, -1]),
    ] {
        let cfg = TileConfig::new(logical, ancilla)?;
        println!("E{:?}{:?} = {}", logical, ancilla, tile_energy(&table, &cfg));
    }

    let free = TileParams::uniform(0.0, 1.0, 1.0);
    let g = ground_set(&free);
    println!("field-free ground energy {} with {} states:", g.min_energy, g.configs.len());
    for c in &g.configs {
        println!("  {:04b} ancillas {:?}", c.logical_index(), c.ancilla);
    }
    println!("parity valid: {}", lhz_parity_valid(&free).valid);

    // holding both ancillas down flips the preferred parity when 2 J_a > C
    let clamped = ground_set_clamped(&free, Some([-1, -1]));
    println!(
        "clamped ancillas (-1,-1): {} states, parity {}",
        clamped.configs.len(),
        clamped.configs[0].parity()
    );
    Ok(g.configs.iter().map(|c| c.logical_index()).collect())
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
