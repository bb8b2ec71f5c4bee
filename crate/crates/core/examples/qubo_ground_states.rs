// Convert a small QUBO to Ising form and enumerate its ground states.
//
//     cargo run --example qubo_ground_states

use lhz_jpo::spin::{enumerate_ground_states, ising_energy, qubo_to_ising, QuboProblem};
use lhz_jpo::Result;

/// Returns the minimum QUBO value and the optimal bit strings.
pub fn run_example() -> Result<(f64, Vec<String>)> {
    // Max-cut style objective on a 4-cycle with one chord.
    #[rustfmt::skip]
    let q = QuboProblem::new(4, vec![
        -2.0,  1.0,  0.0,  1.0,
         1.0, -3.0,  1.0,  1.0,
         0.0,  1.0, -2.0,  1.0,
         1.0,  1.0,  1.0, -3.0,
    ])?;
    let (ising, offset) = qubo_to_ising(&q)?;
    let ground = enumerate_ground_states(
        |s| ising_energy(&ising, s).expect("sizes match"),
        ising.n(),
    )?;

    let best = ground.min_energy + offset;
    let labels: Vec<String> = ground.configs.iter().map(|c| c.bit_string()).collect();
    println!("fields h = {:?}", ising.fields());
    println!("offset   = {offset}");
    println!("min x^T Q x = {best}");
    for label in &labels {
        let bits: Vec<u8> = label.bytes().map(|b| b - b'0').collect();
        println!("  {label}  (QUBO value {})", q.value(&bits));
    }
    Ok((best, labels))
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
