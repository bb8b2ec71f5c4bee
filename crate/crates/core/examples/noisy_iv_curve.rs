// Shunted-junction I-V curves at zero and liquid-helium temperature.
//
//     cargo run --example noisy_iv_curve

use lhz_jpo::circuit::{linspace, rsj_iv_curve, JunctionParams, DEFAULT_BROWNIAN_DT};
use lhz_jpo::Result;

/// Returns (current, clean voltage, noisy voltage) triples.
pub fn run_example() -> Result<Vec<(f64, f64, f64)>> {
    let junction = JunctionParams::new(160e-6, 15.0)?;
    let currents = linspace(-400e-6, 400e-6, 33);
    let clean = rsj_iv_curve(&junction, 0.0, &currents, DEFAULT_BROWNIAN_DT, 1)?;
    let noisy = rsj_iv_curve(&junction, 4.2, &currents, DEFAULT_BROWNIAN_DT, 1)?;
    let rows: Vec<(f64, f64, f64)> = clean
        .iter()
        .zip(&noisy)
        .map(|(&(i, v0), &(_, v1))| (i, v0, v1))
        .collect();
    println!("     I (A)      V_0K (V)    V_4.2K (V)");
    for (i, v0, v1) in &rows {
        println!("{i:+.3e}  {v0:+.4e}  {v1:+.4e}");
    }
    Ok(rows)
}

fn main() -> Result<()> {
    run_example()?;
    Ok(())
}
