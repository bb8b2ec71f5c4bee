// Load the bundled input files and write a histogram as CSV and JSON.
//
//     cargo run --release --example config_and_output

use std::path::{Path, PathBuf};

use lhz_jpo::anneal::run_trials;
use lhz_jpo::config::{load_circuit, load_problem, load_program, load_tile};
use lhz_jpo::output::{emit_histogram, parse_histogram_json, write_atomic, Format};
use lhz_jpo::Result;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Writes the alternating-program histogram into `dir` and returns the CSV.
pub fn run_example(dir: &Path, trials: usize) -> Result<String> {
    let problem = load_problem(&data("triangle.toml"))?;
    let tile = load_tile(&data("reference_tile.toml"))?;
    let circuit = load_circuit(&data("jpo.toml"))?;
    println!("problem with {} spins, tile {:?}", problem.n(), tile.params);
    println!("calibrated resonator {:?}", circuit.resonator);

    let file = load_program(&data("alternating.toml"))?;
    let hist = run_trials(&file.program, &file.schedule, &file.model, file.noise, trials, 11)?;
    let csv = emit_histogram(&hist, Format::Csv, false);
    let json = emit_histogram(&hist, Format::Json, false);
    write_atomic(&dir.join("alternating.csv"), &csv)?;
    write_atomic(&dir.join("alternating.json"), &json)?;
    assert_eq!(parse_histogram_json(&json)?, hist);
    print!("{csv}");
    Ok(csv)
}

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("lhz-jpo-example");
    run_example(&dir, 200)?;
    println!("wrote {}", dir.display());
    Ok(())
}
