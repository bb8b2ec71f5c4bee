//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input, 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::anneal::{run_trials, AnnealNoise};
use crate::circuit::{flux_sweep, linspace, pump_frequency, resonance_frequency, rsj_iv_curve};
use crate::config::{load_circuit, load_problem, load_program, load_tile, SweepMode};
use crate::error::{Error, Result};
use crate::lhz::{build_layout, constraint_count, map_couplings, LhzProblem, Slot};
use crate::output::{histogram_table, resolve_out_path, write_atomic, Cell, Format, Table};
use crate::quantum::{logical_label, min_sweep_gap, sweep_distribution, NoiseSpec, LOGICAL_STATES};
use crate::tile::{all_configs, ground_set_clamped, tile_energy};

/// Probabilities at or below this are left out of sparse quantum output.
const SUPPORT_THRESHOLD: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "lhz-jpo", version, about = "LHZ tile and JPO simulations")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Output file; relative paths honour LHZ_JPO_OUT_DIR. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Suppress diagnostics other than errors and drawn seeds.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads for trial ensembles (output does not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parity-architecture layouts.
    #[command(subcommand)]
    Lhz(LhzCmd),
    /// Six-spin tile: classical enumeration and quantum ground states.
    #[command(subcommand)]
    Tile(TileCmd),
    /// Resonator and junction calculations.
    #[command(subcommand)]
    Circuit(CircuitCmd),
    /// Noisy oscillator anneals of the tile.
    Anneal(AnnealArgs),
}

#[derive(Subcommand, Debug)]
enum LhzCmd {
    /// Layout and physical local fields for a coupling problem.
    Map {
        /// Number of logical spins.
        #[arg(long)]
        n: usize,
        /// Coupling file (TOML).
        #[arg(long)]
        problem: PathBuf,
        /// Constraint strength, used only to warn when it looks too weak.
        #[arg(long)]
        penalty: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum TileCmd {
    /// All 64 configurations with energies and the ground set.
    Enumerate {
        /// Tile parameter file (TOML).
        #[arg(long)]
        params: PathBuf,
    },
    /// Logical ground-state distribution of the tile Hamiltonian.
    Quantum {
        /// Tile parameter file (TOML).
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Master seed; drawn at random and reported when omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the file's thermal coefficient.
        #[arg(long)]
        noise: Option<f64>,
        /// List all 16 states, including empty ones.
        #[arg(long)]
        dense: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CircuitCmd {
    /// Resonance frequency against DC bias current.
    Sweep {
        /// Circuit file (TOML).
        #[arg(long)]
        config: PathBuf,
    },
    /// Noisy junction I-V curve.
    Iv {
        /// Circuit file (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Temperature in kelvin; overrides the file.
        #[arg(long)]
        temp: Option<f64>,
        /// Seed for the Brownian offset; drawn at random when omitted.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct AnnealArgs {
    /// Annealing program file (TOML).
    #[arg(long)]
    program: PathBuf,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Master seed; drawn at random and reported when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Fold each state onto its representative with spin 1 up.
    #[arg(long)]
    canonical: bool,
    /// List all 16 states, including empty ones.
    #[arg(long)]
    dense: bool,
    /// Overrides the program's noise amplitude.
    #[arg(long)]
    eta: Option<f64>,
}

struct Ctx {
    quiet: bool,
}

impl Ctx {
    fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn seed(&self, seed: Option<u64>) -> u64 {
        seed.unwrap_or_else(|| {
            let s = rand::random::<u64>();
            eprintln!("seed = {s}");
            s
        })
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn execute(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        quiet: cli.global.quiet,
    };
    let table = match cli.global.workers {
        Some(0) => return Err(Error::InvalidArgument("--workers must be at least 1".into())),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| dispatch(&ctx, cli.command))?,
        None => dispatch(&ctx, cli.command)?,
    };
    let text = table.render(cli.global.format);
    match cli.global.out {
        Some(p) => {
            let path = resolve_out_path(&p);
            write_atomic(&path, &text)?;
            ctx.info(format!("wrote {}", path.display()));
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<Table> {
    match command {
        Command::Lhz(LhzCmd::Map {
            n,
            problem,
            penalty,
        }) => lhz_map(ctx, n, &problem, penalty),
        Command::Tile(TileCmd::Enumerate { params }) => tile_enumerate(&params),
        Command::Tile(TileCmd::Quantum {
            params,
            trials,
            seed,
            noise,
            dense,
        }) => {
            let seed = ctx.seed(seed);
            tile_quantum(ctx, &params, trials, seed, noise, dense)
        }
        Command::Circuit(CircuitCmd::Sweep { config }) => circuit_sweep(ctx, &config),
        Command::Circuit(CircuitCmd::Iv { config, temp, seed }) => {
            let seed = ctx.seed(seed);
            circuit_iv(&config, temp, seed)
        }
        Command::Anneal(a) => {
            let seed = ctx.seed(a.seed);
            anneal(ctx, &a, seed)
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("config serializes")
}

fn header(t: &mut Table, command: &str) {
    t.meta("command", command)
        .meta("version", env!("CARGO_PKG_VERSION"));
}

fn slot_name(s: Slot) -> String {
    match s {
        Slot::Physical(k) => k.to_string(),
        Slot::Fixed(f) => format!("fixed{f}"),
    }
}

fn lhz_map(ctx: &Ctx, n: usize, problem: &std::path::Path, penalty: Option<f64>) -> Result<Table> {
    let p = load_problem(problem)?;
    if p.n() != n {
        return Err(Error::InvalidArgument(format!(
            "--n {n} does not match the problem's n = {}",
            p.n()
        )));
    }
    let layout = build_layout(n)?;
    let j_k = map_couplings(&p)?;
    if let Some(c) = penalty {
        if LhzProblem::new(j_k.clone(), c)?.penalty_possibly_weak() {
            ctx.info(format!("warning: penalty {c} does not exceed max |J_k|"));
        }
    }
    let mut t = Table::new(&["k", "row", "col", "i", "j", "j_k", "tiles"]);
    header(&mut t, "lhz map");
    t.meta("problem", json(&p))
        .meta("n_logical", n)
        .meta("k_physical", layout.k_physical)
        .meta("constraints", constraint_count(n)?)
        .meta("fixed_row", layout.fixed_row);
    if let Some(c) = penalty {
        t.meta("penalty", c);
    }
    for (idx, tile) in layout.tiles.iter().enumerate() {
        let members: Vec<String> = tile.slots().into_iter().map(slot_name).collect();
        t.meta(&format!("tile.{idx}"), members.join(" "));
    }
    for bit in &layout.bits {
        let tiles: Vec<String> = (0..layout.tiles.len())
            .filter(|&l| layout.tiles[l].contains(bit.k))
            .map(|l| l.to_string())
            .collect();
        t.push(vec![
            (bit.k as u64).into(),
            (bit.row as u64).into(),
            (bit.col as u64).into(),
            (bit.pair.0 as u64).into(),
            (bit.pair.1 as u64).into(),
            j_k[bit.k].into(),
            tiles.join(";").into(),
        ]);
    }
    Ok(t)
}

fn tile_enumerate(params: &std::path::Path) -> Result<Table> {
    let file = load_tile(params)?;
    let g = ground_set_clamped(&file.params, file.clamp);
    let mut t = Table::new(&["s1", "s2", "s3", "s4", "a1", "a2", "energy", "parity", "ground"]);
    header(&mut t, "tile enumerate");
    t.meta("params", json(&file.params))
        .meta("clamp", json(&file.clamp))
        .meta("min_energy", g.min_energy)
        .meta("ground_states", g.configs.len());
    for cfg in all_configs() {
        let s = |v: i8| Cell::Int(i64::from(v));
        let energy = tile_energy(&file.params, &cfg);
        t.push(vec![
            s(cfg.logical[0]),
            s(cfg.logical[1]),
            s(cfg.logical[2]),
            s(cfg.logical[3]),
            s(cfg.ancilla[0]),
            s(cfg.ancilla[1]),
            energy.into(),
            s(cfg.parity()),
            Cell::Int(i64::from(g.configs.contains(&cfg))),
        ]);
    }
    Ok(t)
}

fn tile_quantum(
    ctx: &Ctx,
    params: &std::path::Path,
    trials: usize,
    seed: u64,
    noise_override: Option<f64>,
    dense: bool,
) -> Result<Table> {
    let mut file = load_tile(params)?;
    if let Some(c) = noise_override {
        file.quantum.thermal_coefficient = c;
    }
    let noise = NoiseSpec::new(file.quantum.thermal_coefficient, file.quantum.distribution, seed)?;
    let fields = file.sweep_fields();
    let gap = min_sweep_gap(&file.params, &fields)?;
    if noise.thermal_coefficient > 0.1 * gap {
        ctx.info(format!(
            "note: noise {} exceeds 0.1 x the smallest gap {gap:e}",
            noise.thermal_coefficient
        ));
    }
    let dist = sweep_distribution(&file.params, &fields, &noise, trials)?;
    let mut t = Table::new(&["state", "probability"]);
    header(&mut t, "tile quantum");
    t.meta("config", json(&file))
        .meta("sweep", match (&file.quantum.fields, file.quantum.sweep) {
            (Some(_), _) => "explicit",
            (None, SweepMode::Default) => "default",
            (None, SweepMode::Fixed) => "fixed",
        })
        .meta("sweep_points", fields.len())
        .meta("trials", trials.max(fields.len()))
        .meta("seed", seed)
        .meta("min_gap", gap);
    for s in 0..LOGICAL_STATES as u8 {
        let p = dist.probabilities[s as usize];
        if dense || p > SUPPORT_THRESHOLD {
            t.push(vec![logical_label(s).into(), Cell::Probability(p)]);
        }
    }
    Ok(t)
}

fn missing(source: &std::path::Path, field: &str) -> Error {
    Error::Parse {
        source_name: source.display().to_string(),
        field: field.into(),
        message: "table is required for this command".into(),
    }
}

fn circuit_sweep(ctx: &Ctx, config: &std::path::Path) -> Result<Table> {
    let c = load_circuit(config)?;
    let res = c.resonator.ok_or_else(|| missing(config, "resonator"))?;
    let sweep = c.sweep.ok_or_else(|| missing(config, "sweep"))?;
    let currents = linspace(sweep.i_start, sweep.i_stop, sweep.points);
    let samples = flux_sweep(&res, &c.squid, c.squid.l1, sweep.current_to_flux, &currents)?;
    let omega0 = resonance_frequency(&res, &c.squid, c.squid.l1, 0.0)?;
    let clipped: Vec<String> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.clipped)
        .map(|(k, _)| k.to_string())
        .collect();
    if !clipped.is_empty() {
        ctx.info(format!(
            "note: {} bias points sit on a divergence and were pulled back",
            clipped.len()
        ));
    }
    let mut t = Table::new(&["i_dc_A", "flux_wb", "l_squid_H", "f0_Hz"]);
    header(&mut t, "circuit sweep");
    t.meta("config", json(&c))
        .meta("f0_zero_flux_hz", omega0 / std::f64::consts::TAU)
        .meta("pump_hz", pump_frequency(omega0)? / std::f64::consts::TAU)
        .meta("clipped_points", clipped.join(";"));
    for s in &samples {
        t.push(vec![
            s.i_dc.into(),
            s.flux.into(),
            s.l_squid.into(),
            s.frequency_hz().into(),
        ]);
    }
    Ok(t)
}

fn circuit_iv(config: &std::path::Path, temp: Option<f64>, seed: u64) -> Result<Table> {
    let c = load_circuit(config)?;
    let junction = c.junction.ok_or_else(|| missing(config, "junction"))?;
    let iv = c.iv.ok_or_else(|| missing(config, "iv"))?;
    let temperature = temp.unwrap_or(iv.temperature);
    let currents = linspace(iv.i_start, iv.i_stop, iv.points);
    let curve = rsj_iv_curve(&junction, temperature, &currents, iv.dt_eff, seed)?;
    let mut t = Table::new(&["i_A", "v_V"]);
    header(&mut t, "circuit iv");
    t.meta("config", json(&c))
        .meta("temperature_k", temperature)
        .meta("seed", seed);
    for (i, v) in curve {
        t.push(vec![i.into(), v.into()]);
    }
    Ok(t)
}

fn anneal(ctx: &Ctx, a: &AnnealArgs, seed: u64) -> Result<Table> {
    let mut file = load_program(&a.program)?;
    if let Some(eta) = a.eta {
        file.noise = AnnealNoise::new(eta)?;
    }
    let hist = run_trials(
        &file.program,
        &file.schedule,
        &file.model,
        file.noise,
        a.trials,
        seed,
    )?;
    if hist.unsettled > 0 {
        ctx.info(format!("warning: {} trials did not settle", hist.unsettled));
    }
    let hist = if a.canonical { hist.canonical() } else { hist };
    let body = histogram_table(&hist, a.dense);
    let mut t = Table::new(&["state", "count", "probability"]);
    header(&mut t, "anneal");
    t.meta("program", json(&file.program))
        .meta("schedule", json(&file.schedule))
        .meta("model", json(&file.model))
        .meta("eta", file.noise.eta)
        .meta("kappa", file.kappa)
        .meta("wall_time_s", file.wall_time_s())
        .meta("canonical", a.canonical);
    t.metadata.extend(body.metadata);
    t.rows = body.rows;
    Ok(t)
}
