//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fail.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lhz_jpo::anneal::{
    classify_state, dft_phase, johnson_noise_amplitude,
    run_trial_results, run_trials, AnnealNoise, AnnealSchedule, CouplingProgram,
    OscillatorModel,
};
use lhz_jpo::circuit::{
    calibrate_resonator, pump_frequency, resonance_frequency, squid_inductance, ResonatorParams,
    SquidParams, K_B, PHI0,
};
use lhz_jpo::lhz::{build_layout, canonical, decode_readout, lhz_energy, map_couplings, LhzProblem};
use lhz_jpo::quantum::{
    build_hamiltonian, default_sweep, ground_states, min_sweep_gap, sweep_distribution,
    NoiseDistribution, NoiseSpec,
};
use lhz_jpo::spin::{ising_energy, IsingProblem, SpinConfig};
use lhz_jpo::tile::{ground_set, tile_energy, TileConfig, TileParams};
use lhz_jpo::Error;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

const EVEN: [u8; 8] = [0b0000, 0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100, 0b1111];

fn tile_energy_oracle() -> Check {
    let p = TileParams::uniform(1.0, 2.0, 1.0);
    let rows = [
        ([1, 1, 1, 1], [1, 1]),
        ([1, 1, -1, -1], [1, -1]),
        ([-1, -1, -1, -1], [-1, -1]),
    ];
    for (l, a) in rows {
        let e = tile_energy(&p, &TileConfig::new(l, a).map_err(|e| e.to_string())?);
        ensure!(e == -1.0, "E{l:?}{a:?} = {e}, expected -1");
    }
    Ok("three rows give E = -J_C exactly".into())
}

fn parity_enforcement() -> Check {
    for (j_a, c) in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.25)] {
        let g = ground_set(&TileParams::uniform(0.0, j_a, c));
        let mut logical: Vec<u8> = g.configs.iter().map(|c| c.logical_index()).collect();
        logical.sort_unstable();
        ensure!(logical == EVEN, "J_a={j_a}, C={c}: logical ground states {logical:?}");
        ensure!(
            g.configs.iter().all(|c| c.ancilla == [1, 1]),
            "J_a={j_a}, C={c}: ancillas not (+1,+1)"
        );
    }
    Ok("8 even-parity states, ancillas (+1,+1)".into())
}

fn quantum_classical_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let draws = 200;
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let j: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let j_a = rng.random_range(0.0..2.0);
        let j_c = rng.random_range(-3.0..3.0);
        let p = TileParams::with_fields(j, j_a, j_c);
        let e = ground_states(&build_hamiltonian(&p), None)
            .map_err(|e| e.to_string())?
            .e_min;
        // independent closed form: ancillas in X eigenstates contribute -2 J_a
        let classical = (0u8..16)
            .map(|s| {
                let spins: [f64; 4] =
                    std::array::from_fn(|i| if (s >> (3 - i)) & 1 == 1 { 1.0 } else { -1.0 });
                let field: f64 = j.iter().zip(&spins).map(|(a, b)| a * b).sum();
                field - spins.iter().product::<f64>() * j_c
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max((e - (classical - 2.0 * j_a)).abs());
    }
    ensure!(worst <= 1e-9, "max deviation {worst:e}");
    Ok(format!("{draws} draws, max deviation {worst:.1e}"))
}

fn even_support_quantum() -> Check {
    let base = TileParams::uniform(0.0, 1.0, 1.0);
    let fields = default_sweep(base.c_cnst);
    let clean = sweep_distribution(&base, &fields, &NoiseSpec::none(), fields.len())
        .map_err(|e| e.to_string())?;
    ensure!(clean.support(1e-9) == EVEN, "noise-free support {:?}", clean.support(1e-9));
    let gap = min_sweep_gap(&base, &fields).map_err(|e| e.to_string())?;
    let noise = NoiseSpec::new(0.1 * gap, NoiseDistribution::Uniform, 99).map_err(|e| e.to_string())?;
    let noisy = sweep_distribution(&base, &fields, &noise, 1000).map_err(|e| e.to_string())?;
    ensure!(noisy.support(1e-9) == EVEN, "noisy support {:?}", noisy.support(1e-9));
    Ok(format!("support = 8 even states, noise 0.1 x gap ({gap}) over 1000 trials"))
}

fn even_parity_anneal() -> Check {
    let h = run_trials(
        &CouplingProgram::even_parity(),
        &AnnealSchedule::default(),
        &OscillatorModel::default(),
        AnnealNoise::default(),
        1000,
        8,
    )
    .map_err(|e| e.to_string())?;
    ensure!(h.unsettled == 0, "{} unsettled trials", h.unsettled);
    ensure!(h.support().iter().all(|s| EVEN.contains(s)), "odd outcome in {:?}", h.support());
    let mut worst = 0.0f64;
    for s in EVEN {
        let p = h.probability(s);
        ensure!((p - 0.125).abs() <= 0.035, "P({s:04b}) = {p}");
        worst = worst.max((p - 0.125).abs());
    }
    Ok(format!("0 unsettled, all even, max |p - 0.125| = {worst:.3}"))
}

fn alternating_anneal() -> Check {
    let h = run_trials(
        &CouplingProgram::alternating(),
        &AnnealSchedule::default(),
        &OscillatorModel::default(),
        AnnealNoise::default(),
        1000,
        9,
    )
    .map_err(|e| e.to_string())?;
    ensure!(h.support() == vec![0b0101, 0b1010], "support {:?}", h.support());
    let (a, b) = (h.probability(0b0101), h.probability(0b1010));
    ensure!((a - 0.5).abs() <= 0.05 && (b - 0.5).abs() <= 0.05, "P = {a}, {b}");
    Ok(format!("P(0101) = {a:.3}, P(1010) = {b:.3}"))
}

fn resonance_calibration() -> Check {
    let squid = SquidParams::new(7.5e-12, 7.5e-12, 80e-6, 80e-6).map_err(|e| e.to_string())?;
    let omega_r = 2.0 * PI * 5.0e9;
    let target = 2.0 * PI * 7.5e9;
    let l_r = calibrate_resonator(target, omega_r, &squid, squid.l1).map_err(|e| e.to_string())?;
    let res = ResonatorParams::new(omega_r, l_r, 1e-12).map_err(|e| e.to_string())?;
    let omega0 = resonance_frequency(&res, &squid, squid.l1, 0.0).map_err(|e| e.to_string())?;
    let f0 = omega0 / (2.0 * PI);
    let rel = ((f0 - 7.5e9) / 7.5e9).abs();
    ensure!(rel <= 1e-9, "f0 = {f0} Hz (rel {rel:e})");
    let pump = pump_frequency(7.5e9).map_err(|e| e.to_string())?;
    ensure!(pump == 15.0e9, "pump = {pump}");
    ensure!(pump_frequency(omega0).map_err(|e| e.to_string())? == 2.0 * omega0, "pump != 2 omega0");
    Ok(format!("f0 = {f0} Hz (rel {rel:.1e}), pump 15 GHz"))
}

fn squid_divergence() -> Check {
    let s = SquidParams::reference();
    ensure!(
        matches!(squid_inductance(&s, PHI0 / 2.0), Err(Error::Divergence { .. })),
        "no divergence error at PHI0/2"
    );
    let l0 = squid_inductance(&s, 0.0).map_err(|e| e.to_string())?;
    let l3 = squid_inductance(&s, PHI0 / 3.0).map_err(|e| e.to_string())?;
    let rel = (l3 / (2.0 * l0) - 1.0).abs();
    ensure!(rel <= 1e-12, "L(PHI0/3) / 2 L(0) off by {rel:e}");
    let l_period = squid_inductance(&s, PHI0 / 3.0 + PHI0).map_err(|e| e.to_string())?;
    ensure!((l_period / l3 - 1.0).abs() <= 1e-9, "not periodic in PHI0");
    Ok(format!("diverges at PHI0/2, L(PHI0/3) = 2 L(0) (rel {rel:.1e})"))
}

fn lhz_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 3..=5 {
        let layout = build_layout(n).map_err(|e| e.to_string())?;
        // dyadic couplings keep every sum exact
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i, j, f64::from(rng.random_range(-16i32..=16)) / 8.0));
            }
        }
        let problem = IsingProblem::couplings_only(n, &pairs).map_err(|e| e.to_string())?;
        let c = 3.0;
        let lhz = LhzProblem::new(map_couplings(&problem).map_err(|e| e.to_string())?, c)
            .map_err(|e| e.to_string())?;
        let shift = -c * layout.tiles.len() as f64;
        for index in 0..(1u64 << n) {
            let logical = SpinConfig::from_index(index, n);
            let physical = layout.encode(&logical).map_err(|e| e.to_string())?;
            ensure!(layout.violated_tiles(&physical).is_empty(), "N={n}: {logical} violates tiles");
            let back = decode_readout(&physical, &layout).map_err(|e| e.to_string())?;
            ensure!(back == canonical(&logical), "N={n}: {logical} decodes to {back}");
            let e_phys = lhz_energy(&lhz, &layout, &physical).map_err(|e| e.to_string())?;
            let e_log = ising_energy(&problem, &logical).map_err(|e| e.to_string())?;
            ensure!(e_phys - shift == e_log, "N={n}, {logical}: {e_phys} - {shift} != {e_log}");
        }
    }
    Ok("N = 3, 4, 5: all configurations round-trip, energies equal exactly".into())
}

fn noise_formula() -> Check {
    let got = johnson_noise_amplitude(15.0, 4.2).map_err(|e| e.to_string())?;
    let independent = (4.0 * 15.0 * 4.2 * K_B).sqrt();
    ensure!((got - independent).abs() <= 1e-15 * independent, "{got} vs {independent}");
    let rel = (got / 5.90e-11 - 1.0).abs();
    ensure!(rel <= 0.005, "{got} is {rel:.4} away from 5.90e-11");
    Ok(format!("I_N = {got:.4e} A (rel {rel:.1e} from 5.90e-11)"))
}

fn dft_readout() -> Check {
    let (f0, dt) = (7.5e9, 1.0 / (7.5e9 * 32.0));
    let samples = 32 * 10;
    for (phase, bit) in [(0.0, Some(0)), (PI / 3.0, None), (PI, Some(1))] {
        let x: Vec<f64> = (0..samples)
            .map(|k| (2.0 * PI * f0 * k as f64 * dt + phase).cos())
            .collect();
        let got = dft_phase(&x, dt, f0).map_err(|e| e.to_string())?;
        let err = (got - phase + PI).rem_euclid(2.0 * PI) - PI;
        ensure!(err.abs() <= 1e-6, "phase {phase}: got {got}");
        if let Some(b) = bit {
            ensure!(classify_state(got).map_err(|e| e.to_string())? == b, "phase {phase}: wrong bit");
        }
    }
    Ok("phases 0, pi/3, pi recovered within 1e-6 rad; 0 -> 0, pi -> 1".into())
}

fn reproducibility() -> Check {
    // library level: identical results for one and four workers
    let run_in = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                run_trial_results(
                    &CouplingProgram::alternating(),
                    &AnnealSchedule::default(),
                    &OscillatorModel::default(),
                    AnnealNoise::default(),
                    200,
                    5,
                )
            })
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run_in(1)?, run_in(4)?);
    ensure!(a == b, "trial results depend on worker count");

    // file level: every randomised command, re-run and with other worker counts
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let d = |f: &str| data.join(f).to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["anneal".into(), "--program".into(), d("even_parity.toml"), "--trials".into(), "300".into(), "--seed".into(), "12".into()],
        vec!["anneal".into(), "--program".into(), d("alternating.toml"), "--trials".into(), "300".into(), "--seed".into(), "12".into(), "--format".into(), "json".into()],
        vec!["tile".into(), "quantum".into(), "--params".into(), d("parity.toml"), "--trials".into(), "96".into(), "--seed".into(), "12".into(), "--noise".into(), "0.05".into()],
        vec!["circuit".into(), "iv".into(), "--config".into(), d("jpo.toml"), "--seed".into(), "12".into()],
    ];
    for (k, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for (rep, workers) in ["1", "1", "3", "8"].iter().enumerate() {
            let out = dir.path().join(format!("{k}_{rep}.out"));
            let status = Command::new(env!("CARGO_BIN_EXE_lhz-jpo"))
                .args(args)
                .args(["--workers", workers, "--quiet", "--out"])
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            ensure!(status.success(), "{args:?} failed");
            outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        ensure!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "{} output differs between runs",
            args[..2].join(" ")
        );
    }
    Ok(format!("{} commands byte-identical across reruns and 1/3/8 workers", commands.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("tile energy oracle", tile_energy_oracle, None),
        ("parity enforcement", parity_enforcement, None),
        ("quantum/classical equivalence", quantum_classical_equivalence, None),
        ("even-parity quantum support", even_support_quantum, None),
        ("even-parity anneal", even_parity_anneal, Some(Duration::from_secs(60))),
        ("alternating-field anneal", alternating_anneal, Some(Duration::from_secs(60))),
        ("resonance calibration", resonance_calibration, None),
        ("SQUID divergence and periodicity", squid_divergence, None),
        ("LHZ encode/decode round trip", lhz_round_trip, None),
        ("Johnson noise formula", noise_formula, None),
        ("DFT phase readout", dft_readout, None),
        ("reproducibility", reproducibility, None),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let over = budget.filter(|b| took > *b);
        match (result, over) {
            (Ok(detail), None) => {
                println!("PASS  {:>2}. {name}: {detail} [{took:.2?}]", k + 1);
            }
            (Ok(detail), Some(b)) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {detail}, but took {took:.2?} > {b:?}", k + 1);
            }
            (Err(why), _) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {why} [{took:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
