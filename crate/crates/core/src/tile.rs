//! Classical energy of the six-oscillator tile.
//!
//! Four logical spins `s1..s4` and two ancillas `a1, a2`:
//!
//! ```text
//! E = sum_i J_i s_i - (J_a1 a1 + J_a2 a2 + C_cnst) * s1 s2 s3 s4
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{enumerate_ground_states, SpinConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileParams {
    pub j: [f64; 4],
    pub j_a1: f64,
    pub j_a2: f64,
    pub c_cnst: f64,
}

impl TileParams {
    /// Uniform logical field `j_b`, equal ancilla strength `j_a`.
    pub fn uniform(j_b: f64, j_a: f64, c_cnst: f64) -> Self {
        Self {
            j: [j_b; 4],
            j_a1: j_a,
            j_a2: j_a,
            c_cnst,
        }
    }

    pub fn with_fields(j: [f64; 4], j_a: f64, c_cnst: f64) -> Self {
        Self {
            j,
            j_a1: j_a,
            j_a2: j_a,
            c_cnst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TileConfig {
    pub logical: [i8; 4],
    pub ancilla: [i8; 2],
}

impl TileConfig {
    pub fn new(logical: [i8; 4], ancilla: [i8; 2]) -> Result<Self> {
        if logical.iter().chain(ancilla.iter()).any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("tile spins must be -1 or +1"));
        }
        Ok(Self { logical, ancilla })
    }

    /// Six spins ordered `s1..s4, a1, a2`.
    pub fn from_spins(s: &SpinConfig) -> Result<Self> {
        if s.len() != 6 {
            return Err(Error::invalid(format!(
                "a tile has 6 spins, got {}",
                s.len()
            )));
        }
        let v = s.spins();
        Self::new([v[0], v[1], v[2], v[3]], [v[4], v[5]])
    }

    /// 6-bit basis index, `s1` most significant.
    pub fn from_index(index: u8) -> Self {
        Self::from_spins(&SpinConfig::from_index(u64::from(index), 6))
            .expect("index decodes to valid spins")
    }

    pub fn to_spins(&self) -> SpinConfig {
        let mut v = self.logical.to_vec();
        v.extend_from_slice(&self.ancilla);
        SpinConfig::new(v).expect("tile spins are valid")
    }

    pub fn index(&self) -> u8 {
        self.to_spins().index() as u8
    }

    /// 4-bit index of the logical spins.
    pub fn logical_index(&self) -> u8 {
        self.logical
            .iter()
            .fold(0u8, |acc, &s| (acc << 1) | u8::from(s > 0))
    }

    /// Product of the logical spins.
    pub fn parity(&self) -> i8 {
        self.logical.iter().product()
    }
}

pub fn tile_energy(params: &TileParams, config: &TileConfig) -> f64 {
    let field: f64 = params
        .j
        .iter()
        .zip(config.logical)
        .map(|(j, s)| j * f64::from(s))
        .sum();
    let prod = f64::from(config.parity());
    field
        - params.j_a1 * f64::from(config.ancilla[0]) * prod
        - params.j_a2 * f64::from(config.ancilla[1]) * prod
        - params.c_cnst * prod
}

/// Energy with the shared ancilla strength factored out of the four-body term.
pub fn tile_energy_effective(params: &TileParams, config: &TileConfig) -> Result<f64> {
    if params.j_a1 != params.j_a2 {
        return Err(Error::invalid(format!(
            "effective form needs equal ancilla couplings, got {} and {}",
            params.j_a1, params.j_a2
        )));
    }
    let j_a = params.j_a1;
    let field: f64 = params
        .j
        .iter()
        .zip(config.logical)
        .map(|(j, s)| j * f64::from(s))
        .sum();
    let coupler =
        f64::from(config.ancilla[1]) * j_a + f64::from(config.ancilla[0]) * j_a + params.c_cnst;
    Ok(field - coupler * f64::from(config.parity()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TileGroundSet {
    pub min_energy: f64,
    pub configs: Vec<TileConfig>,
}

pub fn ground_set(params: &TileParams) -> TileGroundSet {
    ground_set_clamped(params, None)
}

/// Ground set with the ancillas optionally held at fixed values.
pub fn ground_set_clamped(params: &TileParams, clamp: Option<[i8; 2]>) -> TileGroundSet {
    let g = enumerate_ground_states(
        |s| {
            let c = TileConfig::from_spins(s).expect("six spins");
            match clamp {
                Some(a) if a != c.ancilla => f64::INFINITY,
                _ => tile_energy(params, &c),
            }
        },
        6,
    )
    .expect("six spins are within the enumeration bound");
    TileGroundSet {
        min_energy: g.min_energy,
        configs: g
            .configs
            .iter()
            .map(|s| TileConfig::from_spins(s).expect("six spins"))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport {
    pub valid: bool,
    /// Ground states whose logical parity is -1.
    pub violations: Vec<TileConfig>,
}

pub fn lhz_parity_valid(params: &TileParams) -> ParityReport {
    let violations: Vec<TileConfig> = ground_set(params)
        .configs
        .into_iter()
        .filter(|c| c.parity() < 0)
        .collect();
    ParityReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// All 64 configurations in basis order.
pub fn all_configs() -> impl Iterator<Item = TileConfig> {
    (0u8..64).map(TileConfig::from_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(l: [i8; 4], a: [i8; 2]) -> TileConfig {
        TileConfig::new(l, a).unwrap()
    }

    #[test]
    fn table_rows() {
        let p = TileParams::uniform(1.0, 2.0, 1.0);
        assert_eq!(tile_energy(&p, &c([1, 1, 1, 1], [1, 1])), -1.0);
        assert_eq!(tile_energy(&p, &c([1, 1, -1, -1], [1, -1])), -1.0);
        assert_eq!(tile_energy(&p, &c([-1, -1, -1, -1], [-1, -1])), -1.0);
    }

    #[test]
    fn zero_params() {
        let p = TileParams::uniform(0.0, 0.0, 0.0);
        assert!(all_configs().all(|cfg| tile_energy(&p, &cfg) == 0.0));
    }

    #[test]
    fn effective_form_examples() {
        let p = TileParams::uniform(1.0, 1.0, 1.0);
        for cfg in all_configs() {
            assert_eq!(tile_energy_effective(&p, &cfg).unwrap(), tile_energy(&p, &cfg));
        }
        let q = TileParams::uniform(0.0, 1.5, 0.5);
        assert_eq!(
            tile_energy_effective(&q, &c([1, -1, -1, 1], [1, 1])).unwrap(),
            -2.0 * 1.5 - 0.5
        );
        assert_eq!(
            tile_energy_effective(&q, &c([1, -1, 1, 1], [-1, -1])).unwrap(),
            -2.0 * 1.5 + 0.5
        );
        let mut r = q.clone();
        r.j_a2 = 0.0;
        assert!(tile_energy_effective(&r, &c([1, 1, 1, 1], [1, 1])).is_err());
    }

    #[test]
    fn ground_set_examples() {
        let g = ground_set(&TileParams::uniform(0.0, 1.0, 1.0));
        assert_eq!(g.min_energy, -3.0);
        assert_eq!(g.configs.len(), 8);
        assert!(g.configs.iter().all(|c| c.parity() == 1 && c.ancilla == [1, 1]));

        // small uniform positive fields: every logical spin wants to point down
        let g = ground_set(&TileParams::uniform(0.1, 1.0, 1.0));
        assert_eq!(g.configs, vec![c([-1, -1, -1, -1], [1, 1])]);

        let g = ground_set(&TileParams::uniform(0.0, 0.0, 1.0));
        assert_eq!(g.configs.len(), 32);
        assert!(g.configs.iter().all(|c| c.parity() == 1));
    }

    #[test]
    fn clamped_ancillas() {
        let p = TileParams::uniform(0.0, 1.0, 1.0);
        let g = ground_set_clamped(&p, Some([-1, -1]));
        assert!(g.configs.iter().all(|c| c.ancilla == [-1, -1]));
        // 2 J_a > C: the clamped ancillas flip the preferred parity
        assert!(g.configs.iter().all(|c| c.parity() == -1));
        assert_eq!(g.min_energy, -1.0);
    }

    #[test]
    fn parity_validity() {
        assert!(lhz_parity_valid(&TileParams::uniform(0.0, 1.0, 1.0)).valid);
        let r = lhz_parity_valid(&TileParams::uniform(0.0, 1.0, -1.0));
        assert!(!r.valid);
        assert!(!r.violations.is_empty());
        assert!(lhz_parity_valid(&TileParams::uniform(0.0, 0.0, 1.0)).valid);
    }

    #[test]
    fn index_layout() {
        let cfg = c([1, -1, -1, 1], [-1, 1]);
        assert_eq!(cfg.index(), 0b100101);
        assert_eq!(cfg.logical_index(), 0b1001);
        assert_eq!(TileConfig::from_index(0b100101), cfg);
    }

    fn arb_params() -> impl Strategy<Value = TileParams> {
        (
            prop::array::uniform4(-2.0f64..2.0),
            -2.0f64..2.0,
            -2.0f64..2.0,
            -3.0f64..3.0,
        )
            .prop_map(|(j, a1, a2, cc)| TileParams {
                j,
                j_a1: a1,
                j_a2: a2,
                c_cnst: cc,
            })
    }

    proptest! {
        #[test]
        fn effective_matches_full(mut p in arb_params()) {
            p.j_a2 = p.j_a1;
            for cfg in all_configs() {
                let d = tile_energy_effective(&p, &cfg).unwrap() - tile_energy(&p, &cfg);
                prop_assert!(d.abs() <= 1e-12);
            }
        }

        #[test]
        fn logical_flip_symmetry_without_fields(mut p in arb_params()) {
            p.j = [0.0; 4];
            for cfg in all_configs() {
                let flipped = TileConfig::new(cfg.logical.map(|s| -s), cfg.ancilla).unwrap();
                prop_assert_eq!(tile_energy(&p, &cfg), tile_energy(&p, &flipped));
            }
        }

        #[test]
        fn field_free_ground_states(j_a in 0.01f64..3.0, cc in 0.01f64..3.0) {
            let g = ground_set(&TileParams::uniform(0.0, j_a, cc));
            prop_assert!((g.min_energy - (-2.0 * j_a - cc)).abs() < 1e-12);
            prop_assert!(g.configs.iter().all(|c| c.parity() == 1 && c.ancilla == [1, 1]));
        }

        #[test]
        fn penalty_shift(p in arb_params(), delta in 0.01f64..2.0) {
            let mut q = p.clone();
            q.c_cnst += delta;
            for cfg in all_configs() {
                let d = tile_energy(&q, &cfg) - tile_energy(&p, &cfg);
                let expected = -delta * f64::from(cfg.parity());
                prop_assert!((d - expected).abs() < 1e-12);
            }
        }
    }
}
