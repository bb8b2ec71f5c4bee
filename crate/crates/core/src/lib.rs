//! Simulation toolkit for LHZ parity-architecture Ising machines built from
//! Josephson parametric oscillators.

// `!(x > 0.0)` guards are intentional: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anneal;
pub mod circuit;
pub mod cli;
pub mod config;
pub mod error;
pub mod lhz;
pub mod output;
pub mod quantum;
pub mod rng;
pub mod spin;
pub mod tile;

pub use error::{Error, Result};
