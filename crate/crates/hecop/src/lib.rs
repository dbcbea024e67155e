//! Numerical laboratory for radial coth-drift particle systems of types
//! A, B, C, D: path simulation, exact matrix-model samplers, closed-form
//! chamber densities, and the free-probability large-N limit engine.
//!
//! The crate is organized around the pipeline
//! `rootsys` (root-system data and special functions) →
//! `sde` / `matmodel` (two independent realizations of the same laws) →
//! `density` (closed-form densities with Monte Carlo self-tests) →
//! `freeprob` (limit measures via cumulants and subordination) →
//! `stats` (empirical-measure estimates and convergence checks),
//! all driven by the `hecop` binary (see `cli`).

pub mod cli;
pub mod density;
pub mod error;
pub mod freeprob;
pub mod matmodel;
pub mod rng;
pub mod rootsys;
pub mod sde;
pub mod stats;

pub use error::{Error, Result};
