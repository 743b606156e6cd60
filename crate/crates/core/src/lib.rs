//! Bounded traveling waves of the singular ODE
//! `u * u'' + u'^2 / 2 + F'(u) = 0` for polynomial potentials F.
//!
//! The planar system behind the equation conserves H(u, v) = u v^2 / 2 +
//! F(u), and every bounded wave lives on a level curve {H = h} whose
//! branches are v = +-sqrt(2 (h - F(u)) / u). This crate classifies all
//! bounded wave types a level supports (smooth periodic/solitary/front,
//! peaked, cusped, compactly supported, composite, finite-decay front,
//! plateau), constructs sampled profiles by inverting time-of-flight
//! integrals, certifies them against the weak formulation, and reproduces
//! the energy-classification tables for the Camassa-Holm family and the
//! moderate-amplitude shallow-water equation.
//!
//! Batch operations (level sweeps, table reproduction, parameter scans) are
//! data-parallel via rayon under the `parallel` feature (enabled by
//! default); disabling it gives a dependency-free sequential build.

pub mod classify;
pub mod error;
pub mod exec;
pub mod io;
pub mod models;
pub mod poly;
pub mod potential;
pub mod profile;
pub mod quad;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use potential::Potential;
