//! Simulation and analytics toolkit for an N-bank interbank lending model.
//!
//! The model couples N diffusions ("log-monetary reserves") through their
//! ensemble average and through a lending control chosen by each bank;
//! because the game is linear-quadratic, the open-loop, closed-loop and
//! mean-field Nash equilibria are all given in closed form by one scalar
//! Riccati equation. This crate provides, module by module:
//!
//! * [`model`] — the validated parameter set and equilibrium-mode selector;
//! * [`riccati`] — closed-form Riccati coefficients, long-horizon limits,
//!   the value offset μ, and an independent RK4 oracle;
//! * [`equilibrium`] — control gains, effective interbank rates, and value
//!   functions (ansatz form and expected-deviation integral form);
//! * [`simulate`] — counter-based noise, Euler-scheme path simulation under
//!   uncontrolled/equilibrium/independent policies, an exact
//!   Ornstein-Uhlenbeck sampler, first-passage default detection and
//!   realized path costs;
//! * [`risk`] — analytic default/systemic probabilities, large-deviation
//!   rate, and Monte Carlo loss distributions with binomial references;
//! * [`config`] — the nine-key parameter file format;
//! * [`csv_io`] — deterministic CSV emission and a round-trip reader.

pub mod config;
pub mod csv_io;
pub mod equilibrium;
pub mod model;
pub mod riccati;
pub mod rng;
pub mod risk;
pub mod simulate;

pub use model::{EquilibriumMode, ModelParams, ParamError};
