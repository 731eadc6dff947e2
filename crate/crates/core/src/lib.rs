//! Deterministic simulation of five progressively richer human/AI production
//! models, together with the calibration and curve-fitting machinery that
//! parameterizes them.
//!
//! The crate is organized bottom-up:
//!
//! - [`model`]: closed-form production functions (pure human, AI
//!   collaboration, network externality, autonomous AI production, and the
//!   combined model).
//! - [`dynamics`]: time paths for AI capability, agent population, the
//!   leader/follower capability gap and the follower's AI efficiency.
//! - [`calibration`]: back-solving baseline efficiencies from GDP and capital
//!   observations.
//! - [`fitting`]: least-squares fitters for the quadratic, logistic and
//!   stretched-exponential curves.
//! - [`scenario`]: the built-in scenario registry, the simulation runner,
//!   comparisons and parameter sweeps.
//! - [`io`] and [`cli`]: CSV/JSON ingestion and emission, and the command-line
//!   front end used by the `aiecon` binary.
//!
//! Every public function is pure and deterministic; there is no RNG anywhere
//! in the engine.

// NaN must fail domain checks, hence `!(x > 0.0)` rather than `x <= 0.0`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fitting;
pub mod io;
pub mod model;
pub mod scenario;

pub use error::{Error, Result};
pub use model::{CountryProfile, EnhancementParams, NetworkParams, OutputBreakdown};
pub use scenario::{builtin_scenarios, compare, run, ModelKind, Registry, ScenarioConfig};
