//! Random choice (Glimm) solver for steady supersonic reacting Euler flow
//! in two space dimensions, with `x` as the time-like direction.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod output;
pub mod probe;
pub mod reaction;
pub mod riemann;
pub mod run;
pub mod sampler;
pub mod scheme;
pub mod thermo;
pub mod waves;

pub use error::{GlimmError, Result};
pub use thermo::{GasConstants, GasState, ReactionRate};
