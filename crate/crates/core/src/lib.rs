//! Simultaneous tunnelling of two particles through a rectangular barrier.
//!
//! The crate evaluates the probability that both particles of a pair are
//! transmitted, for distinguishable particles, bosons and fermions prepared
//! in product states, two-term mixtures or coherent two-term superpositions.
//! Each one-particle state is a narrow Gaussian momentum packet whose
//! transmission is taken from the central mode, and whose post-barrier
//! overlaps follow from an effective momentum built from the Wigner-Smith
//! delay. The [`oracle`] module supplies independent numerical checks.

pub mod barrier;
pub mod config;
pub mod error;
pub mod oracle;
pub mod packets;
pub mod plot;
pub mod probabilities;
pub mod states;
pub mod sweep;
pub mod tolerance;
pub mod units;
pub mod validate;

pub use barrier::{BarrierSpec, ModeParams, ScatterResult};
pub use error::{Error, Result};
pub use packets::{OverlapSet, PacketLabel, PacketSpec};
pub use probabilities::{Context, ProbabilityReport};
pub use states::{Exchange, Form, NormSet, ScenarioSpec, Statistics, Term};
pub use tolerance::Tolerances;
pub use units::Units;
