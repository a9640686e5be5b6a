//! Simulation and inference library for a three-qubit clock-synchronization
//! protocol in which one party measures the other's quantum clock through a
//! proxy qubit.
//!
//! The crate is split along the natural seams of the problem:
//!
//! - [`qstate`]: a dense state-vector engine for up to three qubits
//!   (tensor products, single-/two-qubit unitaries, Born-rule measurement).
//! - [`spacetime`]: flat 1+1-dimensional Minkowski geometry with events,
//!   interval classification, boosts, and flat simultaneity surfaces.
//! - [`protocol`]: the protocol itself, covering state preparation, the
//!   proxy interaction, reduction-model semantics, and deterministic trial
//!   sampling.
//! - [`stats`]: inference over outcome tallies, covering phase estimation,
//!   goodness of fit, likelihood-ratio discrimination, and sample-size
//!   planning.
//! - [`rng`]: the counter-based uniform stream that makes every sampled
//!   quantity a pure function of `(seed, stream, draw)`.
//!
//! All numeric code is generic over the scalar type through [`scalar::Real`]
//! (implemented for `f32` and `f64`); the `*64` aliases at the crate root are
//! the concrete types used by the command-line front end and the test suite.

pub mod protocol;
pub mod qstate;
pub mod rng;
pub mod scalar;
pub mod spacetime;
pub mod stats;

pub use scalar::Real;

/// Double-precision aliases for the commonly used types.
pub type Amplitude64 = qstate::Amplitude<f64>;
pub type StateVector64 = qstate::StateVector<f64>;
pub type SingleQubitUnitary64 = qstate::SingleQubitUnitary<f64>;
pub type JointProbs64 = qstate::JointProbs<f64>;
pub type SpacetimeEvent64 = spacetime::SpacetimeEvent<f64>;
pub type FlatHypersurface64 = spacetime::FlatHypersurface<f64>;
pub type StaticWorldline64 = spacetime::StaticWorldline<f64>;
pub type ReductionModel64 = protocol::ReductionModel<f64>;
pub type ProtocolConfig64 = protocol::ProtocolConfig<f64>;
pub type TrialRecord64 = protocol::TrialRecord<f64>;
pub type PhaseEstimate64 = stats::PhaseEstimate<f64>;
