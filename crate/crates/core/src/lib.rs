//! Metric differential privacy for text over hyperbolic word embeddings.
//!
//! Words are mapped to points in the Poincaré ball, perturbed with noise drawn
//! from a hyperbolic distribution via Metropolis–Hastings, and discretized
//! back to the nearest vocabulary word. A Euclidean baseline (multivariate
//! exponential-norm noise over flat embeddings) and a calibration harness for
//! comparing the two (the `N_w` / `S_w` / `K_w` privacy statistics) round out
//! the crate.
//!
//! All numeric kernels are generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the `*64` aliases below are the concrete types the CLI
//! and most callers want.

pub mod density;
pub mod embeddings;
pub mod geometry;
pub mod mechanism;
pub mod real;
pub mod sampler;
pub mod stats;

pub use real::Real;

pub use geometry::{EuclideanVec, GeometryError, LorentzVec, PoincareVec};

/// Concrete `f64` aliases for the geometric types.
pub type EuclideanVec64 = EuclideanVec<f64>;
pub type PoincareVec64 = PoincareVec<f64>;
pub type LorentzVec64 = LorentzVec<f64>;

pub use density::{DensityError, HyperbolicDensity};
pub type HyperbolicDensity64 = HyperbolicDensity<f64>;

pub use sampler::{MhChain, NoiseStream, ProposalKind, SamplerConfig, SamplerError};
pub type SamplerConfig64 = SamplerConfig<f64>;
pub type NoiseStream64 = NoiseStream<f64>;

pub use embeddings::{EmbeddingError, Geometry, Vocabulary, WordId};
pub type Vocabulary64 = Vocabulary<f64>;

pub use mechanism::{
    MechanismConfig, MechanismError, NoiseApplication, NoiseSource, Policy, RedactionResult,
    TokenStatus,
};
pub type MechanismConfig64 = MechanismConfig<f64>;

pub use stats::{
    CalibrationReport, DpRatioReport, DpVerdict, PrivacyStats, StatsError, WordSample,
};
