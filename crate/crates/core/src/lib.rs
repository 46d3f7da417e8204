//! Exact quantum probability on small tensor-factored Hilbert spaces.
//!
//! The core is generic over the real scalar type through [`Real`]
//! (implemented for `f32` and `f64`). The aliases at the crate root fix the
//! scalar to `f64`, which is what the CLI and the reference tolerances use;
//! the `*32` aliases are the single-precision counterparts.
//!
//! Module overview:
//!
//! - [`hilbert`]: states, operators, Kronecker products, projectors.
//! - [`measurement`]: PVMs, Born distributions, Lüders conditioning, support, seeded sampling.
//! - [`frames`]: contexts, support tables, global value assignments, contradiction certificates.
//! - [`scenarios`]: the Wigner's-friend protocol in both observer modes and CHSH tools.
//! - [`optimize`]: compass search used by the CHSH maximizer.

pub mod error;
pub mod frames;
pub mod hilbert;
pub mod measurement;
pub mod optimize;
pub mod scalar;
pub mod scenarios;

pub use error::{Error, Result};
pub use frames::{ContradictionCertificate, ForcedStep, ValueAssignment, Violation};
pub use measurement::{Outcome, RandomSeed};
pub use scalar::Real;
pub use scenarios::FrMode;

pub type ComplexScalar = scalar::ComplexScalar<f64>;
pub type StateVector = hilbert::StateVector<f64>;
pub type Operator = hilbert::Operator<f64>;
pub type Pvm = measurement::Pvm<f64>;
pub type OutcomeDistribution = measurement::OutcomeDistribution<f64>;
pub type Context = frames::Context<f64>;
pub type SupportTable = frames::SupportTable<f64>;
pub type FrReport = scenarios::FrReport<f64>;
pub type ChshSetting = scenarios::ChshSetting<f64>;

pub type StateVector32 = hilbert::StateVector<f32>;
pub type Operator32 = hilbert::Operator<f32>;
pub type Pvm32 = measurement::Pvm<f32>;
pub type OutcomeDistribution32 = measurement::OutcomeDistribution<f32>;
pub type SupportTable32 = frames::SupportTable<f32>;
