//! Density-matrix collapse dynamics on small composite Hilbert spaces.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`, with `*32` variants for single precision.
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, partial traces,
//!   Hermitian eigensolver and `exp(-iHt)`.
//! - [`state`]: unnormalized density states, projectors, Process I reduction,
//!   sampled collapse, entropy and measurement models.
//! - [`process`]: the two-clock process trace (unitary segments and events).
//! - [`experiments`]: the three-state Zeno control model, its Monte Carlo
//!   selection estimate and the presynaptic spreading estimates.
//! - [`lattice`]: reversible lattice automata lifted to superpositions of
//!   whole configurations and pattern-triggered collapse.
//! - [`nonlocality`]: two-region Born-rule tables, the CHSH criterion and an
//!   exact local-model LP.

pub mod error;
pub mod experiments;
pub mod lattice;
pub mod linalg;
pub mod nonlocality;
pub mod process;
pub mod rng;
pub mod sample;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, CompositeSpace};
pub use process::ProcessTrace;
pub use scalar::Real;
pub use state::{Answer, DensityState, Projector};

pub type CMatrix = ComplexMatrix<f64>;
pub type CMatrix32 = ComplexMatrix<f32>;
pub type State = DensityState<f64>;
pub type State32 = DensityState<f32>;
pub type Proj = Projector<f64>;
pub type Proj32 = Projector<f32>;
pub type Trace = ProcessTrace<f64>;
pub type Trace32 = ProcessTrace<f32>;
pub type Zeno = experiments::ZenoParams<f64>;
pub type Superposition = lattice::SuperpositionState<f64>;
pub type Correlations = nonlocality::CorrelationTable<f64>;
pub type Experiment = nonlocality::BipartiteExperiment<f64>;
