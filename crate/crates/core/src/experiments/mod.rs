//! Golden-number experiments built on the collapse machinery.

mod selection;
mod synapse;
mod zeno;

pub use selection::{selection_advantage_mc, SelectionRates};
pub use synapse::{branch_count, synapse_estimates, SynapseEstimates, SynapseParams, BOLTZMANN, HBAR};
pub use zeno::{zeno_closed_form, zeno_matrix_run, ZenoModel, ZenoParams, ZenoRun, MOTOR, NEIGHBOR, TEMPLATE};
