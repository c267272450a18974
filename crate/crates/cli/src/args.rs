//! Flag definitions. Every experiment parameter is optional on the command
//! line so that unset flags fall through to the config file and then to the
//! documented defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "collapse",
    version,
    about = "Collapse-dynamics experiments with seeded, reproducible output"
)]
pub struct Cli {
    /// Master seed for every random draw (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output format (default json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Worker threads for Monte Carlo trials (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    ZenoPaper,
    SingletChsh,
    #[value(name = "m-glyph-5x5")]
    #[serde(rename = "m-glyph-5x5")]
    MGlyph5x5,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Three-state Zeno model: matrix run and closed form, with and without the early question.
    Zeno(ZenoArgs),
    /// Presynaptic ion spreading estimates.
    Synapse(SynapseArgs),
    /// Lattice configuration counts, superposition dynamics and pattern collapse.
    Lattice(LatticeArgs),
    /// Two-region correlations, CHSH values and the local-model verdict.
    Nonlocal(NonlocalArgs),
    /// Driven qubit with repeated questions; emits the event log and staircase.
    Trace(TraceArgs),
    /// Monte Carlo estimate of the Zeno selection advantage.
    Selection(SelectionArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Zeno(_) => "zeno",
            Command::Synapse(_) => "synapse",
            Command::Lattice(_) => "lattice",
            Command::Nonlocal(_) => "nonlocal",
            Command::Trace(_) => "trace",
            Command::Selection(_) => "selection",
        }
    }

    /// The flags that were actually given, as a JSON object of parameter overrides.
    pub fn overrides(&self) -> serde_json::Value {
        let v = match self {
            Command::Zeno(a) => serde_json::to_value(a),
            Command::Synapse(a) => serde_json::to_value(a),
            Command::Lattice(a) => serde_json::to_value(a),
            Command::Nonlocal(a) => serde_json::to_value(a),
            Command::Trace(a) => serde_json::to_value(a),
            Command::Selection(a) => serde_json::to_value(a),
        };
        v.expect("flag structs serialize")
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ZenoFlags {
    /// Population of the neighbor state.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    /// Population of the template state.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    /// Coherence between neighbor and template (real part).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_im: Option<f64>,
    /// Mixing amplitude c (real part).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_im: Option<f64>,
    /// Mixing amplitude s (real part).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_im: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ZenoArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ZenoFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct SelectionArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    /// Number of Monte Carlo trials (default 100000).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ZenoFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct SynapseArgs {
    /// Ion mass in kg.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ion_mass: Option<f64>,
    /// Temperature in K.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    /// Channel diameter in m.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_diameter: Option<f64>,
    /// Channel-to-trigger distance in m.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub travel_distance: Option<f64>,
    /// Number of synapses for the branch count.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synapses: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct LatticeArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    /// Lattice edges nx,ny,nz.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<u64>>,
    /// Fields per site.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fields: Option<u64>,
    /// Values per field.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<u64>,
    /// Update rule: identity, xor, shift or zero (tables via the config file).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    /// Number of steps applied before the pattern question.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u32>,
    /// Constrain every z = 0 face site (field 0) to this value.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face_value: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct NonlocalArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    /// Left measurement angles θ0,θ1 (radians, x–z plane).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<f64>>,
    /// Right measurement angles θ0,θ1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<f64>>,
    /// Singlet weight against white noise (default 1).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visibility: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct TraceArgs {
    /// Drive strength: H = ω σx.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Evolution time between questions.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Number of questions.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Explicit question times, increasing; replaces dt and steps.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
}
