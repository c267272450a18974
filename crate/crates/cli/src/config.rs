//! Assembles a [`RunConfig`] from the config file, the preset and the flags.
//!
//! Precedence, lowest first: built-in defaults, preset, config file, flags.

use std::fs;
use std::path::PathBuf;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::args::{Cli, Format, Preset};

#[derive(Debug)]
pub struct RunConfig {
    pub command: &'static str,
    pub seed: u64,
    pub params: Value,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<String>,
    seed: Option<u64>,
    #[serde(default)]
    params: Map<String, Value>,
    output_format: Option<Format>,
    output_path: Option<PathBuf>,
    threads: Option<usize>,
}

pub fn parse_config(cli: &Cli) -> Result<RunConfig, String> {
    let command = cli.command.name();
    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str::<FileConfig>(&text).map_err(|e| format!("config {}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };
    if let Some(c) = &file.command {
        if c != command {
            return Err(format!("config file is for `{c}` but the command is `{command}`"));
        }
    }

    let mut params = file.params;
    if let Value::Object(flags) = cli.command.overrides() {
        params.extend(flags);
    }
    let params = match params.remove("preset") {
        Some(p) => {
            let preset: Preset = serde_json::from_value(p).map_err(|e| format!("preset: {e}"))?;
            let mut merged = preset_params(command, preset)?;
            merged.extend(params);
            merged
        }
        None => params,
    };

    Ok(RunConfig {
        command,
        seed: cli.seed.or(file.seed).unwrap_or(0),
        params: Value::Object(params),
        format: cli.format.or(file.output_format).unwrap_or(Format::Json),
        output: cli.output.clone().or(file.output_path),
        threads: cli.threads.or(file.threads),
    })
}

fn preset_params(command: &str, preset: Preset) -> Result<Map<String, Value>, String> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let v = match (command, preset) {
        ("zeno" | "selection", Preset::ZenoPaper) => {
            json!({ "x": 1.0, "y": 1.0, "z": 1.0, "z_im": 0.0, "c": r, "c_im": 0.0, "s": r, "s_im": 0.0 })
        }
        ("nonlocal", Preset::SingletChsh) => {
            use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
            json!({ "left": [0.0, FRAC_PI_2], "right": [FRAC_PI_4, 3.0 * FRAC_PI_4], "visibility": 1.0 })
        }
        ("lattice", Preset::MGlyph5x5) => json!({
            "edges": [5, 5, 1],
            "fields": 1,
            "values": 2,
            "rule": "identity",
            "initial": "uniform",
            "pattern": collapse_core::lattice::Pattern::m_glyph_5x5().cells,
        }),
        _ => {
            let name = serde_json::to_value(preset).expect("preset serializes");
            return Err(format!("preset {name} does not apply to `{command}`"));
        }
    };
    match v {
        Value::Object(m) => Ok(m),
        _ => unreachable!(),
    }
}
