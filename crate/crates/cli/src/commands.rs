//! Typed parameters for each command and the dispatch into the library.
//!
//! Parameter parsing fails with a usage error before anything is computed;
//! everything after that point reports library errors.

use num_complex::Complex;
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use collapse_core::experiments::{
    branch_count, selection_advantage_mc, synapse_estimates, zeno_closed_form, zeno_matrix_run, SynapseParams,
    ZenoParams,
};
use collapse_core::lattice::{
    gestalt_collapse, lift_to_superposition, pattern_projector, quantum_step, ClassicalConfig, ConfigSpaceSize,
    FaceCell, InitialDistribution, LatticeConfig, Pattern, Rule,
};
use collapse_core::linalg::{pauli, CompositeSpace};
use collapse_core::nonlocality::{
    joint_probs, loc_report, local_model_check, BinaryMeasurement, BipartiteExperiment, CorrelationTable, Table,
};
use collapse_core::process::Evolution;
use collapse_core::rng::engine;
use collapse_core::{ComplexMatrix, DensityState, Error, ProcessTrace, Projector};

/// Output of a command: the JSON result plus an optional table that replaces
/// the flattened key/value CSV.
pub struct Report {
    pub result: Value,
    pub table: Option<(Vec<&'static str>, Vec<Vec<Value>>)>,
}

impl Report {
    fn scalar(result: Value) -> Self {
        Self { result, table: None }
    }
}

pub enum Params {
    Zeno(ZenoIn),
    Synapse(SynapseIn),
    Lattice(LatticeIn),
    Nonlocal(NonlocalIn),
    Trace(TraceIn),
    Selection(SelectionIn),
}

impl Params {
    pub fn parse(command: &str, params: Value) -> Result<Self, String> {
        Ok(match command {
            "zeno" => Params::Zeno(typed(params)?),
            "synapse" => Params::Synapse(typed(params)?),
            "lattice" => Params::Lattice(typed(params)?),
            "nonlocal" => Params::Nonlocal(typed(params)?),
            "trace" => Params::Trace(typed(params)?),
            "selection" => {
                let mut map = match params {
                    Value::Object(m) => m,
                    _ => Map::new(),
                };
                let trials = match map.remove("trials") {
                    Some(v) => serde_json::from_value(v).map_err(|e| format!("trials: {e}"))?,
                    None => DEFAULT_TRIALS,
                };
                Params::Selection(SelectionIn {
                    trials,
                    zeno: typed(Value::Object(map))?,
                })
            }
            other => return Err(format!("unknown command `{other}`")),
        })
    }

    /// Parameters after defaults, echoed in the output.
    pub fn echo(&self) -> Value {
        match self {
            Params::Zeno(p) => serde_json::to_value(p),
            Params::Synapse(p) => serde_json::to_value(p),
            Params::Lattice(p) => serde_json::to_value(p),
            Params::Nonlocal(p) => serde_json::to_value(p),
            Params::Trace(p) => serde_json::to_value(p),
            Params::Selection(p) => {
                let mut v = serde_json::to_value(&p.zeno).expect("serializable");
                v["trials"] = json!(p.trials);
                Ok(v)
            }
        }
        .expect("parameters serialize")
    }

    pub fn run(&self, seed: u64) -> Result<Report, Error> {
        match self {
            Params::Zeno(p) => zeno(p),
            Params::Synapse(p) => synapse(p),
            Params::Lattice(p) => lattice(p, seed),
            Params::Nonlocal(p) => nonlocal(p),
            Params::Trace(p) => trace(p, seed),
            Params::Selection(p) => selection(p, seed),
        }
    }
}

fn typed<T: DeserializeOwned>(params: Value) -> Result<T, String> {
    serde_json::from_value(params).map_err(|e| format!("invalid parameters: {e}"))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZenoIn {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub z_im: f64,
    pub c: f64,
    pub c_im: f64,
    pub s: f64,
    pub s_im: f64,
}

impl Default for ZenoIn {
    fn default() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            x: 1.0,
            y: 1.0,
            z: 1.0,
            z_im: 0.0,
            c: r,
            c_im: 0.0,
            s: r,
            s_im: 0.0,
        }
    }
}

impl ZenoIn {
    fn to_params(&self) -> ZenoParams<f64> {
        ZenoParams {
            x: self.x,
            y: self.y,
            z: Complex::new(self.z, self.z_im),
            c: Complex::new(self.c, self.c_im),
            s: Complex::new(self.s, self.s_im),
        }
    }
}

fn zeno(p: &ZenoIn) -> Result<Report, Error> {
    let params = p.to_params();
    let plain = zeno_matrix_run(&params, false)?;
    let asked = zeno_matrix_run(&params, true)?;
    let total = params.x + params.y;
    Ok(Report::scalar(json!({
        "trace_ps": plain.w_initial,
        "trace_pusu": plain.w_after_u,
        "w_final_without_collapse": plain.w_final,
        "w_final_with_collapse": asked.w_final,
        "closed_form_without_collapse": zeno_closed_form(&params, false),
        "closed_form_with_collapse": zeno_closed_form(&params, true),
        "prob_without_collapse": plain.w_final / total,
        "prob_with_collapse": asked.w_final / total,
    })))
}

const DEFAULT_TRIALS: u64 = 100_000;

pub struct SelectionIn {
    pub trials: u64,
    pub zeno: ZenoIn,
}

fn selection(p: &SelectionIn, seed: u64) -> Result<Report, Error> {
    let r = selection_advantage_mc(&p.zeno.to_params(), p.trials, seed)?;
    let n = r.n_trials as f64;
    let sd = |q: f64| (q * (1.0 - q) / n).sqrt();
    Ok(Report::scalar(json!({
        "n_trials": r.n_trials,
        "rate_with_questions": r.rate_with_questions,
        "rate_without": r.rate_without,
        "exact_with_questions": r.exact_with_questions,
        "exact_without": r.exact_without,
        "sd_with_questions": sd(r.exact_with_questions),
        "sd_without": sd(r.exact_without),
        "advantage": r.rate_with_questions - r.rate_without,
    })))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynapseIn {
    pub ion_mass: f64,
    pub temperature: f64,
    pub channel_diameter: f64,
    pub travel_distance: f64,
    pub synapses: u32,
}

impl Default for SynapseIn {
    fn default() -> Self {
        let d = SynapseParams::<f64>::default();
        Self {
            ion_mass: d.ion_mass,
            temperature: d.temperature,
            channel_diameter: d.channel_diameter,
            travel_distance: d.travel_distance,
            synapses: 20,
        }
    }
}

/// Branch counts are printed exactly up to this many synapses.
const EXACT_BRANCH_LIMIT: u32 = 4096;

fn synapse(p: &SynapseIn) -> Result<Report, Error> {
    let params = SynapseParams {
        ion_mass: p.ion_mass,
        temperature: p.temperature,
        channel_diameter: p.channel_diameter,
        travel_distance: p.travel_distance,
    };
    let e = synapse_estimates(&params, p.synapses)?;
    let mut result = to_json(&e);
    result["branch_count"] = if p.synapses <= EXACT_BRANCH_LIMIT {
        json!(branch_count(p.synapses).to_string())
    } else {
        Value::Null
    };
    Ok(Report::scalar(result))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleIn {
    Name(String),
    Spec(Rule),
}

impl Default for RuleIn {
    fn default() -> Self {
        RuleIn::Name("identity".into())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedIn {
    pub values: Vec<u32>,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialIn {
    /// "uniform"
    Name(String),
    /// One classical configuration.
    Point(Vec<u32>),
    Weighted(Vec<WeightedIn>),
}

impl Default for InitialIn {
    fn default() -> Self {
        InitialIn::Name("uniform".into())
    }
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeIn {
    pub edges: [u64; 3],
    #[serde(default = "one")]
    pub fields: u64,
    pub values: u64,
    #[serde(default)]
    pub rule: RuleIn,
    #[serde(default)]
    pub steps: u32,
    #[serde(default)]
    pub initial: InitialIn,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Vec<FaceCell>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_value: Option<u32>,
}

fn rule_of(r: &RuleIn) -> Result<Rule, Error> {
    match r {
        RuleIn::Spec(rule) => Ok(rule.clone()),
        RuleIn::Name(n) => match n.as_str() {
            "identity" => Ok(Rule::Identity),
            "xor" => Ok(Rule::Xor),
            "shift" => Ok(Rule::Shift),
            "zero" => Ok(Rule::Zero),
            other => Err(Error::Validation(format!("unknown rule `{other}`"))),
        },
    }
}

fn initial_of(i: &InitialIn) -> Result<InitialDistribution<f64>, Error> {
    match i {
        InitialIn::Name(n) if n == "uniform" => Ok(InitialDistribution::Uniform),
        InitialIn::Name(n) => Err(Error::Validation(format!("unknown initial distribution `{n}`"))),
        InitialIn::Point(v) => Ok(InitialDistribution::Point(ClassicalConfig { values: v.clone() })),
        InitialIn::Weighted(ws) => Ok(InitialDistribution::Weighted(
            ws.iter()
                .map(|w| {
                    (
                        ClassicalConfig {
                            values: w.values.clone(),
                        },
                        w.weight,
                    )
                })
                .collect(),
        )),
    }
}

fn lattice(p: &LatticeIn, seed: u64) -> Result<Report, Error> {
    let cfg = LatticeConfig::new(p.edges, p.fields, p.values, rule_of(&p.rule)?)?;
    let pattern = match (&p.pattern, p.face_value) {
        (Some(_), Some(_)) => {
            return Err(Error::Validation("give either pattern or face_value, not both".into()));
        }
        (Some(cells), None) => Some(Pattern { cells: cells.clone() }),
        (None, Some(v)) => Some(Pattern::full_face(&cfg, v)),
        (None, None) => None,
    };
    let size = ConfigSpaceSize::of(&cfg);
    let mut result = json!({
        "config_space_log10": size.log10(),
        "config_space_log10_exact": size.log10_exact().map(|v| v.to_string()),
        "config_count": size.exact_count().filter(|c| c.bits() <= 256).map(|c| c.to_string()),
    });
    let mut rng = engine(seed);

    if cfg.config_count().is_err() {
        // Too large to simulate; a uniform superposition stays uniform under any permutation.
        result["simulated"] = json!(false);
        if let Some(pattern) = pattern {
            if !matches!(initial_of(&p.initial)?, InitialDistribution::Uniform) {
                cfg.config_count()?;
            }
            let prob = pattern.match_fraction(&cfg)?;
            let yes = rng.gen::<f64>() < prob;
            result["probability_yes"] = json!(prob);
            result["answer"] = json!(if yes { "yes" } else { "no" });
        }
        return Ok(Report::scalar(result));
    }

    result["simulated"] = json!(true);
    let mut state = lift_to_superposition(&cfg, &initial_of(&p.initial)?)?;
    for _ in 0..p.steps {
        state = quantum_step(&cfg, &state)?;
    }
    if let Some(pattern) = pattern {
        let proj = pattern_projector(&cfg, &pattern)?;
        let out = gestalt_collapse(&state, &proj, &mut rng)?;
        result["probability_yes"] = json!(out.probability_yes);
        result["answer"] = json!(out.answer);
        result["post_weight"] = json!(out.post_state.norm_sqr());
        state = out.post_state;
    }
    let rows: Vec<Vec<Value>> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| vec![json!(i), json!(a.re), json!(a.im)])
        .collect();
    result["state"] = json!(rows);
    Ok(Report {
        result,
        table: Some((vec!["index", "re", "im"], rows)),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlocalIn {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visibility: Option<f64>,
    /// Joint state on 2×2 as rows of [re, im] pairs; replaces the noisy singlet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<Vec<Vec<[f64; 2]>>>,
    /// Explicit table p[a][b][x][y]; replaces state and angles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table<f64>>,
}

fn nonlocal(p: &NonlocalIn) -> Result<Report, Error> {
    let table = match (&p.table, p.left, p.right) {
        (Some(t), None, None) if p.state.is_none() && p.visibility.is_none() => CorrelationTable::new(*t)?,
        (Some(_), _, _) => {
            return Err(Error::Validation(
                "an explicit table excludes state, visibility and angles".into(),
            ));
        }
        (None, Some(left), Some(right)) => {
            let exp = match &p.state {
                Some(rows) => {
                    if p.visibility.is_some() {
                        return Err(Error::Validation("an explicit state excludes visibility".into()));
                    }
                    let rows: Vec<Vec<Complex<f64>>> = rows
                        .iter()
                        .map(|r| r.iter().map(|&[re, im]| Complex::new(re, im)).collect())
                        .collect();
                    let m = ComplexMatrix::from_rows(&rows)?;
                    BipartiteExperiment::new(
                        DensityState::new(CompositeSpace::new(vec![2, 2])?, m)?,
                        left.map(BinaryMeasurement::spin_axis),
                        right.map(BinaryMeasurement::spin_axis),
                    )?
                }
                None => BipartiteExperiment::werner(p.visibility.unwrap_or(1.0), left, right)?,
            };
            joint_probs(&exp)?
        }
        _ => return Err(Error::Validation("need both left and right angles, or a table".into())),
    };
    let verdict = local_model_check(&table)?;
    let report = loc_report(&verdict);
    let e = |x, y| table.correlator(x, y);
    Ok(Report::scalar(json!({
        "table": table.p,
        "correlators": [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        "chsh_values": verdict.chsh_values,
        "max_abs_chsh": verdict.max_abs_chsh,
        "local_bound": verdict.local_bound,
        "locally_explainable": verdict.locally_explainable,
        "status": report.status,
        "margin": report.margin,
        "witness": report.witness,
        "mixture": report.mixture,
        "report": report.text,
    })))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceIn {
    pub omega: f64,
    pub dt: f64,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
}

impl Default for TraceIn {
    fn default() -> Self {
        Self {
            omega: 1.0,
            dt: 0.3,
            steps: 5,
            times: None,
        }
    }
}

fn trace(p: &TraceIn, seed: u64) -> Result<Report, Error> {
    let times = match &p.times {
        Some(t) => t.clone(),
        None => (1..=p.steps).map(|k| k as f64 * p.dt).collect(),
    };
    if times.iter().any(|t| !t.is_finite())
        || times.windows(2).any(|w| w[1] < w[0])
        || times.first().is_some_and(|&t| t < 0.0)
    {
        return Err(Error::Validation(
            "question times must be finite, non-negative and non-decreasing".into(),
        ));
    }
    let space = CompositeSpace::single(2)?;
    let up = Projector::basis_state(space.clone(), 0)?;
    let h = pauli::x::<f64>().scale_real(p.omega);
    let mut trace = ProcessTrace::new(DensityState::new(space, up.matrix().clone())?);
    let mut rng = engine(seed);
    for &t in &times {
        let dt = t - trace.math_time();
        if dt > 0.0 {
            trace.evolve("drive", Evolution::Hamiltonian { h: &h, dt })?;
        }
        trace.pose_question("up", &up, &mut rng)?;
    }
    let stairs = trace.staircase();
    let rows = stairs.iter().map(|s| vec![json!(s.t), json!(s.i)]).collect();
    Ok(Report {
        result: json!({
            "log": trace.log(),
            "staircase": stairs,
            "final_weight": trace.state().weight(),
            "process_index": trace.process_index(),
            "math_time": trace.math_time(),
        }),
        table: Some((vec!["t", "i"], rows)),
    })
}
