//! Desk-scale lattice automaton and its lift to superpositions over whole
//! configurations ("superpoints").
//!
//! Slot order: a configuration is the flat sequence of (site, field) values
//! with site index `x + nx·(y + ny·z)` and the field varying fastest. The
//! configuration index treats slot 0 as the most significant base-`v` digit,
//! which matches the tensor-factor convention of [`crate::linalg::CompositeSpace`].

mod quantum;

pub use quantum::{
    gestalt_collapse, lift_to_superposition, pattern_projector, quantum_step, FaceCell, GestaltOutcome,
    InitialDistribution, Pattern, PatternProjector, SuperpositionState, DENSE_PROJECTOR_LIMIT,
};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest configuration space that is simulated concretely.
pub const MAX_CONFIGS: u64 = 1 << 20;

/// Deterministic radius-1 update rules. Neighbors are taken along the x axis
/// with periodic wrap-around.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rule {
    Identity,
    /// Every value becomes 0.
    Zero,
    /// Each field value becomes `self ^ left ^ right`. Requires `values` to be a power of two.
    Xor,
    /// Each site copies its left neighbor.
    Shift,
    /// `table[(left·S + self)·S + right]` gives the new site state, where a
    /// site state packs the field tuple as a base-`values` number and S = values^fields.
    Table {
        table: Vec<u32>,
    },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Identity => "identity",
            Rule::Zero => "zero",
            Rule::Xor => "xor",
            Rule::Shift => "shift",
            Rule::Table { .. } => "table",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub edges: [u64; 3],
    pub fields: u64,
    pub values: u64,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalConfig {
    pub values: Vec<u32>,
}

impl LatticeConfig {
    pub fn new(edges: [u64; 3], fields: u64, values: u64, rule: Rule) -> Result<Self> {
        if edges.contains(&0) || fields == 0 || values == 0 {
            return Err(Error::Validation(
                "edges, fields and values must all be at least 1".into(),
            ));
        }
        if values > u64::from(u32::MAX) {
            return Err(Error::Validation("values must fit in 32 bits".into()));
        }
        let cfg = Self {
            edges,
            fields,
            values,
            rule,
        };
        match &cfg.rule {
            Rule::Xor if !values.is_power_of_two() => {
                return Err(Error::Validation(format!(
                    "xor rule needs a power-of-two value count, got {values}"
                )))
            }
            Rule::Table { table } => {
                let states = cfg.site_states()?;
                let expected = states.checked_pow(3).ok_or(Error::Size {
                    requested: u128::MAX,
                    limit: MAX_CONFIGS as u128,
                })?;
                if table.len() as u64 != expected {
                    return Err(Error::Validation(format!(
                        "rule table needs {expected} entries, got {}",
                        table.len()
                    )));
                }
                if let Some(bad) = table.iter().find(|&&t| u64::from(t) >= states) {
                    return Err(Error::Validation(format!("rule table entry {bad} is not a site state")));
                }
            }
            _ => {}
        }
        Ok(cfg)
    }

    /// One-dimensional ring of `n` sites.
    pub fn ring(n: u64, values: u64, rule: Rule) -> Result<Self> {
        Self::new([n, 1, 1], 1, values, rule)
    }

    pub fn sites(&self) -> u64 {
        self.edges.iter().product()
    }

    pub fn slots(&self) -> u64 {
        self.sites() * self.fields
    }

    pub fn site_index(&self, x: u64, y: u64, z: u64) -> u64 {
        x + self.edges[0] * (y + self.edges[1] * z)
    }

    /// Per-site state count v^f, when it fits in a u64.
    pub fn site_states(&self) -> Result<u64> {
        checked_pow(self.values, self.fields)
    }

    /// Number of classical configurations, enforcing the desk-scale guard.
    pub fn config_count(&self) -> Result<usize> {
        let n = checked_pow(self.values, self.slots())?;
        if n > MAX_CONFIGS {
            return Err(Error::Size {
                requested: n as u128,
                limit: MAX_CONFIGS as u128,
            });
        }
        Ok(n as usize)
    }

    pub fn validate_state(&self, state: &ClassicalConfig) -> Result<()> {
        if state.values.len() as u64 != self.slots() {
            return Err(Error::Shape(format!(
                "configuration has {} values, lattice has {} slots",
                state.values.len(),
                self.slots()
            )));
        }
        if let Some(v) = state.values.iter().find(|&&v| u64::from(v) >= self.values) {
            return Err(Error::Validation(format!("value {v} out of range 0..{}", self.values)));
        }
        Ok(())
    }

    pub fn index_of(&self, state: &ClassicalConfig) -> Result<usize> {
        self.validate_state(state)?;
        self.config_count()?;
        Ok(state
            .values
            .iter()
            .fold(0usize, |acc, &v| acc * self.values as usize + v as usize))
    }

    pub fn config_at(&self, index: usize) -> Result<ClassicalConfig> {
        let count = self.config_count()?;
        if index >= count {
            return Err(Error::Index { index, len: count });
        }
        let v = self.values as usize;
        let mut values = vec![0u32; self.slots() as usize];
        let mut rest = index;
        for slot in values.iter_mut().rev() {
            *slot = (rest % v) as u32;
            rest /= v;
        }
        Ok(ClassicalConfig { values })
    }

    fn pack_site(&self, state: &ClassicalConfig, site: u64) -> u64 {
        let f = self.fields as usize;
        let start = site as usize * f;
        state.values[start..start + f]
            .iter()
            .fold(0u64, |acc, &v| acc * self.values + u64::from(v))
    }

    fn unpack_site(&self, mut packed: u64, out: &mut [u32]) {
        for slot in out.iter_mut().rev() {
            *slot = (packed % self.values) as u32;
            packed /= self.values;
        }
    }

    fn x_neighbors(&self, site: u64) -> (u64, u64) {
        let nx = self.edges[0];
        let x = site % nx;
        let row = site - x;
        (row + (x + nx - 1) % nx, row + (x + 1) % nx)
    }
}

fn checked_pow(base: u64, exp: u64) -> Result<u64> {
    let exp32 = u32::try_from(exp).ok();
    exp32.and_then(|e| base.checked_pow(e)).ok_or(Error::Size {
        requested: u128::MAX,
        limit: MAX_CONFIGS as u128,
    })
}

/// One synchronous update of every site from its radius-1 neighborhood.
pub fn classical_step(cfg: &LatticeConfig, state: &ClassicalConfig) -> Result<ClassicalConfig> {
    cfg.validate_state(state)?;
    let f = cfg.fields as usize;
    let mut next = state.clone();
    for site in 0..cfg.sites() {
        let (left, right) = cfg.x_neighbors(site);
        let range = site as usize * f..(site as usize + 1) * f;
        match &cfg.rule {
            Rule::Identity => {}
            Rule::Zero => next.values[range].iter_mut().for_each(|v| *v = 0),
            Rule::Xor => {
                let (l, r) = (left as usize * f, right as usize * f);
                for k in 0..f {
                    next.values[range.start + k] =
                        state.values[range.start + k] ^ state.values[l + k] ^ state.values[r + k];
                }
            }
            Rule::Shift => {
                let l = left as usize * f;
                next.values[range].copy_from_slice(&state.values[l..l + f]);
            }
            Rule::Table { table } => {
                let s = cfg.site_states()?;
                let key =
                    (cfg.pack_site(state, left) * s + cfg.pack_site(state, site)) * s + cfg.pack_site(state, right);
                cfg.unpack_site(u64::from(table[key as usize]), &mut next.values[range]);
            }
        }
    }
    Ok(next)
}

/// Size of a configuration space as `base^exponent`, kept exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigSpaceSize {
    pub base: u64,
    pub exponent: BigUint,
}

impl ConfigSpaceSize {
    pub fn of(cfg: &LatticeConfig) -> Self {
        Self {
            base: cfg.values,
            exponent: BigUint::from(cfg.sites()) * BigUint::from(cfg.fields),
        }
    }

    /// Configurations of two disjoint site sets with the same value count multiply.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::Validation(
                "cannot combine spaces with different value counts".into(),
            ));
        }
        Ok(Self {
            base: self.base,
            exponent: &self.exponent + &other.exponent,
        })
    }

    pub fn log10(&self) -> f64 {
        self.exponent.to_f64().unwrap_or(f64::INFINITY) * (self.base as f64).log10()
    }

    /// Exact log₁₀ when the base is a power of ten.
    pub fn log10_exact(&self) -> Option<BigUint> {
        let mut b = self.base;
        let mut k = 0u32;
        while b > 1 && b.is_multiple_of(10) {
            b /= 10;
            k += 1;
        }
        (b == 1).then(|| &self.exponent * BigUint::from(k))
    }

    /// The exact count, when it has at most 65536 bits.
    pub fn exact_count(&self) -> Option<BigUint> {
        let e = self.exponent.to_u32()?;
        let bits = (self.base as f64).log2() * f64::from(e);
        (bits <= 65536.0).then(|| num_traits::pow(BigUint::from(self.base), e as usize))
    }
}

/// log₁₀ of the number of classical configurations: sites · fields · log₁₀(values). No size guard.
pub fn config_space_log10(cfg: &LatticeConfig) -> f64 {
    ConfigSpaceSize::of(cfg).log10()
}
