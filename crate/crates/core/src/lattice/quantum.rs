use std::collections::BTreeMap;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{classical_step, ClassicalConfig, LatticeConfig};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, CompositeSpace};
use crate::scalar::Real;
use crate::state::{Answer, CollapseOutcome, DensityState, Projector};

/// Dense matrices are only materialized up to this dimension.
pub const DENSE_PROJECTOR_LIMIT: usize = 1 << 12;

/// Amplitude vector indexed by whole classical configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> SuperpositionState<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("amplitudes must be finite".into()));
        }
        let s = Self { amplitudes };
        if s.norm_sqr() <= T::zero() {
            return Err(Error::Degenerate("superposition has zero norm".into()));
        }
        Ok(s)
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// |ψ⟩⟨ψ| on the slot-factored space; only for small spaces.
    pub fn to_density(&self, cfg: &LatticeConfig) -> Result<DensityState<T>> {
        DensityState::from_pure(dense_space(cfg, self.len())?, &self.amplitudes)
    }
}

fn dense_space(cfg: &LatticeConfig, dim: usize) -> Result<CompositeSpace> {
    if dim > DENSE_PROJECTOR_LIMIT {
        return Err(Error::Size {
            requested: dim as u128,
            limit: DENSE_PROJECTOR_LIMIT as u128,
        });
    }
    CompositeSpace::new(vec![cfg.values as usize; cfg.slots() as usize])
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialDistribution<T> {
    Point(ClassicalConfig),
    Uniform,
    /// Unnormalized weights; repeated configurations accumulate.
    Weighted(Vec<(ClassicalConfig, T)>),
}

/// Amplitude √probability on each configuration, all phases real and positive.
pub fn lift_to_superposition<T: Real>(
    cfg: &LatticeConfig,
    initial: &InitialDistribution<T>,
) -> Result<SuperpositionState<T>> {
    let n = cfg.config_count()?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut amps = vec![zero; n];
    match initial {
        InitialDistribution::Point(c) => amps[cfg.index_of(c)?] = Complex::new(T::one(), T::zero()),
        InitialDistribution::Uniform => {
            let a = (T::one() / T::from_usize(n).expect("count fits")).sqrt();
            amps.iter_mut().for_each(|z| *z = Complex::new(a, T::zero()));
        }
        InitialDistribution::Weighted(weights) => {
            let mut probs: BTreeMap<usize, T> = BTreeMap::new();
            let mut total = T::zero();
            for (c, w) in weights {
                if w.is_nan() || *w < T::zero() {
                    return Err(Error::Validation(format!("negative weight {w}")));
                }
                *probs.entry(cfg.index_of(c)?).or_insert(T::zero()) += *w;
                total += *w;
            }
            if total <= T::zero() {
                return Err(Error::Degenerate("distribution has no weight".into()));
            }
            for (i, p) in probs {
                amps[i] = Complex::new((p / total).sqrt(), T::zero());
            }
        }
    }
    SuperpositionState::new(amps)
}

/// The configuration-space permutation induced by one classical step.
pub fn step_permutation(cfg: &LatticeConfig) -> Result<Vec<usize>> {
    let n = cfg.config_count()?;
    let mut image = Vec::with_capacity(n);
    let mut hit = vec![false; n];
    for i in 0..n {
        let j = cfg.index_of(&classical_step(cfg, &cfg.config_at(i)?)?)?;
        if std::mem::replace(&mut hit[j], true) {
            return Err(Error::NonUnitaryRule(cfg.rule.name().to_string()));
        }
        image.push(j);
    }
    Ok(image)
}

/// Moves each amplitude to the configuration its classical step leads to.
pub fn quantum_step<T: Real>(cfg: &LatticeConfig, state: &SuperpositionState<T>) -> Result<SuperpositionState<T>> {
    let perm = step_permutation(cfg)?;
    if perm.len() != state.len() {
        return Err(Error::Shape(format!(
            "state has {} amplitudes, lattice has {} configurations",
            state.len(),
            perm.len()
        )));
    }
    let mut out = vec![Complex::new(T::zero(), T::zero()); perm.len()];
    for (src, &dst) in perm.iter().enumerate() {
        out[dst] = state.amplitudes[src];
    }
    Ok(SuperpositionState { amplitudes: out })
}

/// One constrained cell on the z = 0 face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCell {
    pub x: u64,
    pub y: u64,
    #[serde(default)]
    pub field: u64,
    pub value: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub cells: Vec<FaceCell>,
}

impl Pattern {
    /// A 5×5 letter M on field 0: strokes are 1, background 0, every cell constrained.
    pub fn m_glyph_5x5() -> Self {
        const ROWS: [&str; 5] = ["X...X", "XX.XX", "X.X.X", "X...X", "X...X"];
        let cells = ROWS
            .iter()
            .enumerate()
            .flat_map(|(y, row)| {
                row.bytes().enumerate().map(move |(x, b)| FaceCell {
                    x: x as u64,
                    y: y as u64,
                    field: 0,
                    value: u32::from(b == b'X'),
                })
            })
            .collect();
        Self { cells }
    }

    /// Every site of the z = 0 face on field 0 set to `value`.
    pub fn full_face(cfg: &LatticeConfig, value: u32) -> Self {
        let cells = (0..cfg.edges[1])
            .flat_map(|y| (0..cfg.edges[0]).map(move |x| FaceCell { x, y, field: 0, value }))
            .collect();
        Self { cells }
    }

    fn slot_constraints(&self, cfg: &LatticeConfig) -> Result<Vec<(u64, u32)>> {
        let mut out = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            if c.x >= cfg.edges[0] {
                return Err(Error::Index {
                    index: c.x as usize,
                    len: cfg.edges[0] as usize,
                });
            }
            if c.y >= cfg.edges[1] {
                return Err(Error::Index {
                    index: c.y as usize,
                    len: cfg.edges[1] as usize,
                });
            }
            if c.field >= cfg.fields {
                return Err(Error::Index {
                    index: c.field as usize,
                    len: cfg.fields as usize,
                });
            }
            if u64::from(c.value) >= cfg.values {
                return Err(Error::Validation(format!("pattern value {} out of range", c.value)));
            }
            out.push((cfg.site_index(c.x, c.y, 0) * cfg.fields + c.field, c.value));
        }
        Ok(out)
    }

    /// Fraction of all configurations matching the pattern; needs no enumeration.
    pub fn match_fraction(&self, cfg: &LatticeConfig) -> Result<f64> {
        let mut fixed: BTreeMap<u64, u32> = BTreeMap::new();
        for (slot, v) in self.slot_constraints(cfg)? {
            if *fixed.entry(slot).or_insert(v) != v {
                return Ok(0.0);
            }
        }
        Ok((cfg.values as f64).powi(-(fixed.len() as i32)))
    }
}

/// Diagonal 0/1 projector over configuration indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternProjector {
    mask: Vec<bool>,
}

impl PatternProjector {
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn rank(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: self.mask.iter().map(|m| !m).collect(),
        }
    }

    pub fn apply<T: Real>(&self, amplitudes: &[Complex<T>]) -> Vec<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        self.mask
            .iter()
            .zip(amplitudes)
            .map(|(&m, &z)| if m { z } else { zero })
            .collect()
    }

    /// Dense form on the slot-factored space; limited to small spaces.
    pub fn to_projector<T: Real>(&self, cfg: &LatticeConfig) -> Result<Projector<T>> {
        let space = dense_space(cfg, self.dim())?;
        let one = T::one();
        let diag: Vec<T> = self.mask.iter().map(|&m| if m { one } else { T::zero() }).collect();
        Projector::new(space, ComplexMatrix::real_diag(&diag))
    }
}

pub fn pattern_projector(cfg: &LatticeConfig, pattern: &Pattern) -> Result<PatternProjector> {
    let constraints = pattern.slot_constraints(cfg)?;
    let n = cfg.config_count()?;
    let v = cfg.values as usize;
    let slots = cfg.slots();
    let place: Vec<(usize, u32)> = constraints
        .iter()
        .map(|&(slot, value)| (v.pow((slots - 1 - slot) as u32), value))
        .collect();
    let mask = (0..n)
        .map(|idx| place.iter().all(|&(w, value)| (idx / w) % v == value as usize))
        .collect();
    Ok(PatternProjector { mask })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GestaltOutcome<T> {
    pub answer: Answer,
    pub probability_yes: T,
    /// Unnormalized surviving branch P|ψ⟩ or (1−P)|ψ⟩.
    pub post_state: SuperpositionState<T>,
}

impl<T: Real> GestaltOutcome<T> {
    /// The same outcome on density matrices; only for small spaces.
    pub fn to_collapse_outcome(&self, cfg: &LatticeConfig) -> Result<CollapseOutcome<T>> {
        Ok(CollapseOutcome {
            answer: self.answer,
            probability_yes: self.probability_yes,
            post_state: self.post_state.to_density(cfg)?,
        })
    }
}

/// Collapse of |ψ⟩⟨ψ| onto a pattern, with yes-probability ‖Pψ‖²/‖ψ‖².
pub fn gestalt_collapse<T: Real, R: Rng + ?Sized>(
    state: &SuperpositionState<T>,
    p: &PatternProjector,
    rng: &mut R,
) -> Result<GestaltOutcome<T>> {
    if p.dim() != state.len() {
        return Err(Error::Shape(format!(
            "projector on {} configurations applied to a state on {}",
            p.dim(),
            state.len()
        )));
    }
    let total = state.norm_sqr();
    if total <= T::zero() {
        return Err(Error::Degenerate("zero state".into()));
    }
    let yes: Vec<Complex<T>> = p.apply(&state.amplitudes);
    let yes_weight: T = yes.iter().map(|z| z.norm_sqr()).sum();
    let probability_yes = (yes_weight / total).min(T::one());
    let draw: f64 = rng.gen();
    let (answer, kept) = if draw < probability_yes.as_f64() {
        (Answer::Yes, yes)
    } else {
        (Answer::No, p.complement().apply(&state.amplitudes))
    };
    Ok(GestaltOutcome {
        answer,
        probability_yes,
        post_state: SuperpositionState::new(kept)?,
    })
}
