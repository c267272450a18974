//! Two regions, two settings per region, two outcomes per setting.
//!
//! Quantum joint probabilities come from the tensor-product Born rule. Whether
//! a table admits a local model (outcomes fixed in advance for both settings,
//! independently of the distant choice) is decided twice: by the eight CHSH
//! inequalities, which are the nontrivial facets of the local polytope for this
//! scenario, and by a linear program over the 16 deterministic strategies.

// Tables are indexed p[a][b][x][y]; explicit index loops read closest to the formulas.
#![allow(clippy::needless_range_loop)]

mod lp;

pub use lp::{local_mixture, LpScalar};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::Write as _;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, CompositeSpace};
use crate::scalar::Real;
use crate::state::{DensityState, Projector};

/// p[a][b][x][y]: probability of outcomes (a, b) given settings (x, y).
pub type Table<F> = [[[[F; 2]; 2]; 2]; 2];

/// Local bound of every CHSH combination.
pub const LOCAL_BOUND: f64 = 2.0;
pub const CHSH_TOL: f64 = 1e-9;
pub const NO_SIGNALING_TOL: f64 = 1e-10;

/// All (a, b, x, y) in row-major order.
pub fn table_indices() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|k| ((k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1))
}

/// A deterministic local strategy: the outcome each side gives for each of its settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalStrategy {
    pub left: [usize; 2],
    pub right: [usize; 2],
}

impl LocalStrategy {
    /// The 16 strategies, indexed 4·(2·a₀ + a₁) + (2·b₀ + b₁).
    pub fn all() -> Vec<LocalStrategy> {
        (0..16)
            .map(|k| LocalStrategy {
                left: [(k >> 3) & 1, (k >> 2) & 1],
                right: [(k >> 1) & 1, k & 1],
            })
            .collect()
    }
}

pub fn deterministic_table<F: Num + Clone>(s: &LocalStrategy) -> Table<F> {
    let mut t: Table<F> =
        std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| F::zero()))));
    for (a, b, x, y) in table_indices() {
        if s.left[x] == a && s.right[y] == b {
            t[a][b][x][y] = F::one();
        }
    }
    t
}

/// The PR box: a ⊕ b = x·y with uniform marginals.
pub fn pr_box_table<F: Num + Clone>() -> Table<F> {
    let half = F::one() / (F::one() + F::one());
    let mut t: Table<F> = deterministic_table(&LocalStrategy {
        left: [0, 0],
        right: [0, 0],
    });
    for (a, b, x, y) in table_indices() {
        t[a][b][x][y] = if (a ^ b) == (x & y) { half.clone() } else { F::zero() };
    }
    t
}

/// E(x, y) = Σ_{a,b} (−1)^{a+b} p[a][b][x][y].
pub fn correlator<F: Num + Clone>(t: &Table<F>, x: usize, y: usize) -> F {
    t[0][0][x][y].clone() + t[1][1][x][y].clone() - t[0][1][x][y].clone() - t[1][0][x][y].clone()
}

/// Sign patterns over (E₀₀, E₀₁, E₁₀, E₁₁) with an odd number of minus signs, in a fixed order.
pub fn chsh_coefficients() -> [[i8; 4]; 8] {
    let mut out = [[0i8; 4]; 8];
    let mut k = 0;
    for mask in 0u8..16 {
        if mask.count_ones() % 2 == 1 {
            for (bit, c) in out[k].iter_mut().enumerate() {
                *c = if mask >> (3 - bit) & 1 == 1 { -1 } else { 1 };
            }
            k += 1;
        }
    }
    out
}

/// The eight CHSH combinations, ordered as [`chsh_coefficients`].
pub fn chsh_combinations<F: Num + Signed + Clone>(t: &Table<F>) -> [F; 8] {
    let e = [
        correlator(t, 0, 0),
        correlator(t, 0, 1),
        correlator(t, 1, 0),
        correlator(t, 1, 1),
    ];
    chsh_coefficients().map(|coeffs| {
        coeffs.iter().zip(&e).fold(
            F::zero(),
            |acc, (&c, ei)| if c > 0 { acc + ei.clone() } else { acc - ei.clone() },
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable<T> {
    pub p: Table<T>,
}

impl<T: Real> CorrelationTable<T> {
    /// Validates non-negativity (−1e-12) and normalization of each setting pair (1e-10).
    pub fn new(p: Table<T>) -> Result<Self> {
        let neg = T::lit(-1e-12);
        for (a, b, x, y) in table_indices() {
            let v = p[a][b][x][y];
            if !v.is_finite() || v < neg {
                return Err(Error::Validation(format!(
                    "p[{a}][{b}][{x}][{y}] = {v} is not a probability"
                )));
            }
        }
        for x in 0..2 {
            for y in 0..2 {
                let sum = p[0][0][x][y] + p[0][1][x][y] + p[1][0][x][y] + p[1][1][x][y];
                if (sum - T::one()).abs() > T::lit(NO_SIGNALING_TOL) {
                    return Err(Error::Validation(format!("settings ({x}, {y}) sum to {sum}")));
                }
            }
        }
        Ok(Self { p })
    }

    pub fn deterministic(s: &LocalStrategy) -> Self {
        Self {
            p: deterministic_table(s),
        }
    }

    pub fn uniform() -> Self {
        Self {
            p: [[[[T::lit(0.25); 2]; 2]; 2]; 2],
        }
    }

    pub fn pr_box() -> Self {
        Self { p: pr_box_table() }
    }

    /// w·self + (1 − w)·other.
    pub fn mix(&self, other: &Self, w: T) -> Self {
        let mut p = self.p;
        for (a, b, x, y) in table_indices() {
            p[a][b][x][y] = w * self.p[a][b][x][y] + (T::one() - w) * other.p[a][b][x][y];
        }
        Self { p }
    }

    pub fn correlator(&self, x: usize, y: usize) -> T {
        correlator(&self.p, x, y)
    }

    pub fn left_marginal(&self, a: usize, x: usize, y: usize) -> T {
        self.p[a][0][x][y] + self.p[a][1][x][y]
    }

    pub fn right_marginal(&self, b: usize, x: usize, y: usize) -> T {
        self.p[0][b][x][y] + self.p[1][b][x][y]
    }

    /// Largest change of one side's marginal under a change of the other side's setting.
    pub fn signaling(&self) -> T {
        let mut worst = T::zero();
        for o in 0..2 {
            for s in 0..2 {
                worst = worst
                    .max((self.left_marginal(o, s, 0) - self.left_marginal(o, s, 1)).abs())
                    .max((self.right_marginal(o, 0, s) - self.right_marginal(o, 1, s)).abs());
            }
        }
        worst
    }

    pub fn is_no_signaling(&self) -> bool {
        self.signaling() <= T::lit(NO_SIGNALING_TOL)
    }
}

pub fn chsh_values<T: Real + Signed>(t: &CorrelationTable<T>) -> [T; 8] {
    chsh_combinations(&t.p)
}

/// Projective two-outcome measurement given by its outcome-0 and outcome-1 projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMeasurement<T> {
    outcomes: [Projector<T>; 2],
}

impl<T: Real> BinaryMeasurement<T> {
    pub fn new(zero: Projector<T>, one: Projector<T>) -> Result<Self> {
        let n = zero.space().total_dim();
        let sum = zero.matrix().add(one.matrix())?;
        if sum.max_abs_diff(&ComplexMatrix::identity(n))? > T::validation_tol() {
            return Err(Error::Validation(
                "outcome projectors do not sum to the identity".into(),
            ));
        }
        Ok(Self { outcomes: [zero, one] })
    }

    pub fn from_projector(zero: Projector<T>) -> Self {
        let one = zero.complement();
        Self { outcomes: [zero, one] }
    }

    /// Spin along an axis at angle θ from z in the x–z plane; outcome 0 is spin-up.
    pub fn spin_axis(theta: T) -> Self {
        let half = theta / (T::one() + T::one());
        let v = [Complex::new(half.cos(), T::zero()), Complex::new(half.sin(), T::zero())];
        let up = Projector::new(CompositeSpace::single(2).expect("2"), ComplexMatrix::outer(&v, &v))
            .expect("rank-one projector");
        Self::from_projector(up)
    }

    pub fn outcome(&self, k: usize) -> &Projector<T> {
        &self.outcomes[k]
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].space().total_dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteExperiment<T> {
    state: DensityState<T>,
    left: [BinaryMeasurement<T>; 2],
    right: [BinaryMeasurement<T>; 2],
}

impl<T: Real> BipartiteExperiment<T> {
    pub fn new(
        state: DensityState<T>,
        left: [BinaryMeasurement<T>; 2],
        right: [BinaryMeasurement<T>; 2],
    ) -> Result<Self> {
        let dims = state.space().factor_dims();
        if dims.len() != 2 {
            return Err(Error::Shape(format!("joint state has {} factors, need 2", dims.len())));
        }
        if left.iter().any(|m| m.dim() != dims[0]) || right.iter().any(|m| m.dim() != dims[1]) {
            return Err(Error::Shape("measurement dimension does not match its region".into()));
        }
        if (state.weight() - T::one()).abs() > T::validation_tol() {
            return Err(Error::Validation(format!("joint state has trace {}", state.weight())));
        }
        Ok(Self { state, left, right })
    }

    /// Singlet (|01⟩ − |10⟩)/√2 mixed with white noise at the given visibility.
    pub fn werner(visibility: T, left_angles: [T; 2], right_angles: [T; 2]) -> Result<Self> {
        if !(visibility >= T::zero() && visibility <= T::one()) {
            return Err(Error::Validation(format!("visibility {visibility} outside [0, 1]")));
        }
        let h = T::FRAC_1_SQRT_2();
        let zero = Complex::new(T::zero(), T::zero());
        let psi = [zero, Complex::new(h, T::zero()), Complex::new(-h, T::zero()), zero];
        let singlet = ComplexMatrix::outer(&psi, &psi);
        let noise = ComplexMatrix::identity(4).scale_real(T::lit(0.25));
        let rho = singlet
            .scale_real(visibility)
            .add(&noise.scale_real(T::one() - visibility))?;
        let space = CompositeSpace::new(vec![2, 2])?;
        Self::new(
            DensityState::new(space, rho)?,
            left_angles.map(BinaryMeasurement::spin_axis),
            right_angles.map(BinaryMeasurement::spin_axis),
        )
    }

    pub fn singlet(left_angles: [T; 2], right_angles: [T; 2]) -> Result<Self> {
        Self::werner(T::one(), left_angles, right_angles)
    }

    /// Singlet with left axes 0°, 90° and right axes 45°, 135°.
    pub fn singlet_chsh() -> Self {
        Self::singlet(
            [T::zero(), T::lit(FRAC_PI_2)],
            [T::lit(FRAC_PI_4), T::lit(3.0 * FRAC_PI_4)],
        )
        .expect("valid preset")
    }

    pub fn state(&self) -> &DensityState<T> {
        &self.state
    }
}

/// p[a][b][x][y] = Tr((Π^L_{a|x} ⊗ Π^R_{b|y}) S).
pub fn joint_probs<T: Real>(exp: &BipartiteExperiment<T>) -> Result<CorrelationTable<T>> {
    let mut p = [[[[T::zero(); 2]; 2]; 2]; 2];
    for (a, b, x, y) in table_indices() {
        let joint = exp.left[x].outcome(a).matrix().kron(exp.right[y].outcome(b).matrix())?;
        p[a][b][x][y] = joint.matmul(exp.state.matrix())?.trace()?.re / exp.state.weight();
    }
    CorrelationTable::new(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshWitness<T> {
    /// Signs on (E₀₀, E₀₁, E₁₀, E₁₁), oriented so that the combination is non-negative.
    pub coefficients: [i8; 4],
    pub value: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureTerm<T> {
    pub strategy: LocalStrategy,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalModelVerdict<T> {
    pub chsh_values: [T; 8],
    pub local_bound: T,
    pub max_abs_chsh: T,
    pub locally_explainable: bool,
    pub witness: ChshWitness<T>,
    /// A local model reproducing the table, when one exists.
    pub mixture: Option<Vec<MixtureTerm<T>>>,
}

/// Decides local explainability by the CHSH criterion and confirms it with the strategy LP.
pub fn local_model_check<T: Real + Signed + LpScalar>(t: &CorrelationTable<T>) -> Result<LocalModelVerdict<T>> {
    if !t.is_no_signaling() {
        return Err(Error::Inapplicable(format!(
            "table signals (marginal shift {}); local models presuppose no-signaling",
            t.signaling()
        )));
    }
    let values = chsh_values(t);
    let coeffs = chsh_coefficients();
    let (k, max_abs) = values
        .iter()
        .map(|v| v.abs())
        .enumerate()
        .fold((0, T::zero()), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let orient: i8 = if values[k] < T::zero() { -1 } else { 1 };
    let witness = ChshWitness {
        coefficients: coeffs[k].map(|c| c * orient),
        value: max_abs,
    };
    let locally_explainable = max_abs <= T::lit(LOCAL_BOUND + CHSH_TOL);

    let mixture = local_mixture(&t.p).map(|w| {
        LocalStrategy::all()
            .into_iter()
            .zip(w)
            .filter(|(_, w)| *w > T::lit(1e-12))
            .map(|(strategy, weight)| MixtureTerm { strategy, weight })
            .collect::<Vec<_>>()
    });
    if mixture.is_some() != locally_explainable {
        return Err(Error::OracleDisagreement {
            chsh: locally_explainable,
            lp: mixture.is_some(),
        });
    }
    Ok(LocalModelVerdict {
        chsh_values: values,
        local_bound: T::lit(LOCAL_BOUND),
        max_abs_chsh: max_abs,
        locally_explainable,
        witness,
        mixture,
    })
}

/// Exact decision for rational tables: validates and checks no-signaling exactly,
/// then returns the CHSH verdict after confirming it against the exact LP.
pub fn is_local_exact(p: &Table<BigRational>) -> Result<bool> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    for (a, b, x, y) in table_indices() {
        if p[a][b][x][y] < zero {
            return Err(Error::Validation(format!("p[{a}][{b}][{x}][{y}] is negative")));
        }
    }
    let sum = |x: usize, y: usize| p[0][0][x][y].clone() + &p[0][1][x][y] + &p[1][0][x][y] + &p[1][1][x][y];
    let left = |a: usize, x: usize, y: usize| p[a][0][x][y].clone() + &p[a][1][x][y];
    let right = |b: usize, x: usize, y: usize| p[0][b][x][y].clone() + &p[1][b][x][y];
    for x in 0..2 {
        for y in 0..2 {
            if sum(x, y) != one {
                return Err(Error::Validation(format!("settings ({x}, {y}) do not sum to 1")));
            }
        }
    }
    for o in 0..2 {
        for s in 0..2 {
            if left(o, s, 0) != left(o, s, 1) || right(o, 0, s) != right(o, 1, s) {
                return Err(Error::Inapplicable("table signals".into()));
            }
        }
    }
    let bound = BigRational::from_integer(2.into());
    let chsh = chsh_combinations(p).iter().all(|v| v.abs() <= bound);
    let lp = local_mixture(p).is_some();
    if chsh != lp {
        return Err(Error::OracleDisagreement { chsh, lp });
    }
    Ok(chsh)
}

/// Converts a floating table to exact rationals (each entry is a dyadic rational).
pub fn to_rational<T: Real>(t: &CorrelationTable<T>) -> Result<Table<BigRational>> {
    let mut out: Table<BigRational> = deterministic_table(&LocalStrategy {
        left: [0, 0],
        right: [0, 0],
    });
    for (a, b, x, y) in table_indices() {
        out[a][b][x][y] = BigRational::from_float(t.p[a][b][x][y].as_f64())
            .ok_or_else(|| Error::Validation("non-finite table entry".into()))?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocStatus {
    Explainable,
    /// Explainable, but some combination sits on the local bound within tolerance.
    Boundary,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocReport<T> {
    pub status: LocStatus,
    pub max_abs_chsh: T,
    pub local_bound: T,
    /// max |CHSH| − bound; positive when violated.
    pub margin: T,
    pub witness: ChshWitness<T>,
    pub mixture: Option<Vec<MixtureTerm<T>>>,
    pub text: String,
}

fn combination_label(coeffs: &[i8; 4]) -> String {
    ["E00", "E01", "E10", "E11"]
        .iter()
        .zip(coeffs)
        .map(|(e, &c)| format!("{}{e}", if c > 0 { '+' } else { '-' }))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn loc_report<T: Real>(v: &LocalModelVerdict<T>) -> LocReport<T> {
    let margin = v.max_abs_chsh - v.local_bound;
    let status = if !v.locally_explainable {
        LocStatus::Violated
    } else if margin.abs() <= T::lit(CHSH_TOL) {
        LocStatus::Boundary
    } else {
        LocStatus::Explainable
    };
    let combo = combination_label(&v.witness.coefficients);
    let mut text = String::new();
    match status {
        LocStatus::Violated => {
            let _ = writeln!(
                text,
                "NOT locally explainable: {combo} = {:.6} exceeds the local bound {} by {:.6}.",
                v.max_abs_chsh, v.local_bound, margin
            );
            let _ = writeln!(
                text,
                "No assignment of definite outcomes to both settings on each side, with each side's \
                 outcome independent of the other side's setting (LOC1) and left undisturbed by the \
                 distant free choice (LOC3), reproduces these correlations."
            );
        }
        LocStatus::Boundary | LocStatus::Explainable => {
            if status == LocStatus::Boundary {
                let _ = writeln!(
                    text,
                    "Locally explainable at the boundary: {combo} = {:.6} equals the local bound {} within {CHSH_TOL:e}.",
                    v.max_abs_chsh, v.local_bound
                );
            } else {
                let _ = writeln!(
                    text,
                    "Locally explainable: max |CHSH| = {:.6} does not exceed the local bound {}.",
                    v.max_abs_chsh, v.local_bound
                );
            }
            let _ = writeln!(
                text,
                "A local model exists: outcomes fixed in advance for both settings, independent of the \
                 distant choice (LOC1, LOC3), mixed as follows:"
            );
            for term in v.mixture.iter().flatten() {
                let _ = writeln!(
                    text,
                    "  weight {:.6}: left outputs {:?} for settings (0, 1), right outputs {:?}",
                    term.weight, term.strategy.left, term.strategy.right
                );
            }
        }
    }
    LocReport {
        status,
        max_abs_chsh: v.max_abs_chsh,
        local_bound: v.local_bound,
        margin,
        witness: v.witness,
        mixture: v.mixture.clone(),
        text,
    }
}
