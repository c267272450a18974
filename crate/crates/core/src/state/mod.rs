//! States, yes/no questions and the collapse rules acting on them.
//!
//! States are kept unnormalized: after a collapse the surviving branch keeps
//! its raw weight Tr(S), and every probability is read out as a ratio of
//! traces. [`DensityState::normalized`] divides explicitly when needed.

mod measurement;

pub use measurement::{
    build_good_measurement, vn_equivalence_check, EquivalenceReport, GoodMeasurement, SchmidtComponent, SchmidtSystem,
};

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, orthonormalize, ComplexMatrix, CompositeSpace};
use crate::scalar::Real;

/// Unnormalized Hermitian positive-semidefinite operator on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState<T> {
    space: CompositeSpace,
    matrix: ComplexMatrix<T>,
}

fn check_acts_on<T: Real>(m: &ComplexMatrix<T>, space: &CompositeSpace, what: &str) -> Result<()> {
    if !m.is_square() || m.rows() != space.total_dim() {
        return Err(Error::Shape(format!(
            "{what} is {}x{} but the space has dimension {}",
            m.rows(),
            m.cols(),
            space.total_dim()
        )));
    }
    Ok(())
}

impl<T: Real> DensityState<T> {
    /// Validates Hermiticity, positivity of the spectrum and a strictly positive trace.
    pub fn new(space: CompositeSpace, matrix: ComplexMatrix<T>) -> Result<Self> {
        check_acts_on(&matrix, &space, "state")?;
        let tol = T::validation_tol();
        if !matrix.is_hermitian(tol) {
            return Err(Error::Validation("state is not Hermitian".into()));
        }
        let eig = hermitian_eigen(&matrix)?;
        if let Some(&low) = eig.values.first() {
            if low < -tol {
                return Err(Error::Validation(format!("state has negative eigenvalue {low}")));
            }
        }
        let state = Self { space, matrix };
        if state.weight() <= T::zero() {
            return Err(Error::Degenerate("state has non-positive trace".into()));
        }
        Ok(state)
    }

    /// |ψ⟩⟨ψ| for an (unnormalized) amplitude vector.
    pub fn from_pure(space: CompositeSpace, amplitudes: &[Complex<T>]) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::Shape(format!(
                "vector of length {} on a space of dimension {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        if amplitudes.iter().all(|z| z.norm_sqr() == T::zero()) {
            return Err(Error::Degenerate("zero state vector".into()));
        }
        Self::new(space, ComplexMatrix::outer(amplitudes, amplitudes))
    }

    /// Skips validation for results of operations that preserve positivity by construction.
    pub(crate) fn from_parts_unchecked(space: CompositeSpace, matrix: ComplexMatrix<T>) -> Self {
        Self { space, matrix }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Raw weight Tr(S).
    pub fn weight(&self) -> T {
        self.matrix.trace().expect("square").re
    }

    /// S / Tr(S).
    pub fn normalized(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.scale_real(T::one() / self.weight()),
        }
    }

    /// U S U† for a unitary U on the same space.
    pub fn evolve(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        check_acts_on(u, &self.space, "unitary")?;
        if !u.is_unitary(T::validation_tol()) {
            return Err(Error::Validation("evolution operator is not unitary".into()));
        }
        Ok(Self {
            space: self.space.clone(),
            matrix: self.matrix.conjugate_by(u)?,
        })
    }
}

/// Hermitian idempotent operator posing a yes/no question.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector<T> {
    space: CompositeSpace,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> Projector<T> {
    /// Validates P = P† and P² = P; near-projectors are rejected, never rounded.
    pub fn new(space: CompositeSpace, matrix: ComplexMatrix<T>) -> Result<Self> {
        check_acts_on(&matrix, &space, "projector")?;
        let tol = T::validation_tol();
        if !matrix.is_hermitian(tol) {
            return Err(Error::Validation("projector is not Hermitian".into()));
        }
        let dev = matrix.matmul(&matrix)?.max_abs_diff(&matrix)?;
        if dev > tol {
            return Err(Error::Validation(format!(
                "projector is not idempotent: max |P² − P| = {dev}"
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: CompositeSpace) -> Self {
        let n = space.total_dim();
        Self {
            space,
            matrix: ComplexMatrix::identity(n),
        }
    }

    /// |k⟩⟨k| for a computational basis state.
    pub fn basis_state(space: CompositeSpace, index: usize) -> Result<Self> {
        let n = space.total_dim();
        if index >= n {
            return Err(Error::Index { index, len: n });
        }
        let mut matrix = ComplexMatrix::zeros(n, n);
        matrix[(index, index)] = Complex::new(T::one(), T::zero());
        Ok(Self { space, matrix })
    }

    /// Orthogonal projector onto the span of the given vectors.
    pub fn onto_span(space: CompositeSpace, vectors: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = space.total_dim();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::Shape(format!(
                "spanning vector of length {} on a space of dimension {n}",
                v.len()
            )));
        }
        let mut matrix = ComplexMatrix::zeros(n, n);
        for b in orthonormalize(vectors, T::validation_tol()) {
            matrix = matrix.add(&ComplexMatrix::outer(&b, &b))?;
        }
        Ok(Self { space, matrix })
    }

    /// 1 − P.
    pub fn complement(&self) -> Self {
        let n = self.space.total_dim();
        Self {
            space: self.space.clone(),
            matrix: ComplexMatrix::identity(n).sub(&self.matrix).expect("same shape"),
        }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace().expect("square").re.round().to_usize().unwrap_or(0)
    }

    fn check_compatible(&self, s: &DensityState<T>) -> Result<()> {
        if self.space.total_dim() != s.space.total_dim() {
            return Err(Error::Shape(format!(
                "projector on dimension {} applied to state on dimension {}",
                self.space.total_dim(),
                s.space.total_dim()
            )));
        }
        Ok(())
    }

    /// P S P, kept unnormalized.
    fn sandwich(&self, s: &DensityState<T>) -> Result<ComplexMatrix<T>> {
        self.matrix.matmul(&s.matrix)?.matmul(&self.matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOutcome<T> {
    pub answer: Answer,
    pub probability_yes: T,
    /// Unnormalized surviving branch: PSP for yes, (1−P)S(1−P) for no.
    pub post_state: DensityState<T>,
}

/// Raw weight Tr(PS), not divided by Tr(S).
pub fn raw_weight<T: Real>(s: &DensityState<T>, p: &Projector<T>) -> Result<T> {
    p.check_compatible(s)?;
    Ok(p.matrix.matmul(&s.matrix)?.trace()?.re)
}

/// Tr(PSP)/Tr(S), clamped into [0, 1].
pub fn prob_yes<T: Real>(s: &DensityState<T>, p: &Projector<T>) -> Result<T> {
    p.check_compatible(s)?;
    let total = s.weight();
    if total <= T::zero() {
        return Err(Error::Degenerate("Tr(S) is not positive".into()));
    }
    let yes = p.sandwich(s)?.trace()?.re;
    Ok((yes / total).max(T::zero()).min(T::one()))
}

/// Process I: S → PSP + (1−P)S(1−P). Poses the question without selecting an answer.
pub fn process_one<T: Real>(s: &DensityState<T>, p: &Projector<T>) -> Result<DensityState<T>> {
    p.check_compatible(s)?;
    let yes = p.sandwich(s)?;
    let no = p.complement().sandwich(s)?;
    Ok(DensityState::from_parts_unchecked(s.space.clone(), yes.add(&no)?))
}

/// The unnormalized branch selected by `answer`; a branch with no weight is degenerate.
pub fn branch<T: Real>(s: &DensityState<T>, p: &Projector<T>, answer: Answer) -> Result<DensityState<T>> {
    p.check_compatible(s)?;
    let m = match answer {
        Answer::Yes => p.sandwich(s)?,
        Answer::No => p.complement().sandwich(s)?,
    };
    let post = DensityState::from_parts_unchecked(s.space.clone(), m);
    if post.weight() <= T::zero() {
        return Err(Error::Degenerate(format!("the `{answer}` branch carries no weight")));
    }
    Ok(post)
}

/// Heisenberg collapse: draws yes with probability Tr(PSP)/Tr(S) and keeps the matching branch.
pub fn heisenberg_collapse<T: Real, R: Rng + ?Sized>(
    s: &DensityState<T>,
    p: &Projector<T>,
    rng: &mut R,
) -> Result<CollapseOutcome<T>> {
    let probability_yes = prob_yes(s, p)?;
    let draw: f64 = rng.gen();
    let answer = if draw < probability_yes.as_f64() {
        Answer::Yes
    } else {
        Answer::No
    };
    Ok(CollapseOutcome {
        answer,
        probability_yes,
        post_state: branch(s, p, answer)?,
    })
}

/// Von Neumann entropy of S/Tr(S) in nats.
pub fn entropy<T: Real>(s: &DensityState<T>) -> Result<T> {
    let eig = hermitian_eigen(s.normalized().matrix())?;
    Ok(eig
        .values
        .into_iter()
        .filter(|&l| l > T::eigen_floor())
        .map(|l| -l * l.ln())
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport<T> {
    pub prob_before: T,
    pub prob_after: T,
    /// Whether U⁻¹PU = P within tolerance.
    pub commutes: bool,
}

/// Compares the yes-probability before and after a rearrangement S → USU⁻¹.
pub fn invariance_check<T: Real>(
    s: &DensityState<T>,
    p: &Projector<T>,
    u: &ComplexMatrix<T>,
) -> Result<InvarianceReport<T>> {
    let moved = s.evolve(u)?;
    let pulled_back = p.matrix.conjugate_by(&u.adjoint())?;
    Ok(InvarianceReport {
        prob_before: prob_yes(s, p)?,
        prob_after: prob_yes(&moved, p)?,
        commutes: pulled_back.max_abs_diff(&p.matrix)? <= T::validation_tol(),
    })
}
