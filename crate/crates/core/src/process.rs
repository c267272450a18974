//! Two-times bookkeeping: unitary segments advance the continuous evolution
//! time, question events advance the integer process index. Plotted against
//! each other the history is a staircase.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{unitary_from_hamiltonian, ComplexMatrix};
use crate::scalar::Real;
use crate::state::{branch, heisenberg_collapse, prob_yes, Answer, DensityState, Projector};

/// Time credited to a segment given as a bare unitary.
pub const RAW_UNITARY_DURATION: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event<T> {
    /// Process index after the jump.
    pub process_index: usize,
    pub math_time: T,
    pub projector_id: String,
    pub answer: Answer,
    pub prob_yes: T,
    pub weight_before: T,
    pub weight_after: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment<T> {
    pub t_start: T,
    pub t_end: T,
    pub unitary_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Step<T> {
    Segment(Segment<T>),
    Event(Event<T>),
}

pub enum Evolution<'a, T> {
    Unitary(&'a ComplexMatrix<T>),
    Hamiltonian { h: &'a ComplexMatrix<T>, dt: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StairPoint<T> {
    pub t: T,
    pub i: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessTrace<T> {
    state: DensityState<T>,
    start_time: T,
    math_time: T,
    process_index: usize,
    log: Vec<Step<T>>,
}

impl<T: Real> ProcessTrace<T> {
    pub fn new(initial: DensityState<T>) -> Self {
        Self::starting_at(initial, T::zero())
    }

    pub fn starting_at(initial: DensityState<T>, t0: T) -> Self {
        Self {
            state: initial,
            start_time: t0,
            math_time: t0,
            process_index: 0,
            log: Vec::new(),
        }
    }

    pub fn state(&self) -> &DensityState<T> {
        &self.state
    }

    pub fn math_time(&self) -> T {
        self.math_time
    }

    pub fn process_index(&self) -> usize {
        self.process_index
    }

    pub fn log(&self) -> &[Step<T>] {
        &self.log
    }

    pub fn events(&self) -> impl Iterator<Item = &Event<T>> {
        self.log.iter().filter_map(|s| match s {
            Step::Event(e) => Some(e),
            Step::Segment(_) => None,
        })
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment<T>> {
        self.log.iter().filter_map(|s| match s {
            Step::Segment(g) => Some(g),
            Step::Event(_) => None,
        })
    }

    /// S → U S U†; advances the evolution time, leaves the process index alone.
    pub fn evolve(&mut self, unitary_id: impl Into<String>, evolution: Evolution<'_, T>) -> Result<()> {
        let (u, dt) = match evolution {
            Evolution::Unitary(u) => (u.clone(), T::lit(RAW_UNITARY_DURATION)),
            Evolution::Hamiltonian { h, dt } => {
                if dt.is_nan() || dt < T::zero() {
                    return Err(Error::Validation(format!("segment duration {dt} is negative")));
                }
                (unitary_from_hamiltonian(h, dt)?, dt)
            }
        };
        self.state = self.state.evolve(&u)?;
        let t_start = self.math_time;
        self.math_time += dt;
        self.log.push(Step::Segment(Segment {
            t_start,
            t_end: self.math_time,
            unitary_id: unitary_id.into(),
        }));
        Ok(())
    }

    /// Heisenberg collapse at the current time; the unnormalized branch is kept.
    pub fn pose_question<R: Rng + ?Sized>(
        &mut self,
        projector_id: impl Into<String>,
        p: &Projector<T>,
        rng: &mut R,
    ) -> Result<&Event<T>> {
        let outcome = heisenberg_collapse(&self.state, p, rng)?;
        Ok(self.record(
            projector_id.into(),
            outcome.answer,
            outcome.probability_yes,
            outcome.post_state,
        ))
    }

    /// Follows a chosen branch instead of drawing one, for enumerating outcome trees.
    pub fn pose_question_with_answer(
        &mut self,
        projector_id: impl Into<String>,
        p: &Projector<T>,
        answer: Answer,
    ) -> Result<&Event<T>> {
        let probability = prob_yes(&self.state, p)?;
        let post = branch(&self.state, p, answer)?;
        Ok(self.record(projector_id.into(), answer, probability, post))
    }

    fn record(&mut self, projector_id: String, answer: Answer, prob_yes: T, post: DensityState<T>) -> &Event<T> {
        let weight_before = self.state.weight();
        self.state = post;
        self.process_index += 1;
        self.log.push(Step::Event(Event {
            process_index: self.process_index,
            math_time: self.math_time,
            projector_id,
            answer,
            prob_yes,
            weight_before,
            weight_after: self.state.weight(),
        }));
        match self.log.last() {
            Some(Step::Event(e)) => e,
            _ => unreachable!(),
        }
    }

    /// Horizontal runs at constant index, unit rises at jump times, starting at (t₀, 0).
    pub fn staircase(&self) -> Vec<StairPoint<T>> {
        let mut points = vec![StairPoint {
            t: self.start_time,
            i: 0,
        }];
        for step in &self.log {
            match step {
                Step::Segment(s) => points.push(StairPoint {
                    t: s.t_end,
                    i: points.last().expect("non-empty").i,
                }),
                Step::Event(e) => points.push(StairPoint {
                    t: e.math_time,
                    i: e.process_index,
                }),
            }
        }
        points
    }
}
