//! Three-state control model.
//!
//! State 2 (`TEMPLATE`) is the one singled out by the question projector, the
//! coupling U drains it into the motor state 3 (`MOTOR`), and the mixing M
//! exchanges amplitude between states 1 (`NEIGHBOR`) and 2. Asking the
//! question before U removes the 1–2 coherence and raises the final weight of
//! state 2.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, CompositeSpace};
use crate::scalar::Real;
use crate::state::{process_one, raw_weight, DensityState, Projector};

pub const NEIGHBOR: usize = 0;
pub const TEMPLATE: usize = 1;
pub const MOTOR: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoParams<T> {
    pub x: T,
    pub y: T,
    pub z: Complex<T>,
    pub c: Complex<T>,
    pub s: Complex<T>,
}

impl<T: Real> ZenoParams<T> {
    /// r = 2^(−1/2), the fixed coupling amplitude.
    pub fn r() -> T {
        T::FRAC_1_SQRT_2()
    }

    /// x = y = z = 1 and c = s = r.
    pub fn standard() -> Self {
        let r = Complex::new(Self::r(), T::zero());
        Self {
            x: T::one(),
            y: T::one(),
            z: Complex::new(T::one(), T::zero()),
            c: r,
            s: r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x >= T::zero() && self.y >= T::zero()) {
            return Err(Error::Validation("x and y must be non-negative".into()));
        }
        let unit_tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
        let norm = self.c.norm_sqr() + self.s.norm_sqr();
        if (norm - T::one()).abs() > unit_tol {
            return Err(Error::Validation(format!("|c|² + |s|² = {norm}, expected 1")));
        }
        if self.z.norm_sqr() > self.x * self.y + T::validation_tol() {
            return Err(Error::Validation(format!(
                "|z|² = {} exceeds x·y = {}; S would not be positive semidefinite",
                self.z.norm_sqr(),
                self.x * self.y
            )));
        }
        Ok(())
    }

    pub fn with_z(self, z: Complex<T>) -> Self {
        Self { z, ..self }
    }
}

/// Matrices of the model in the basis (1, 2, 3) → indices (0, 1, 2).
#[derive(Debug, Clone)]
pub struct ZenoModel<T> {
    pub state: DensityState<T>,
    pub coupling: ComplexMatrix<T>,
    pub mixing: ComplexMatrix<T>,
    pub question: Projector<T>,
}

impl<T: Real> ZenoModel<T> {
    pub fn new(p: &ZenoParams<T>) -> Result<Self> {
        p.validate()?;
        let zero = Complex::new(T::zero(), T::zero());
        let re = |v: T| Complex::new(v, T::zero());
        let space = CompositeSpace::single(3)?;

        let mut s = ComplexMatrix::zeros(3, 3);
        s[(NEIGHBOR, NEIGHBOR)] = re(p.x);
        s[(TEMPLATE, TEMPLATE)] = re(p.y);
        s[(NEIGHBOR, TEMPLATE)] = p.z;
        s[(TEMPLATE, NEIGHBOR)] = p.z.conj();

        let r = re(ZenoParams::<T>::r());
        let mut u = ComplexMatrix::zeros(3, 3);
        u[(NEIGHBOR, NEIGHBOR)] = re(T::one());
        u[(TEMPLATE, TEMPLATE)] = r;
        u[(TEMPLATE, MOTOR)] = r;
        u[(MOTOR, MOTOR)] = r;
        u[(MOTOR, TEMPLATE)] = -r;

        let mut m = ComplexMatrix::zeros(3, 3);
        m[(NEIGHBOR, NEIGHBOR)] = p.c;
        m[(NEIGHBOR, TEMPLATE)] = p.s;
        m[(TEMPLATE, NEIGHBOR)] = -p.s.conj();
        m[(TEMPLATE, TEMPLATE)] = p.c.conj();
        m[(MOTOR, MOTOR)] = re(T::one());
        debug_assert!(m[(MOTOR, NEIGHBOR)] == zero);

        Ok(Self {
            state: DensityState::new(space.clone(), s)?,
            coupling: u,
            mixing: m,
            question: Projector::basis_state(space, TEMPLATE)?,
        })
    }
}

/// Raw weights Tr(P·) at the three stages of the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoRun<T> {
    pub w_initial: T,
    pub w_after_u: T,
    pub w_final: T,
}

/// x·s*s + y·c*c/2 − z·c·s*·r − z*·c*·s·r, with z taken as 0 when the question was asked first.
pub fn zeno_closed_form<T: Real>(p: &ZenoParams<T>, collapsed: bool) -> T {
    let r = ZenoParams::<T>::r();
    let z = if collapsed {
        Complex::new(T::zero(), T::zero())
    } else {
        p.z
    };
    let half = T::lit(0.5);
    p.x * p.s.norm_sqr() + p.y * p.c.norm_sqr() * half
        - (z * p.c * p.s.conj() * r).re
        - (z.conj() * p.c.conj() * p.s * r).re
}

/// Runs (optional Process I with P), then U, then M on the 3×3 matrices.
pub fn zeno_matrix_run<T: Real>(p: &ZenoParams<T>, collapsed: bool) -> Result<ZenoRun<T>> {
    let model = ZenoModel::new(p)?;
    let start = if collapsed {
        process_one(&model.state, &model.question)?
    } else {
        model.state.clone()
    };
    let after_u = start.evolve(&model.coupling)?;
    let after_m = after_u.evolve(&model.mixing)?;
    Ok(ZenoRun {
        w_initial: raw_weight(&start, &model.question)?,
        w_after_u: raw_weight(&after_u, &model.question)?,
        w_final: raw_weight(&after_m, &model.question)?,
    })
}
