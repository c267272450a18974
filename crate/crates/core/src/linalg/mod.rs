//! Dense complex linear algebra over composite tensor-product spaces.

mod eigen;
mod matrix;
mod space;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use matrix::{ComplexMatrix, MAX_DIM};
pub use space::{partial_trace, CompositeSpace};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.kron(b)
}

pub fn trace<T: Real>(m: &ComplexMatrix<T>) -> Result<Complex<T>> {
    m.trace()
}

/// ⟨v|op|v⟩.
pub fn expectation<T: Real>(op: &ComplexMatrix<T>, state: &[Complex<T>]) -> Result<Complex<T>> {
    if !op.is_square() {
        return Err(Error::Shape("expectation needs a square operator".into()));
    }
    let image = op.mul_vec(state)?;
    Ok(state.iter().zip(&image).map(|(v, w)| v.conj() * w).sum())
}

/// exp(−i·h·t) through the eigendecomposition of the Hermitian generator.
pub fn unitary_from_hamiltonian<T: Real>(h: &ComplexMatrix<T>, t: T) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eigen(h)?;
    let u = eig.map_values(|e| Complex::new(T::zero(), -(e * t)).exp());
    debug_assert!(u.is_unitary(T::validation_tol()));
    Ok(u)
}

/// Standard Pauli matrices, handy for small examples and tests.
pub mod pauli {
    use super::*;

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real(2, 2, &[T::zero(), T::one(), T::one(), T::zero()]).expect("2x2")
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        let i = Complex::new(T::zero(), T::one());
        let o = Complex::new(T::zero(), T::zero());
        ComplexMatrix::from_vec(2, 2, vec![o, -i, i, o]).expect("2x2")
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::real_diag(&[T::one(), -T::one()])
    }
}

/// Modified Gram–Schmidt; vectors whose residual norm falls below `tol` are dropped.
pub fn orthonormalize<T: Real>(vectors: &[Vec<Complex<T>>], tol: T) -> Vec<Vec<Complex<T>>> {
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let overlap: Complex<T> = b.iter().zip(&w).map(|(bi, wi)| bi.conj() * wi).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= overlap * bi;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > tol {
            basis.push(w.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}
