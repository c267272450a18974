use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Ordered tensor factorization of a Hilbert space.
///
/// Factor 0 is the slowest-varying index of the row-major basis ordering, so
/// the basis state |i₀ i₁ … i_{k-1}⟩ sits at Σ i_j · Π_{l>j} d_l.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompositeSpace {
    factor_dims: Vec<usize>,
}

impl CompositeSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::Validation("composite space needs at least one factor".into()));
        }
        if let Some(i) = factor_dims.iter().position(|&d| d == 0) {
            return Err(Error::Validation(format!("factor {i} has dimension 0")));
        }
        let mut total: u128 = 1;
        for &d in &factor_dims {
            total = total.saturating_mul(d as u128);
        }
        if total > MAX_DIM as u128 {
            return Err(Error::Size {
                requested: total,
                limit: MAX_DIM as u128,
            });
        }
        Ok(Self { factor_dims })
    }

    /// A single unfactored space of dimension `dim`.
    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Stride of each factor in the flattened basis index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factor_dims.len()];
        for k in (0..self.factor_dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.factor_dims[k + 1];
        }
        strides
    }

    /// Space left after tracing out `traced`; an empty remainder is the 1-dimensional space.
    pub fn without(&self, traced: &[usize]) -> Result<Self> {
        self.check_factors(traced)?;
        let kept: Vec<usize> = (0..self.num_factors())
            .filter(|k| !traced.contains(k))
            .map(|k| self.factor_dims[k])
            .collect();
        Self::new(if kept.is_empty() { vec![1] } else { kept })
    }

    fn check_factors(&self, factors: &[usize]) -> Result<()> {
        match factors.iter().find(|&&k| k >= self.num_factors()) {
            Some(&index) => Err(Error::Index {
                index,
                len: self.num_factors(),
            }),
            None => Ok(()),
        }
    }

    /// Offsets in the full index for every multi-index over `factors`, in row-major order.
    fn offsets(&self, factors: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &k in factors {
            let d = self.factor_dims[k];
            let stride = strides[k];
            offsets = offsets
                .iter()
                .flat_map(|&base| (0..d).map(move |i| base + i * stride))
                .collect();
        }
        offsets
    }
}

/// Traces out the listed factors, keeping the remaining ones in their original order.
pub fn partial_trace<T: Real>(
    m: &ComplexMatrix<T>,
    space: &CompositeSpace,
    traced_factors: &[usize],
) -> Result<ComplexMatrix<T>> {
    if !m.is_square() || m.rows() != space.total_dim() {
        return Err(Error::Shape(format!(
            "{}x{} matrix does not act on a space of dimension {}",
            m.rows(),
            m.cols(),
            space.total_dim()
        )));
    }
    space.check_factors(traced_factors)?;
    let mut traced: Vec<usize> = traced_factors.to_vec();
    traced.sort_unstable();
    traced.dedup();
    let kept: Vec<usize> = (0..space.num_factors())
        .filter(|k| traced.binary_search(k).is_err())
        .collect();

    let kept_offsets = space.offsets(&kept);
    let traced_offsets = space.offsets(&traced);
    let n = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &row_base) in kept_offsets.iter().enumerate() {
        for (c, &col_base) in kept_offsets.iter().enumerate() {
            out[(r, c)] = traced_offsets.iter().map(|&t| m[(row_base + t, col_base + t)]).sum();
        }
    }
    Ok(out)
}
