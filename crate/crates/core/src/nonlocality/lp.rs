//! Phase-one simplex deciding whether a correlation table is a convex mixture
//! of the 16 deterministic local strategies.
//!
//! Generic over the field: `f64`/`f32` use small pivot and feasibility
//! tolerances, `BigRational` decides exactly. Bland's rule prevents cycling.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};

use super::{LocalStrategy, Table};

pub trait LpScalar: Clone + PartialOrd + Num + Signed + Debug {
    /// Entries at or below this magnitude are not used as pivots.
    fn pivot_eps() -> Self;
    /// Largest residual infeasibility accepted as feasible.
    fn feasibility_tol() -> Self;
}

impl LpScalar for f64 {
    fn pivot_eps() -> Self {
        1e-12
    }

    fn feasibility_tol() -> Self {
        1e-9
    }
}

impl LpScalar for f32 {
    fn pivot_eps() -> Self {
        1e-6
    }

    fn feasibility_tol() -> Self {
        1e-4
    }
}

impl LpScalar for BigRational {
    fn pivot_eps() -> Self {
        Self::zero()
    }

    fn feasibility_tol() -> Self {
        Self::zero()
    }
}

/// Constraint rows: 16 table entries then the normalization Σλ = 1.
fn constraints<F: LpScalar>(table: &Table<F>) -> (Vec<Vec<F>>, Vec<F>) {
    let strategies = LocalStrategy::all();
    let mut a = Vec::with_capacity(17);
    let mut b = Vec::with_capacity(17);
    for (ai, bi, x, y) in super::table_indices() {
        a.push(
            strategies
                .iter()
                .map(|s| {
                    if s.left[x] == ai && s.right[y] == bi {
                        F::one()
                    } else {
                        F::zero()
                    }
                })
                .collect(),
        );
        b.push(table[ai][bi][x][y].clone());
    }
    a.push(vec![F::one(); strategies.len()]);
    b.push(F::one());
    (a, b)
}

/// Mixture weights over [`LocalStrategy::all`] reproducing `table`, if one exists.
pub fn local_mixture<F: LpScalar>(table: &Table<F>) -> Option<Vec<F>> {
    let (mut rows, mut rhs) = constraints(table);
    let n = rows[0].len();
    let m = rows.len();
    for (row, b) in rows.iter_mut().zip(rhs.iter_mut()) {
        if b.is_negative() {
            row.iter_mut().for_each(|x| *x = -x.clone());
            *b = -b.clone();
        }
    }
    // Artificial variables start basic; they never re-enter once they leave.
    let mut basis: Vec<Option<usize>> = vec![None; m];
    let mut reduced: Vec<F> = (0..n)
        .map(|j| rows.iter().fold(F::zero(), |acc, r| acc - r[j].clone()))
        .collect();

    loop {
        let neg_eps = -F::pivot_eps();
        let Some(enter) = (0..n).find(|&j| reduced[j] < neg_eps) else {
            break;
        };
        let mut leave: Option<(usize, F)> = None;
        for i in 0..m {
            if rows[i][enter] > F::pivot_eps() {
                let ratio = rhs[i].clone() / rows[i][enter].clone();
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && basis_key(basis[i], n + i) < basis_key(basis[*k], n + *k))
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Unbounded directions cannot occur: the objective is bounded below by 0.
        let (r, _) = leave?;

        let pivot = rows[r][enter].clone();
        rows[r].iter_mut().for_each(|x| *x = x.clone() / pivot.clone());
        rhs[r] = rhs[r].clone() / pivot;
        for i in 0..m {
            if i == r || rows[i][enter].is_zero() {
                continue;
            }
            let f = rows[i][enter].clone();
            for j in 0..n {
                let d = f.clone() * rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - d;
            }
            rhs[i] = rhs[i].clone() - f * rhs[r].clone();
        }
        let f = reduced[enter].clone();
        for j in 0..n {
            reduced[j] = reduced[j].clone() - f.clone() * rows[r][j].clone();
        }
        basis[r] = Some(enter);
    }

    let residual = basis
        .iter()
        .zip(&rhs)
        .filter(|(b, _)| b.is_none())
        .fold(F::zero(), |acc, (_, v)| acc + v.clone());
    if residual > F::feasibility_tol() {
        return None;
    }
    let mut weights = vec![F::zero(); n];
    for (b, v) in basis.iter().zip(rhs) {
        if let Some(j) = b {
            weights[*j] = v;
        }
    }
    Some(weights)
}

fn basis_key(b: Option<usize>, artificial: usize) -> usize {
    b.unwrap_or(artificial)
}
