//! Random operators and states for property checks and Monte Carlo setups.
//!
//! Entries are drawn uniformly from [-1, 1]; the distributions are not Haar
//! but cover generic positions, which is all the checks need.

use num_complex::Complex;
use rand::Rng;

use crate::linalg::{orthonormalize, ComplexMatrix};
use crate::nonlocality::{deterministic_table, pr_box_table, table_indices, LocalStrategy, Table};
use crate::scalar::Real;

fn entry<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
}

pub fn random_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..n).map(|_| entry(rng)).collect()
}

pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    loop {
        let v = random_vector::<T, R>(n, rng);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > T::lit(1e-3) {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| entry(rng)).collect()).expect("finite entries")
}

pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    random_matrix::<T, R>(n, n, rng).hermitian_part()
}

/// Positive definite A·A† scaled to unit trace.
pub fn random_density<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let a = random_matrix::<T, R>(n, n, rng);
    let s = a.matmul(&a.adjoint()).expect("square");
    let tr = s.trace().expect("square").re;
    s.scale_real(T::one() / tr).hermitian_part()
}

/// Orthonormal basis of C^n as matrix columns.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    loop {
        let vectors: Vec<_> = (0..n).map(|_| random_vector::<T, R>(n, rng)).collect();
        let basis = orthonormalize(&vectors, T::lit(1e-6));
        if basis.len() == n {
            let mut u = ComplexMatrix::zeros(n, n);
            for (c, b) in basis.iter().enumerate() {
                for (r, &z) in b.iter().enumerate() {
                    u[(r, c)] = z;
                }
            }
            return u;
        }
    }
}

/// Projector of the given rank onto a random subspace.
pub fn random_projector<T: Real, R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix<T> {
    let u = random_unitary::<T, R>(n, rng);
    let mut d = vec![T::zero(); n];
    d.iter_mut().take(rank).for_each(|x| *x = T::one());
    ComplexMatrix::real_diag(&d)
        .conjugate_by(&u)
        .expect("square")
        .hermitian_part()
}

/// A Schmidt system whose experience set I(E) = {0..inside} satisfies the
/// good-measurement condition: system vectors inside I(E) live in a random
/// subspace, those outside it in the orthogonal complement.
pub fn random_good_measurement<T: Real, R: Rng + ?Sized>(
    system_dim: usize,
    environment_dim: usize,
    components: usize,
    inside: usize,
    rng: &mut R,
) -> crate::state::SchmidtSystem<T> {
    use crate::state::{SchmidtComponent, SchmidtSystem};
    assert!(components <= environment_dim && inside <= components);
    assert!(system_dim >= 2, "need room for two orthogonal subspaces");
    let sys_basis = random_unitary::<T, R>(system_dim, rng);
    let env_basis = random_unitary::<T, R>(environment_dim, rng);
    let split = rng.gen_range(1..system_dim);
    let column = |m: &ComplexMatrix<T>, k: usize| -> Vec<Complex<T>> { (0..m.rows()).map(|r| m[(r, k)]).collect() };
    let parts = (0..components)
        .map(|i| {
            let range = if i < inside { 0..split } else { split..system_dim };
            let mut phi = vec![Complex::new(T::zero(), T::zero()); system_dim];
            for k in range {
                let w: Complex<T> = entry(rng);
                for (p, b) in phi.iter_mut().zip(column(&sys_basis, k)) {
                    *p += w * b;
                }
            }
            SchmidtComponent {
                system: phi,
                environment: column(&env_basis, i),
            }
        })
        .collect();
    SchmidtSystem::new(system_dim, environment_dim, parts, 0..inside).expect("valid by construction")
}

/// Random no-signaling correlation table: a random mixture of up to three
/// deterministic strategies and a PR box, blended with white noise.
///
/// The PR-box weight is drawn so that both local and nonlocal tables occur.
pub fn random_no_signaling_table<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Table<T> {
    let strategies = LocalStrategy::all();
    let mut t: Table<f64> = [[[[0.0; 2]; 2]; 2]; 2];
    let pr: Table<f64> = pr_box_table();
    let noise = rng.gen_range(0.0..0.5);
    let pr_weight = rng.gen_range(0.0..1.0 - noise);
    let local = 1.0 - noise - pr_weight;
    let picks: Vec<(usize, f64)> = (0..3)
        .map(|_| (rng.gen_range(0..16), rng.gen_range(0.05..1.0)))
        .collect();
    let total: f64 = picks.iter().map(|(_, w)| w).sum();
    for (k, w) in picks {
        let d: Table<f64> = deterministic_table(&strategies[k]);
        for (a, b, x, y) in table_indices() {
            t[a][b][x][y] += local * w / total * d[a][b][x][y];
        }
    }
    for (a, b, x, y) in table_indices() {
        t[a][b][x][y] += pr_weight * pr[a][b][x][y] + noise * 0.25;
    }
    let mut out = [[[[T::zero(); 2]; 2]; 2]; 2];
    for (a, b, x, y) in table_indices() {
        out[a][b][x][y] = T::lit(t[a][b][x][y]);
    }
    out
}
