use collapse_core::linalg::{partial_trace, CompositeSpace};
use collapse_core::rng::trial_engine;
use collapse_core::sample::{random_density, random_good_measurement, random_projector, random_unitary};
use collapse_core::state::{
    branch, entropy, heisenberg_collapse, invariance_check, prob_yes, process_one, vn_equivalence_check, Answer,
    EquivalenceReport,
};
use collapse_core::{ComplexMatrix, DensityState, Projector};
use proptest::prelude::*;
use rand::Rng;

type M = ComplexMatrix<f64>;

fn random_pair(seed: u64, trial: u64, max_dim: usize) -> (DensityState<f64>, Projector<f64>) {
    let mut rng = trial_engine(seed, trial);
    let n = rng.gen_range(1..=max_dim);
    let rank = rng.gen_range(0..=n);
    let space = CompositeSpace::single(n).unwrap();
    let s = DensityState::new(
        space.clone(),
        random_density(n, &mut rng).scale_real(rng.gen_range(0.1..3.0)),
    )
    .unwrap();
    let p = Projector::new(space, random_projector(n, rank, &mut rng)).unwrap();
    (s, p)
}

#[test]
fn branches_conserve_trace() {
    for trial in 0..1000 {
        let (s, p) = random_pair(1, trial, 16);
        let yes = p.matrix().matmul(s.matrix()).unwrap().matmul(p.matrix()).unwrap();
        let q = p.complement();
        let no = q.matrix().matmul(s.matrix()).unwrap().matmul(q.matrix()).unwrap();
        let total = yes.trace().unwrap().re + no.trace().unwrap().re;
        assert!((total - s.weight()).abs() < 1e-12);
    }
}

#[test]
fn yes_frequency_matches_probability() {
    let (s, p) = random_pair(2, 0, 6);
    let prob = prob_yes(&s, &p).unwrap();
    let n = 20_000u64;
    let hits = (0..n)
        .filter(|&i| {
            let mut rng = trial_engine(77, i);
            heisenberg_collapse(&s, &p, &mut rng)
                .map(|o| o.answer == Answer::Yes)
                .unwrap_or(prob == 0.0)
        })
        .count() as f64;
    let sd = (prob * (1.0 - prob) / n as f64).sqrt();
    assert!(
        (hits / n as f64 - prob).abs() <= 3.0 * sd + 1e-12,
        "freq {} vs {prob}",
        hits / n as f64
    );
}

proptest! {
    #[test]
    fn pinching_never_lowers_entropy(seed in any::<u64>()) {
        let (s, p) = random_pair(seed, 0, 8);
        let after = process_one(&s, &p).unwrap();
        prop_assert!(entropy(&after).unwrap() >= entropy(&s).unwrap() - 1e-10);
    }

    #[test]
    fn process_one_is_idempotent(seed in any::<u64>()) {
        let (s, p) = random_pair(seed, 0, 10);
        let once = process_one(&s, &p).unwrap();
        let twice = process_one(&once, &p).unwrap();
        prop_assert!(once.matrix().max_abs_diff(twice.matrix()).unwrap() <= 1e-12);
    }

    #[test]
    fn commuting_question_changes_nothing(seed in any::<u64>(), n in 2usize..8) {
        // S and P diagonal in a common random basis
        let mut rng = trial_engine(seed, 0);
        let u = random_unitary::<f64, _>(n, &mut rng);
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let bits: Vec<f64> = (0..n).map(|_| f64::from(u8::from(rng.gen_bool(0.5)))).collect();
        let space = CompositeSpace::single(n).unwrap();
        let s = DensityState::new(space.clone(), M::real_diag(&weights).conjugate_by(&u).unwrap().hermitian_part()).unwrap();
        let p = Projector::new(space, M::real_diag(&bits).conjugate_by(&u).unwrap().hermitian_part()).unwrap();
        let after = process_one(&s, &p).unwrap();
        prop_assert!(after.matrix().max_abs_diff(s.matrix()).unwrap() <= 1e-12);
    }

    #[test]
    fn branch_weights_sum_to_total(seed in any::<u64>()) {
        let (s, p) = random_pair(seed, 0, 8);
        let w: f64 = [Answer::Yes, Answer::No]
            .iter()
            .map(|&a| branch(&s, &p, a).map(|b| b.weight()).unwrap_or(0.0))
            .sum();
        prop_assert!((w - s.weight()).abs() < 1e-12);
    }
}

#[test]
fn quasi_locality_on_random_bipartite_states() {
    for trial in 0..500 {
        let mut rng = trial_engine(3, trial);
        let (da, db) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let space = CompositeSpace::new(vec![da, db]).unwrap();
        let s = DensityState::new(space.clone(), random_density(da * db, &mut rng)).unwrap();
        let pa: M = random_projector(da, rng.gen_range(0..=da), &mut rng);
        let p = Projector::new(space.clone(), pa.kron(&M::identity(db)).unwrap()).unwrap();
        let after = process_one(&s, &p).unwrap();
        let before_env = partial_trace(s.matrix(), &space, &[0]).unwrap();
        let after_env = partial_trace(after.matrix(), &space, &[0]).unwrap();
        assert!(before_env.max_abs_diff(&after_env).unwrap() <= 1e-12);
    }
}

#[test]
fn probability_invariant_under_commuting_rearrangements() {
    for trial in 0..500 {
        let mut rng = trial_engine(4, trial);
        let n = rng.gen_range(2..=8);
        let rank = rng.gen_range(0..=n);
        let space = CompositeSpace::single(n).unwrap();
        // P and U block-diagonal in a common random basis
        let basis = random_unitary::<f64, _>(n, &mut rng);
        let bits: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
        let mut block = M::zeros(n, n);
        let (inside, outside) = (
            random_unitary::<f64, _>(rank, &mut rng),
            random_unitary::<f64, _>(n - rank, &mut rng),
        );
        for r in 0..rank {
            for c in 0..rank {
                block[(r, c)] = inside[(r, c)];
            }
        }
        for r in 0..n - rank {
            for c in 0..n - rank {
                block[(rank + r, rank + c)] = outside[(r, c)];
            }
        }
        let u = block.conjugate_by(&basis).unwrap();
        let p = Projector::new(
            space.clone(),
            M::real_diag(&bits).conjugate_by(&basis).unwrap().hermitian_part(),
        )
        .unwrap();
        let s = DensityState::new(space, random_density(n, &mut rng)).unwrap();
        let report = invariance_check(&s, &p, &u).unwrap();
        assert!(report.commutes);
        assert!((report.prob_before - report.prob_after).abs() <= 1e-12);
    }
}

#[test]
fn good_measurements_match_system_collapse() {
    for trial in 0..200 {
        let mut rng = trial_engine(5, trial);
        let sys_dim = rng.gen_range(2..=4);
        let env_dim = rng.gen_range(2..=4);
        let comps = rng.gen_range(2..=env_dim);
        let inside = rng.gen_range(1..comps);
        let sys = random_good_measurement::<f64, _>(sys_dim, env_dim, comps, inside, &mut rng);
        match vn_equivalence_check(&sys).unwrap() {
            EquivalenceReport::Applicable { max_deviation } => assert!(max_deviation <= 1e-10),
            EquivalenceReport::Inapplicable => panic!("generated system is a good measurement"),
        }
    }
}
