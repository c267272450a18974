use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::zeno::{zeno_matrix_run, ZenoModel, ZenoParams};
use crate::error::{Error, Result};
use crate::process::{Evolution, ProcessTrace};
use crate::rng::trial_engine;
use crate::scalar::Real;
use crate::state::{Answer, Projector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionRates<T> {
    pub n_trials: u64,
    pub rate_with_questions: T,
    pub rate_without: T,
    /// w_final / Tr(S) from the matrix run, for comparison.
    pub exact_with_questions: T,
    pub exact_without: T,
}

fn motor_trial<T: Real, R: rand::Rng>(model: &ZenoModel<T>, ask_first: bool, rng: &mut R) -> Result<bool> {
    let mut trace = ProcessTrace::new(model.state.clone());
    if ask_first {
        trace.pose_question("P", &model.question, rng)?;
    }
    trace.evolve("U", Evolution::Unitary(&model.coupling))?;
    trace.evolve("M", Evolution::Unitary(&model.mixing))?;
    let readout: &Projector<T> = &model.question;
    Ok(trace.pose_question("P", readout, rng)?.answer == Answer::Yes)
}

/// Monte Carlo over full trajectories, with and without the question posed before U.
///
/// Trial `k` draws from the engine seeded with `mix64(seed, k)` and runs the
/// questioning arm before the plain arm, so the counts do not depend on how
/// trials are scheduled across threads.
pub fn selection_advantage_mc<T: Real>(p: &ZenoParams<T>, n_trials: u64, seed: u64) -> Result<SelectionRates<T>> {
    if n_trials == 0 {
        return Err(Error::Validation("n_trials must be at least 1".into()));
    }
    let model = ZenoModel::new(p)?;
    let total = model.state.weight();

    let (with_q, without) = (0..n_trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_engine(seed, k);
            let a = motor_trial(&model, true, &mut rng)?;
            let b = motor_trial(&model, false, &mut rng)?;
            Ok((a as u64, b as u64))
        })
        .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))?;

    let n = T::from_u64(n_trials).expect("trial count fits");
    Ok(SelectionRates {
        n_trials,
        rate_with_questions: T::from_u64(with_q).expect("count fits") / n,
        rate_without: T::from_u64(without).expect("count fits") / n,
        exact_with_questions: zeno_matrix_run(p, true)?.w_final / total,
        exact_without: zeno_matrix_run(p, false)?.w_final / total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn single_trial_rates_are_binary() {
        let r = selection_advantage_mc(&ZenoParams::<f64>::standard(), 1, 3).unwrap();
        for rate in [r.rate_with_questions, r.rate_without] {
            assert!(rate == 0.0 || rate == 1.0);
        }
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(selection_advantage_mc(&ZenoParams::<f64>::standard(), 0, 0).is_err());
    }

    #[test]
    fn exact_rates() {
        let r = selection_advantage_mc(&ZenoParams::<f64>::standard(), 10, 0).unwrap();
        assert!((r.exact_with_questions - 0.375).abs() < 1e-12);
        assert!((r.exact_without - (0.75 - std::f64::consts::FRAC_1_SQRT_2) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn incoherent_start_makes_arms_equal() {
        let p = ZenoParams::<f64>::standard().with_z(Complex::new(0.0, 0.0));
        let n = 20_000;
        let r = selection_advantage_mc(&p, n, 17).unwrap();
        assert_eq!(r.exact_with_questions, r.exact_without);
        let q = r.exact_without;
        let sigma = (2.0 * q * (1.0 - q) / n as f64).sqrt();
        assert!((r.rate_with_questions - r.rate_without).abs() < 4.0 * sigma);
    }
}
