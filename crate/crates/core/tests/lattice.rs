use collapse_core::lattice::{
    classical_step, config_space_log10, gestalt_collapse, lift_to_superposition, pattern_projector, quantum_step,
    ConfigSpaceSize, FaceCell, InitialDistribution, LatticeConfig, Pattern, Rule, SuperpositionState,
};
use collapse_core::rng::trial_engine;
use collapse_core::sample::random_unit_vector;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;

fn ring(n: u64, values: u64, rule: Rule) -> LatticeConfig {
    LatticeConfig::ring(n, values, rule).unwrap()
}

fn random_state(cfg: &LatticeConfig, seed: u64) -> SuperpositionState<f64> {
    let mut rng = trial_engine(seed, 0);
    SuperpositionState::new(random_unit_vector(cfg.config_count().unwrap(), &mut rng)).unwrap()
}

proptest! {
    #[test]
    fn quantum_step_preserves_norm(seed in any::<u64>(), n in 2u64..7, shift in any::<bool>()) {
        let cfg = ring(n, 2, if shift { Rule::Shift } else { Rule::Identity });
        let psi = random_state(&cfg, seed);
        let next = quantum_step(&cfg, &psi).unwrap();
        let mut a: Vec<f64> = psi.amplitudes().iter().map(|z| z.norm_sqr()).collect();
        let mut b: Vec<f64> = next.amplitudes().iter().map(|z| z.norm_sqr()).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gestalt_probability_matches_enumeration(seed in any::<u64>(), v0 in 0u32..2, v1 in 0u32..2) {
        let cfg = LatticeConfig::new([2, 2, 1], 1, 2, Rule::Identity).unwrap();
        let psi = random_state(&cfg, seed);
        let pattern = Pattern {
            cells: vec![FaceCell { x: 0, y: 0, field: 0, value: v0 }, FaceCell { x: 1, y: 1, field: 0, value: v1 }],
        };
        let proj = pattern_projector(&cfg, &pattern).unwrap();
        let mut rng = trial_engine(seed, 1);
        let out = gestalt_collapse(&psi, &proj, &mut rng).unwrap();
        let mut matching = 0.0;
        for i in 0..cfg.config_count().unwrap() {
            let c = cfg.config_at(i).unwrap();
            if c.values[cfg.site_index(0, 0, 0) as usize] == v0 && c.values[cfg.site_index(1, 1, 0) as usize] == v1 {
                matching += psi.amplitudes()[i].norm_sqr();
            }
        }
        prop_assert!((out.probability_yes - matching / psi.norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn lift_commutes_with_step_on_basis_states() {
    let mut rng = trial_engine(8, 0);
    for rule in [Rule::Identity, Rule::Shift, Rule::Xor] {
        let cfg = ring(4, 2, rule);
        for _ in 0..16 {
            let i = rng.gen_range(0..cfg.config_count().unwrap());
            let c = cfg.config_at(i).unwrap();
            let stepped = quantum_step(
                &cfg,
                &lift_to_superposition::<f64>(&cfg, &InitialDistribution::Point(c.clone())).unwrap(),
            )
            .unwrap();
            let lifted =
                lift_to_superposition::<f64>(&cfg, &InitialDistribution::Point(classical_step(&cfg, &c).unwrap()))
                    .unwrap();
            assert_eq!(stepped, lifted);
        }
    }
}

#[test]
fn non_injective_rule_is_rejected() {
    let cfg = ring(3, 2, Rule::Zero);
    let psi = lift_to_superposition::<f64>(&cfg, &InitialDistribution::Uniform).unwrap();
    assert_eq!(quantum_step(&cfg, &psi).unwrap_err().kind(), "non_unitary_rule");
}

#[test]
fn log_count_is_additive() {
    for (a, b) in [(3u64, 5u64), (1, 1), (7, 2)] {
        let left = LatticeConfig::new([a, 1, 1], 2, 10, Rule::Identity).unwrap();
        let right = LatticeConfig::new([b, 1, 1], 2, 10, Rule::Identity).unwrap();
        let joined = LatticeConfig::new([a + b, 1, 1], 2, 10, Rule::Identity).unwrap();
        let sum = ConfigSpaceSize::of(&left)
            .combine(&ConfigSpaceSize::of(&right))
            .unwrap();
        assert_eq!(sum, ConfigSpaceSize::of(&joined));
        assert_eq!(sum.log10_exact(), Some(BigUint::from(2 * (a + b))));
        assert!((config_space_log10(&joined) - (2 * (a + b)) as f64).abs() < 1e-12);
    }
}

#[test]
fn oversized_lattice_is_refused() {
    let cfg = LatticeConfig::new([5, 5, 1], 1, 2, Rule::Identity).unwrap();
    assert_eq!(cfg.config_count().unwrap_err().kind(), "size");
    assert!((Pattern::m_glyph_5x5().match_fraction(&cfg).unwrap() - 2f64.powi(-25)).abs() < 1e-20);
}
