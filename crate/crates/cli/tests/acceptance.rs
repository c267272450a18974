//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, LOG10_2, SQRT_2};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use collapse_core::experiments::{
    branch_count, selection_advantage_mc, synapse_estimates, zeno_closed_form, zeno_matrix_run, SynapseParams,
    ZenoParams,
};
use collapse_core::lattice::{
    config_space_log10, gestalt_collapse, lift_to_superposition, pattern_projector, ConfigSpaceSize,
    InitialDistribution, LatticeConfig, Pattern, Rule,
};
use collapse_core::linalg::{partial_trace, CompositeSpace};
use collapse_core::nonlocality::{
    chsh_combinations, chsh_values, deterministic_table, joint_probs, local_model_check, BipartiteExperiment,
    CorrelationTable, LocalStrategy, Table,
};
use collapse_core::rng::{engine, trial_engine};
use collapse_core::sample::{
    random_density, random_good_measurement, random_no_signaling_table, random_projector, random_unitary,
};
use collapse_core::state::{entropy, invariance_check, process_one, vn_equivalence_check, EquivalenceReport};
use collapse_core::{ComplexMatrix, DensityState, Projector};
use num_complex::Complex;
use rand::Rng;

type M = ComplexMatrix<f64>;

/// Criterion outcome: Ok(detail) or Err(reason).
type Outcome = Result<String, String>;

type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn zeno_golden() -> Outcome {
    let start = Instant::now();
    let p = ZenoParams::<f64>::standard();
    let plain = zeno_matrix_run(&p, false).map_err(|e| e.to_string())?;
    let asked = zeno_matrix_run(&p, true).map_err(|e| e.to_string())?;
    let expected = 0.75 - FRAC_1_SQRT_2;
    check(
        (plain.w_initial - 1.0).abs() <= 1e-12,
        format!("Tr(PS) = {}", plain.w_initial),
    )?;
    check(
        (plain.w_after_u - 0.5).abs() <= 1e-12,
        format!("Tr(PUSU†) = {}", plain.w_after_u),
    )?;
    check(
        (plain.w_final - expected).abs() <= 1e-12,
        format!("uncollapsed {}", plain.w_final),
    )?;
    check(
        (asked.w_final - 0.75).abs() <= 1e-12,
        format!("collapsed {}", asked.w_final),
    )?;
    for (run, collapsed) in [(plain, false), (asked, true)] {
        let closed = zeno_closed_form(&p, collapsed);
        check(
            (closed - run.w_final).abs() <= 1e-12,
            format!("closed form {closed} vs {}", run.w_final),
        )?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!(
        "weights 1, 0.5, {:.12} / {:.12} in {elapsed:.1?}",
        plain.w_final, asked.w_final
    ))
}

fn entropy_jump() -> Outcome {
    let space = CompositeSpace::single(2).unwrap();
    let plus = [Complex::new(FRAC_1_SQRT_2, 0.0), Complex::new(FRAC_1_SQRT_2, 0.0)];
    let s = DensityState::from_pure(space.clone(), &plus).unwrap();
    let p = Projector::basis_state(space, 0).unwrap();
    let before = entropy(&s).unwrap();
    let after = entropy(&process_one(&s, &p).unwrap()).unwrap();
    check(before <= 1e-10, format!("initial entropy {before}"))?;
    check((after - LN_2).abs() <= 1e-10, format!("entropy after {after}"))?;
    Ok(format!("{before:.1e} -> {after:.12}"))
}

fn quasi_locality() -> Outcome {
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let mut rng = trial_engine(103, trial);
        let (da, db) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let space = CompositeSpace::new(vec![da, db]).unwrap();
        let s = DensityState::new(space.clone(), random_density(da * db, &mut rng)).unwrap();
        let pa: M = random_projector(da, rng.gen_range(0..=da), &mut rng);
        let p = Projector::new(space.clone(), pa.kron(&M::identity(db)).unwrap()).unwrap();
        let after = process_one(&s, &p).unwrap();
        let diff = partial_trace(after.matrix(), &space, &[0])
            .unwrap()
            .max_abs_diff(&partial_trace(s.matrix(), &space, &[0]).unwrap())
            .unwrap();
        worst = worst.max(diff);
    }
    check(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("500 states, max deviation {worst:.1e}"))
}

fn conservation_and_invariance() -> Outcome {
    let mut worst_trace = 0.0f64;
    for trial in 0..1000 {
        let mut rng = trial_engine(104, trial);
        let n = rng.gen_range(1..=16);
        let space = CompositeSpace::single(n).unwrap();
        let s = DensityState::new(space.clone(), random_density::<f64, _>(n, &mut rng)).unwrap();
        let p = Projector::new(space, random_projector(n, rng.gen_range(0..=n), &mut rng)).unwrap();
        let q = p.complement();
        let yes = p
            .matrix()
            .matmul(s.matrix())
            .unwrap()
            .matmul(p.matrix())
            .unwrap()
            .trace()
            .unwrap()
            .re;
        let no = q
            .matrix()
            .matmul(s.matrix())
            .unwrap()
            .matmul(q.matrix())
            .unwrap()
            .trace()
            .unwrap()
            .re;
        worst_trace = worst_trace.max((yes + no - s.weight()).abs());
    }
    check(worst_trace <= 1e-12, format!("trace deviation {worst_trace:e}"))?;

    let mut worst_prob = 0.0f64;
    for trial in 0..500 {
        let mut rng = trial_engine(105, trial);
        let n = rng.gen_range(2..=8);
        let rank = rng.gen_range(0..=n);
        let space = CompositeSpace::single(n).unwrap();
        let basis = random_unitary::<f64, _>(n, &mut rng);
        let inside = random_unitary::<f64, _>(rank, &mut rng);
        let outside = random_unitary::<f64, _>(n - rank, &mut rng);
        let mut block = M::zeros(n, n);
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
        let bits: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
        let p = Projector::new(
            space.clone(),
            M::real_diag(&bits).conjugate_by(&basis).unwrap().hermitian_part(),
        )
        .unwrap();
        let s = DensityState::new(space, random_density(n, &mut rng)).unwrap();
        let r = invariance_check(&s, &p, &u).unwrap();
        check(r.commutes, "generated rearrangement does not commute with P")?;
        worst_prob = worst_prob.max((r.prob_before - r.prob_after).abs());
    }
    check(worst_prob <= 1e-12, format!("probability shift {worst_prob:e}"))?;
    Ok(format!(
        "trace {worst_trace:.1e} over 1000, probability {worst_prob:.1e} over 500"
    ))
}

fn good_measurement() -> Outcome {
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let mut rng = trial_engine(106, trial);
        let env = rng.gen_range(2..=4);
        let comps = rng.gen_range(2..=env);
        let sys =
            random_good_measurement::<f64, _>(rng.gen_range(2..=4), env, comps, rng.gen_range(1..comps), &mut rng);
        match vn_equivalence_check(&sys).map_err(|e| e.to_string())? {
            EquivalenceReport::Applicable { max_deviation } => worst = worst.max(max_deviation),
            EquivalenceReport::Inapplicable => return Err("generated system rejected as a good measurement".into()),
        }
    }
    check(worst <= 1e-10, format!("equivalence deviation {worst:e}"))?;

    let mut worst_noop = 0.0f64;
    for trial in 0..200 {
        let mut rng = trial_engine(107, trial);
        let n = rng.gen_range(2..=8);
        let u = random_unitary::<f64, _>(n, &mut rng);
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let bits: Vec<f64> = (0..n).map(|_| f64::from(u8::from(rng.gen_bool(0.5)))).collect();
        let space = CompositeSpace::single(n).unwrap();
        let s = DensityState::new(
            space.clone(),
            M::real_diag(&w).conjugate_by(&u).unwrap().hermitian_part(),
        )
        .unwrap();
        let p = Projector::new(space, M::real_diag(&bits).conjugate_by(&u).unwrap().hermitian_part()).unwrap();
        let after = process_one(&s, &p).unwrap();
        worst_noop = worst_noop.max(after.matrix().max_abs_diff(s.matrix()).unwrap());
    }
    check(
        worst_noop <= 1e-12,
        format!("commuting reduction moved S by {worst_noop:e}"),
    )?;
    Ok(format!(
        "200 systems, deviation {worst:.1e}; commuting no-op {worst_noop:.1e}"
    ))
}

fn synapse() -> Outcome {
    let e = synapse_estimates(&SynapseParams::<f64>::default(), 20).map_err(|e| e.to_string())?;
    check((1.4..=1.7).contains(&e.delta_v), format!("delta_v {}", e.delta_v))?;
    check(
        (3e-3..=7e-3).contains(&e.velocity_ratio),
        format!("ratio {}", e.velocity_ratio),
    )?;
    check((0.1e-9..=0.4e-9).contains(&e.spread), format!("spread {}", e.spread))?;
    for n in [1u32, 20, 100, 1000] {
        let l = synapse_estimates(&SynapseParams::<f64>::default(), n)
            .unwrap()
            .branch_log10;
        check(l == f64::from(n) * LOG10_2, format!("branch log10 at N = {n}"))?;
        check(branch_count(n) == pow2(n), format!("branch count at N = {n}"))?;
    }
    Ok(format!(
        "delta_v {:.4} m/s, ratio {:.3e}, spread {:.3} nm",
        e.delta_v,
        e.velocity_ratio,
        e.spread * 1e9
    ))
}

fn pow2(n: u32) -> BigUint {
    (0..n).fold(BigUint::from(1u8), |acc, _| acc * 2u8)
}

fn lattice_scaling() -> Outcome {
    let big = LatticeConfig::new([1000, 1000, 1000], 3, 1000, Rule::Identity).map_err(|e| e.to_string())?;
    let exact = ConfigSpaceSize::of(&big).log10_exact();
    check(
        exact == Some(BigUint::from(9_000_000_000u64)),
        format!("exact log10 {exact:?}"),
    )?;
    check(config_space_log10(&big) == 9e9, "floating log10")?;

    let cfg = LatticeConfig::new([2, 2, 1], 1, 2, Rule::Identity).unwrap();
    let psi = lift_to_superposition::<f64>(&cfg, &InitialDistribution::Uniform).unwrap();
    let pattern = Pattern::full_face(&cfg, 1);
    let proj = pattern_projector(&cfg, &pattern).unwrap();
    let out = gestalt_collapse(&psi, &proj, &mut engine(0)).unwrap();
    let enumerated = (0..cfg.config_count().unwrap())
        .filter(|&i| cfg.config_at(i).unwrap().values.iter().all(|&v| v == 1))
        .map(|i| psi.amplitudes()[i].norm_sqr())
        .sum::<f64>();
    check(
        (out.probability_yes - 1.0 / 16.0).abs() <= 1e-12,
        format!("yes probability {}", out.probability_yes),
    )?;
    check(
        (enumerated - out.probability_yes).abs() <= 1e-12,
        "enumeration disagrees",
    )?;
    Ok(format!(
        "log10 = 9e9 exactly; 2x2 yes-probability {}",
        out.probability_yes
    ))
}

fn nonlocality() -> Outcome {
    let t = joint_probs(&BipartiteExperiment::<f64>::singlet_chsh()).map_err(|e| e.to_string())?;
    let v = local_model_check(&t).map_err(|e| e.to_string())?;
    check(
        (v.max_abs_chsh - 2.0 * SQRT_2).abs() <= 1e-9,
        format!("max |CHSH| {}", v.max_abs_chsh),
    )?;
    check(!v.locally_explainable && v.mixture.is_none(), "singlet judged local")?;

    let vertex_max = LocalStrategy::all()
        .iter()
        .flat_map(|s| {
            let d: Table<i64> = deterministic_table(s);
            chsh_combinations(&d).map(i64::abs)
        })
        .max()
        .unwrap();
    check(vertex_max == 2, format!("vertex maximum {vertex_max}"))?;

    let mut local = 0;
    for trial in 0..1000 {
        let mut rng = trial_engine(108, trial);
        let table = CorrelationTable::new(random_no_signaling_table::<f64, _>(&mut rng)).unwrap();
        let verdict = local_model_check(&table).map_err(|e| format!("table {trial}: {e}"))?;
        let max = chsh_values(&table).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        check(
            verdict.locally_explainable == (max <= 2.0 + 1e-9),
            "verdict inconsistent",
        )?;
        local += usize::from(verdict.locally_explainable);
    }
    Ok(format!(
        "singlet {:.9}, vertices bounded by {vertex_max}, LP agrees on 1000 tables ({local} local)",
        v.max_abs_chsh
    ))
}

fn selection() -> Outcome {
    let start = Instant::now();
    let r = selection_advantage_mc(&ZenoParams::<f64>::standard(), 100_000, 0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let n = r.n_trials as f64;
    let within = |rate: f64, p: f64| (rate - p).abs() <= 3.0 * (p * (1.0 - p) / n).sqrt();
    check(
        (r.exact_with_questions - 0.375).abs() < 1e-12,
        "exact rate with questions",
    )?;
    check((r.exact_without - 0.02145).abs() < 1e-5, "exact rate without")?;
    check(
        within(r.rate_with_questions, r.exact_with_questions),
        format!("with {}", r.rate_with_questions),
    )?;
    check(
        within(r.rate_without, r.exact_without),
        format!("without {}", r.rate_without),
    )?;
    check(r.rate_with_questions > r.rate_without, "no advantage")?;
    check(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{:.5} vs {:.5} (exact 0.375 / {:.5}) in {elapsed:.1?}",
        r.rate_with_questions, r.rate_without, r.exact_without
    ))
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 8] = [
        &["zeno", "--preset", "zeno-paper"],
        &["selection", "--preset", "zeno-paper", "--trials", "20000"],
        &["nonlocal", "--preset", "singlet-chsh"],
        &["lattice", "--preset", "m-glyph-5x5"],
        &[
            "lattice",
            "--edges",
            "4,1,1",
            "--values",
            "2",
            "--rule",
            "xor",
            "--steps",
            "3",
            "--face-value",
            "1",
        ],
        &["trace", "--steps", "20"],
        &["synapse"],
        &["trace", "--steps", "20", "--format", "csv"],
    ];
    let run = |args: &[&str], threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_collapse"))
            .args(args)
            .args(["--seed", "1234", "--threads", threads])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {:?}", out.status.code()));
        }
        Ok(out.stdout)
    };
    for args in runs {
        let base = run(args, "1")?;
        for threads in ["1", "2", "8"] {
            check(
                run(args, threads)? == base,
                format!("{args:?} differs with {threads} threads"),
            )?;
        }
    }
    Ok(format!("{} commands x 4 runs byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("zeno golden weights", zeno_golden),
        ("entropy jump to ln 2", entropy_jump),
        ("quasi-locality of Process I", quasi_locality),
        ("trace conservation and invariance", conservation_and_invariance),
        ("good-measurement equivalence", good_measurement),
        ("synapse estimates", synapse),
        ("lattice scaling and pattern collapse", lattice_scaling),
        ("nonlocality verdict and LP agreement", nonlocality),
        ("selection advantage Monte Carlo", selection),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
