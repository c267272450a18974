use std::process::{Command, Output};

use serde_json::Value;

fn collapse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collapse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn zeno_defaults() {
    let out = collapse(&["zeno"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["w_final_without_collapse"], 0.0428932188135);
    assert_eq!(v["result"]["w_final_with_collapse"], 0.75);
    assert_eq!(v["seed"], 0);
}

#[test]
fn synapse_defaults() {
    let v = json(&collapse(&["synapse"]));
    let dv = v["result"]["delta_v"].as_f64().unwrap();
    assert!((dv - 1.59).abs() < 0.01);
    assert_eq!(v["result"]["branch_count"], "1048576");
}

#[test]
fn singlet_preset() {
    let v = json(&collapse(&["nonlocal", "--preset", "singlet-chsh"]));
    let m = v["result"]["max_abs_chsh"].as_f64().unwrap();
    assert!((m - 2.828427).abs() < 1e-6);
    assert_eq!(v["result"]["locally_explainable"], false);
    assert_eq!(v["result"]["status"], "violated");
}

#[test]
fn staircase_csv_header() {
    let out = collapse(&["trace", "--format", "csv", "--steps", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,i\n0.0,0\n"));
    assert_eq!(text.lines().count(), 1 + 5);
}

#[test]
fn lattice_state_csv() {
    let out = collapse(&["lattice", "--edges", "2,2,1", "--values", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,re,im\n0,0.25,0.0\n"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["zeno", "--unknown-flag"][..],
        &["nosuchcommand"],
        &["lattice"],
        &["nonlocal", "--preset", "zeno-paper"],
        &["zeno", "--x", "abc"],
        &["lattice", "--edges", "2,2", "--values", "2"],
    ] {
        let out = collapse(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = collapse(&["lattice", "--values", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("edges"));
}

#[test]
fn domain_errors_exit_1_with_json() {
    for (args, kind) in [
        (&["zeno", "--x", "-1"][..], "validation"),
        (&["zeno", "--z", "3"], "validation"),
        (
            &[
                "lattice", "--edges", "3,1,1", "--values", "2", "--rule", "zero", "--steps", "1",
            ],
            "non_unitary_rule",
        ),
        (&["selection", "--trials", "0"], "validation"),
        (&["trace", "--times", "1,0.5"], "validation"),
    ] {
        let out = collapse(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
        assert_eq!(err["error"]["kind"], kind, "{args:?}");
        assert!(err["error"]["message"].is_string());
    }
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.json");
    let out = collapse(&["zeno", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = collapse(&["synapse", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), collapse(&["synapse"]).stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"command": "zeno", "seed": 9, "params": {"x": 0.5, "y": 0.5, "z": 0.25}, "output_format": "json"}"#,
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let v = json(&collapse(&["zeno", "--config", cfg]));
    assert_eq!(v["params"]["x"], 0.5);
    assert_eq!(v["seed"], 9);
    let v = json(&collapse(&["zeno", "--config", cfg, "--x", "1", "--seed", "2"]));
    assert_eq!(v["params"]["x"], 1.0);
    assert_eq!(v["params"]["y"], 0.5);
    assert_eq!(v["seed"], 2);

    let out = collapse(&["synapse", "--config", cfg]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&path, r#"{"params": {"x": 1, "typo": 2}}"#).unwrap();
    let out = collapse(&["zeno", "--config", cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("typo"));
}

#[test]
fn preset_then_flags() {
    let v = json(&collapse(&[
        "nonlocal",
        "--preset",
        "singlet-chsh",
        "--visibility",
        "0.7071067811865476",
    ]));
    assert_eq!(v["result"]["status"], "boundary");
    assert_eq!(v["result"]["locally_explainable"], true);
}

#[test]
fn seeded_runs_repeat_and_seeds_differ() {
    let a = collapse(&["trace", "--steps", "30", "--seed", "5"]).stdout;
    let b = collapse(&["trace", "--steps", "30", "--seed", "5"]).stdout;
    let c = collapse(&["trace", "--steps", "30", "--seed", "6"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}
