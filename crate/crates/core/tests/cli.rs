use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mmdweak"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

#[test]
fn list_has_one_row_per_preset() {
    let out = bin().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.contains("flaw_counterexample  → §3.1"));
    assert!(text.contains("center_invariance    → Cor. 8"));
}

#[test]
fn flaw_preset_succeeds_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "run",
            "--preset",
            "flaw_counterexample",
            "--nmax",
            "64",
            "--out",
            "res",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = fs::read_to_string(dir.path().join("res/flaw_counterexample.summary")).unwrap();
    for line in [
        "preset=flaw_counterexample",
        "paper_ref=§3.1",
        "verdict.mmd_converges=true",
        "verdict.weak_converges=false",
        "status=ok",
    ] {
        assert!(summary.lines().any(|l| l == line), "missing {line}");
    }
    assert!(summary.lines().any(|l| l.starts_with("wall_time_ms=")));
    assert!(summary.lines().any(|l| l.starts_with("rule=")));
    assert!(summary.lines().any(|l| l.starts_with("thresholds.mmd=")));
    let csv = fs::read_to_string(dir.path().join("res/flaw_counterexample.csv")).unwrap();
    assert!(csv.starts_with("n,mmd,f_1,"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 65);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("exp.toml"),
        "preset = \"shift_invariance\"\nn_max = 64\ntrials = 5\nout = \"from_file\"\n\n[kernel]\nfamily = \"laplacian\"\ngamma = 0.5\ndim = 2\n",
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "run",
            "--config",
            "exp.toml",
            "--preset",
            "metrize_demo",
            "--out",
            "o",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("o/metrize_demo.csv").exists());
    assert!(!dir.path().join("from_file").exists());
    let summary = fs::read_to_string(dir.path().join("o/metrize_demo.summary")).unwrap();
    assert!(summary.contains("\"family\":\"laplacian\""));
    assert!(summary.contains("\ndim=2\n"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--preset", "metrize_demo", "--nmax", "1"],
        vec!["run", "--preset", "no_such_preset"],
        vec!["run"],
        vec!["run", "--config", "missing.toml"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = run_in(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    fs::write(
        dir.path().join("bad.toml"),
        "preset = \"prop6_witness\"\n[field]\ng = \"one_minus_gaussian\"\nxi = [0.0]\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["run", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("C0"));
}

#[test]
fn verdict_mismatch_exits_1_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    // two indices cannot bring the MMD below 1e-9
    fs::write(
        dir.path().join("strict.toml"),
        "preset = \"metrize_demo\"\nn_max = 2\n[thresholds]\nmmd = 1e-9\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["run", "--config", "strict.toml"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("mmd_converges: expected true actual false"),
        "{err}"
    );
    let summary = fs::read_to_string(dir.path().join("out/metrize_demo.summary")).unwrap();
    assert!(summary.contains("status=mismatch"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for preset in ["escape_demo", "compact_regime", "center_invariance"] {
        let a = run_in(
            dir.path(),
            &[
                "run", "--preset", preset, "--seed", "9", "--nmax", "24", "--out", "a",
            ],
        );
        let b = run_in(
            dir.path(),
            &[
                "run", "--preset", preset, "--seed", "9", "--nmax", "24", "--out", "b",
            ],
        );
        assert!(a.status.success() && b.status.success());
        let file = format!("{preset}.csv");
        assert_eq!(
            fs::read(dir.path().join("a").join(&file)).unwrap(),
            fs::read(dir.path().join("b").join(&file)).unwrap(),
            "{preset}"
        );
    }
}
