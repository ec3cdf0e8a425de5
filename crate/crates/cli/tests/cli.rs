use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_perturbed"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const C5: &str = "5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n";
const PETERSEN: &str =
    "10 15\n0 1\n0 4\n0 5\n1 2\n1 6\n2 3\n2 7\n3 4\n3 8\n4 9\n5 7\n5 8\n6 8\n6 9\n7 9\n";

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c5.graph"), C5).unwrap();
    fs::write(dir.path().join("petersen.graph"), PETERSEN).unwrap();
    let o = run(
        dir.path(),
        &["check", "--property", "hamiltonian", "--in", "c5.graph"],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("yes"));
    let mut cycle: Vec<usize> = lines
        .next()
        .unwrap()
        .split(' ')
        .map(|t| t.parse().unwrap())
        .collect();
    cycle.sort_unstable();
    assert_eq!(cycle, vec![0, 1, 2, 3, 4]);
    let o = run(
        dir.path(),
        &[
            "check",
            "--property",
            "hamiltonian",
            "--in",
            "petersen.graph",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no\n");
}

#[test]
fn generate_then_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "generate",
            "--family",
            "TwoCliques",
            "--n",
            "9",
            "--out",
            "g.graph",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        dir.path(),
        &["check", "--property", "alpha", "--in", "g.graph"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("2"));
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "generate",
        "--family",
        "CliqueForest",
        "--n",
        "30",
        "--d",
        "4",
        "--k",
        "3",
    ];
    let first = stdout(&run(dir.path(), &args));
    let g = perturbed::Graph::parse(&first).unwrap();
    assert_eq!(g.to_text(), first);
    assert_eq!(stdout(&run(dir.path(), &args)), first);
}

#[test]
fn usage_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["check", "--property", "bogus", "--in", "x"],
        vec!["check", "--property", "alpha", "--in", "missing.graph"],
        vec!["generate", "--family", "TwoCliques", "--n", "9", "--k", "2"],
        vec!["frobnicate"],
        vec!["perturb", "--in", "x", "--p", "1.5"],
        vec![
            "generate",
            "--family",
            "TwoCliques",
            "--n",
            "9",
            "--format",
            "csv",
        ],
    ] {
        let o = run(dir.path(), &args);
        assert_eq!(o.status.code(), Some(64), "{args:?}");
    }
}

#[test]
fn capacity_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "generate",
            "--family",
            "TwoCliques",
            "--n",
            "300",
            "--out",
            "big.graph",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        dir.path(),
        &["check", "--property", "hamiltonian", "--in", "big.graph"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn perturb_honours_seed() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate",
            "--family",
            "TwoCliques",
            "--n",
            "20",
            "--out",
            "g.graph",
        ],
    );
    let a = stdout(&run(
        dir.path(),
        &[
            "perturb", "--in", "g.graph", "--p", "1/20", "--seed", "0x2a",
        ],
    ));
    let b = stdout(&run(
        dir.path(),
        &["perturb", "--in", "g.graph", "--p", "0.05", "--seed", "42"],
    ));
    let c = stdout(&run(
        dir.path(),
        &["perturb", "--in", "g.graph", "--p", "0.05", "--seed", "43"],
    ));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let union = perturbed::Graph::parse(&a).unwrap();
    assert!(union.m() >= 90);
}

#[test]
fn construct_emits_verified_cycle() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--family", "MCliques", "--n", "60", "--m", "3", "--out", "g.graph",
        ],
    );
    let o = run(
        dir.path(),
        &[
            "construct",
            "--pipeline",
            "thm1",
            "--graph",
            "g.graph",
            "--p",
            "0.02",
            "--seed",
            "11",
            "--trace",
            "t.json",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    assert!(out.starts_with("success 60\n"));
    let trace: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(trace["outcome"]["status"], "success");
}

#[test]
fn decompose_and_link() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--family", "MCliques", "--n", "30", "--m", "3", "--out", "g.graph",
        ],
    );
    let o = run(
        dir.path(),
        &[
            "decompose",
            "--method",
            "bfkm",
            "--in",
            "g.graph",
            "--format",
            "json",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["blocks"].as_array().unwrap().len(), 3);
    let o = run(
        dir.path(),
        &["decompose", "--method", "lemma29", "--in", "g.graph"],
    );
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        dir.path(),
        &[
            "generate",
            "--family",
            "MCliques",
            "--n",
            "10",
            "--m",
            "1",
            "--out",
            "k10.graph",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        dir.path(),
        &[
            "link",
            "--in",
            "k10.graph",
            "--pairs",
            "0:1,2:3",
            "--spanning",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let covered: usize = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(' ').count())
        .sum();
    assert_eq!(covered, 10);
    let o = run(
        dir.path(),
        &["link", "--in", "k10.graph", "--pairs", "0:1,2"],
    );
    assert_eq!(o.status.code(), Some(64));
}

const SWEEP: &str = r#"{
    "family": {"kind": "TwoCliques", "n": 20},
    "property": {"kind": "connected"},
    "p_grid": [0.001, 0.005, 0.02],
    "trials": 200,
    "base_seed": 9
}"#;

#[test]
fn sweep_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), SWEEP).unwrap();
    let a = run(
        dir.path(),
        &[
            "sweep",
            "--config",
            "cfg.json",
            "--out",
            "a",
            "--workers",
            "1",
        ],
    );
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let b = run(
        dir.path(),
        &[
            "sweep",
            "--config",
            "cfg.json",
            "--out",
            "b",
            "--workers",
            "3",
        ],
    );
    assert_eq!(b.status.code(), Some(0));
    for f in ["sweep.csv", "sweep.json"] {
        assert_eq!(
            fs::read(dir.path().join("a").join(f)).unwrap(),
            fs::read(dir.path().join("b").join(f)).unwrap()
        );
    }
    let csv = fs::read_to_string(dir.path().join("a/sweep.csv")).unwrap();
    assert!(csv.starts_with("p,trials,success,fail,indeterminate,estimate,wilson_lo,wilson_hi\n"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "sweep");
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    let c = run(
        dir.path(),
        &[
            "sweep", "--config", "cfg.json", "--out", "c", "--seed", "10",
        ],
    );
    assert_eq!(c.status.code(), Some(0));
    assert_ne!(
        fs::read(dir.path().join("a/sweep.csv")).unwrap(),
        fs::read(dir.path().join("c/sweep.csv")).unwrap()
    );
}

#[test]
fn threshold_and_scaling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SWEEP.replace(
        "[0.001, 0.005, 0.02]",
        "{\"min\": 0.0005, \"max\": 0.05, \"count\": 5, \"log\": true}",
    );
    fs::write(dir.path().join("cfg.json"), &cfg).unwrap();
    let o = run(
        dir.path(),
        &["threshold", "--config", "cfg.json", "--format", "json"],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p = v["p_star"].as_f64().unwrap();
    // (1-p)^100 = 1/2 at p = 0.00691.
    assert!(p > 0.0055 && p < 0.0085, "{p}");
    let o = run(
        dir.path(),
        &[
            "scaling", "--config", "cfg.json", "--axis", "n=20,40", "--format", "csv",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = run(
        dir.path(),
        &["scaling", "--config", "cfg.json", "--axis", "n"],
    );
    assert_eq!(o.status.code(), Some(64));
    fs::write(
        dir.path().join("narrow.json"),
        SWEEP.replace("[0.001, 0.005, 0.02]", "[0.2, 0.3]"),
    )
    .unwrap();
    let o = run(dir.path(), &["threshold", "--config", "narrow.json"]);
    assert_eq!(o.status.code(), Some(64));
}
