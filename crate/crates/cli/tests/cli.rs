use std::path::Path;
use std::process::{Command, Output};

fn pkme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pkme"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn structures_for_four_qubits() {
    let out = pkme(&["structures", "--n", "4", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(lines, ["A: {1},{3} B: {2},{4}", "A: {2},{4} B: {1},{3}"]);
}

#[test]
fn structures_from_explicit_sizes() {
    let out = pkme(&["structures", "--n", "7", "--a-sizes", "2,1", "--b-sizes", "2,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 7);
    let out = pkme(&["structures", "--n", "6", "--k", "1", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 12);
}

#[test]
fn seven_qubit_state_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.dat");
    let out = pkme(&["construct", "--family", "pkme7", "-o", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = pkme(&["verify", "--mode", "pkme", "--k", "2", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: PASS"));
    let out = pkme(&["verify", "--mode", "ame", path_str(&file)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ghz_fails_with_half_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ghz.dat");
    let out = pkme(&["construct", "--family", "ghz", "--n", "4", "--d", "2", "-o", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let out = pkme(&["verify", "--mode", "pkme", "--k", "1", path_str(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("deviation=5.000000e-1"));

    let out = pkme(&["verify", "--mode", "pkme", "--k", "1", "--format", "json", path_str(&file)]);
    assert_eq!(out.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["verdict"], false);
    let worst = doc["worst"]["deviation"].as_f64().unwrap();
    assert!((worst - 0.5).abs() <= 1e-12);
    assert_eq!(doc["worst"]["subset"], serde_json::json!([1, 3]));
}

#[test]
fn classify_prints_verdict_map() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ame5.dat");
    pkme(&["construct", "--family", "ame5", "-o", path_str(&file)]);
    let out = pkme(&["classify", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("AME: true"));
    assert!(text.contains("PME: true"));
    assert!(text.contains("PKME(k=1): true"));
    let out = pkme(&["classify", "--format", "json", path_str(&file)]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["implications_hold"], true);
}

#[test]
fn seeded_runs_are_bit_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    for (name, seed) in [("a", "17"), ("b", "17"), ("c", "18")] {
        let file = dir.path().join(name);
        let out = pkme(&["construct", "--family", "family-double-prime", "--seed", seed, "-o", path_str(&file)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(read("a"), read("b"));
    assert_ne!(read("a"), read("c"));

    for (name, seed) in [("p1", "3"), ("p2", "3")] {
        let file = dir.path().join(name);
        let out = pkme(&["pipeline", "--name", "even_4k(2)", "--d", "3", "--seed", seed, "-o", path_str(&file)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(read("p1"), read("p2"));
}

#[test]
fn apply_keeps_pkme() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let input = dir.path().join("in.dat");
    let output = dir.path().join("out.dat");
    pkme(&["pipeline", "--name", "even_4k:2", "--d", "2", "--seed", "9", "-o", path_str(&p)]);
    pkme(&["construct", "--family", "pkme4k", "--k", "2", "--d", "2", "-o", path_str(&input)]);
    let out = pkme(&["apply", "--pipeline", path_str(&p), "-i", path_str(&input), "-o", path_str(&output)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_ne!(std::fs::read(&input).unwrap(), std::fs::read(&output).unwrap());
    let out = pkme(&["verify", "--mode", "pkme", "--k", "2", path_str(&output)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn errors_exit_one_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();

    let out = pkme(&["verify", "--mode", "pkme", "--k", "1", "/nonexistent/state.dat"]);
    assert_eq!(out.status.code(), Some(1));

    let bad = dir.path().join("bad.dat");
    std::fs::write(&bad, r#"{"version": 1, "n": 2, "d": 2, "amplitudes": [[1,0],[0,0],[0,0]]}"#).unwrap();
    let out = pkme(&["verify", "--mode", "pme", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("shape mismatch"));

    let half = dir.path().join("half.dat");
    std::fs::write(&half, r#"{"version": 1, "n": 1, "d": 2, "amplitudes": [[0.5,0],[0,0]]}"#).unwrap();
    let out = pkme(&["classify", path_str(&half)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("norm 0.5"));

    let out = pkme(&["structures", "--n", "4", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("would be empty"));

    let out = pkme(&["construct", "--family", "pkme4k", "-o", path_str(&dir.path().join("x"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--k"));

    assert_eq!(pkme(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(pkme(&["verify", "--mode", "xyz", path_str(&bad)]).status.code(), Some(1));
    assert_eq!(pkme(&["--help"]).status.code(), Some(0));
}

#[test]
fn ame_budget_is_an_error_not_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.dat");
    pkme(&["construct", "--family", "ghz", "--n", "6", "--d", "2", "-o", path_str(&file)]);
    let out = pkme(&["verify", "--mode", "ame", "--ame-budget", "5", path_str(&file)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("budget"));
}
