use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hypertoric")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn fixture(name: &str) -> String {
    format!("{}/../hypertoric/fixtures/{}.json", env!("CARGO_MANIFEST_DIR"), name)
}

#[test]
fn selftest_passes() {
    let (code, out) = run(&["selftest"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn qde_check_on_tp1() {
    let (code, out) = run(&["qde-check", "--data", &fixture("tp1"), "--degree", "8"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn malformed_json_is_a_data_error() {
    let dir = std::env::temp_dir().join("hypertoric-cli-test-bad.json");
    std::fs::write(&dir, "{\"iota\": [[1],").unwrap();
    let (code, out) = run(&["describe", "--data", dir.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.contains("parse error"), "{out}");
    let (code, _) = run(&["describe", "--data", "/nonexistent/file.json"]);
    assert_eq!(code, 3);
}

#[test]
fn non_unimodular_is_a_data_error() {
    let dir = std::env::temp_dir().join("hypertoric-cli-test-nonunimodular.json");
    std::fs::write(&dir, r#"{"iota": [[1],[1],[2]]}"#).unwrap();
    let (code, _) = run(&["describe", "--data", dir.to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["vertex", "--data", "tp1"]).0, 2);
    assert_eq!(run(&["qde-check", "--data", "tp1", "--degree", "many"]).0, 2);
}

#[test]
fn failed_check_exits_one() {
    // degree 0 leaves the whole series as error with no measured tail
    let (code, out) = run(&["mirror-check", "--data", "tp1", "--degree", "0"]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn reports_are_deterministic() {
    for args in [vec!["stab-check", "--data", "tp2", "--seed", "3"], vec!["ring", "--data", "tp1xtp1", "--quantum"], vec!["mirror-check", "--data", "tp1"]] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a, b);
        assert_eq!(a.0, 0, "{}", a.1);
    }
}

#[test]
fn params_override() {
    let dir = std::env::temp_dir().join("hypertoric-cli-test-params.json");
    std::fs::write(&dir, r#"{"s": 0.05, "t": 0.05, "q": [0.25, 0.05]}"#).unwrap();
    let (code, out) = run(&["mirror-check", "--data", "tp1", "--params", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    std::fs::write(&dir, r#"{"q": [1.5, 0.0]}"#).unwrap();
    assert_eq!(run(&["mirror-check", "--data", "tp1", "--params", dir.to_str().unwrap()]).0, 3);
    let (code, out) = run(&["mirror-check", "--data", "tp1", "--params", r#"{"s": 0.05, "t": 0.05}"#]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn text_format_and_subcommands() {
    let (code, out) = run(&["vertices", "--data", "tp1", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("fixed_point: {1}") && out.contains("restrictions: [\"a1*a2^-1\",\"1\"]"), "{out}");
    let (code, out) = run(&["circuits", "--data", "tp2"]);
    assert_eq!(code, 0);
    assert!(out.contains("cocircuits"));
    let (code, out) = run(&["stab", "--data", "tp1", "--fixed-point", "{1}", "--restrict", "{2}"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["vertex", "--data", "tp1", "--fixed-point", "1", "--degree", "1", "--tau", "x1"]);
    assert_eq!(code, 0);
    assert!(out.contains("a1/a2"), "{out}");
    assert_eq!(run(&["vertex", "--data", "tp1", "--fixed-point", "{1,2}"]).0, 3);
}
