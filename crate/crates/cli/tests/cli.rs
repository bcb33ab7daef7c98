use std::path::PathBuf;
use std::process::{Command, Output};

fn liekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liekit")).args(args).env_remove("LIEKIT_SEED").output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name).display().to_string()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("liekit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn largest_k_of_s6() {
    let o = liekit(&["pi", "largest-k", "-f", "s(6)", "--kmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn cyclic_reduce_of_a_commutator() {
    let o = liekit(&["poly", "cyclic-reduce", "x1*x2 - x2*x1"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn classify_range_of_pi2() {
    let o = liekit(&["classify-range", "-f", "pi(2)", "--blocks", "1,2,3"]);
    let out = stdout(&o);
    assert!(out.contains("predicted dim 11") && out.contains("sampled dim 11") && out.contains("PASS"), "{out}");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_output_is_byte_identical() {
    let args = ["--json", "--seed", "5", "spans", "nilpotent", "--order", "2", "--blocks", "1,2,3"];
    let (a, b) = (liekit(&args), liekit(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["sampled_dim"], 11);
}

#[test]
fn seed_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_liekit"))
        .args(["--json", "verify", "suite", "--filter", "inv_center"])
        .env("LIEKIT_SEED", "7")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["failed"], 0);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(liekit(&["bogus"]).status.code(), Some(2));
    assert_eq!(liekit(&["poly", "print", "x1 +"]).status.code(), Some(2));
    let bad = scratch("bad.json", "{\"n\": 2}");
    assert_eq!(liekit(&["decomp", "idempotent", &bad]).status.code(), Some(2));
    assert_eq!(liekit(&["pi", "test", "-f", "s(8)", "-k", "4", "--exact"]).status.code(), Some(2));
    assert_eq!(liekit(&["verify", "suite", "--filter", "no-such-case"]).status.code(), Some(2));
}

#[test]
fn divisibility_certificate_from_fixture() {
    let a = scratch("a.json", "{\"n\": 2, \"entries\": [[1,0],[2,-1],[0,3],[-4,0.5]]}");
    let o = liekit(&["--json", "decomp", "divisibility", &a, "--witness", &fixture("witness_m2.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verification"]["valid"], true);
}

#[test]
fn failed_check_exits_1() {
    let e = scratch("e.json", "{\"n\": 2, \"entries\": [[1,0],[0.7,0.3],[0,0],[0,0]]}");
    assert_eq!(liekit(&["decomp", "idempotent", &e]).status.code(), Some(0));
    assert_eq!(liekit(&["--tol", "1e-300", "decomp", "idempotent", &e]).status.code(), Some(1));
}

#[test]
fn lie_closure_of_a_matrix_unit() {
    let unit = "{\"algebra\": [2], \"basis\": [{\"blocks\": [{\"n\": 2, \"entries\": [[\"0\",\"0\"],[\"1\",\"0\"],[\"0\",\"0\"],[\"0\",\"0\"]]}]}]}";
    let f = scratch("u.json", unit);
    let o = liekit(&["lie", "closure", &f]);
    assert_eq!(stdout(&o).trim(), "dim 3 (Traceless)");
    assert_eq!(stdout(&liekit(&["lie", "is-ideal", &f])).trim(), "false");
    assert_eq!(liekit(&["lie", "sim-invariance", &f]).status.code(), Some(0));
}

#[test]
fn pi_test_reports_witness() {
    let o = liekit(&["--json", "pi", "test", "-f", "[x1,x2]", "-k", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["is_identity"], false);
    assert_eq!(v["method"], "exact");
    assert!(v["witness"]["values"]["x1"].is_object());
}
