use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conic-nets"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn net_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

// X0^2, X1^2, X2^2
const DIAGONAL_NET: &str = "1 0 0 0 0 0\n0 0 0 1 0 0\n0 0 0 0 0 1\n";

#[test]
fn diagonal_net_at_five() {
    let file = net_file(DIAGONAL_NET);
    let out = run(&["classify-net", "--q", "5", file.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("orbit: Σ2"), "{text}");
    assert!(text.contains("point distribution: [3, 6, 6, 16]"), "{text}");
    assert!(text.contains("o5: 3"), "{text}");
}

#[test]
fn net_from_stdin_with_stabilizer_and_json() {
    let mut child = bin()
        .args(["classify-net", "--q", "3", "--stabilizer", "--json", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(DIAGONAL_NET.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["orbit"], "Σ2");
    // monomial matrices: 4 diagonal classes times 6 permutations
    assert_eq!(v["stabilizer_order"], 24);
}

#[test]
fn net_without_repeated_line_exits_three() {
    // X0X1, X0X2, X1X2
    let file = net_file("0 1 0 0 0 0\n0 0 1 0 0 0\n0 0 0 0 1 0\n");
    let out = run(&["classify-net", "--q", "5", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn even_or_bad_q_exits_two() {
    let file = net_file(DIAGONAL_NET);
    let path = file.path().to_str().unwrap();
    assert_eq!(run(&["classify-net", "--q", "4", path]).status.code(), Some(2));
    assert_eq!(run(&["classify-net", "--q", "6", path]).status.code(), Some(2));
    // x^2 - 1 is reducible
    assert_eq!(run(&["classify-net", "--q", "9", "--modulus", "2,0,1", path]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["classify-point", "--q", "5", "1,2,3"]).status.code(), Some(1));
}

#[test]
fn custom_modulus_gives_same_orbit() {
    let file = net_file(DIAGONAL_NET);
    let out = run(&["classify-net", "--q", "9", "--modulus", "1,0,1", file.path().to_str().unwrap()]);
    // x^2 + 1, irreducible since -1 is a non-square mod 3
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("orbit: Σ2"));
}

#[test]
fn verify_tables_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["verify-tables", "--q", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["reports"][0]["q"], 3);
    assert!(stdout(&out).contains("result: ok"));
}

#[test]
fn verify_tables_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &std::path::Path| {
        vec!["verify-tables".to_string(), "--q-list".into(), "3,5".into(), "--json".into(), p.display().to_string()]
    };
    assert!(bin().args(["--threads", "1"]).args(args(&a)).output().unwrap().status.success());
    assert!(bin().args(["--threads", "3"]).args(args(&b)).output().unwrap().status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn classify_line_and_point() {
    let file = net_file("1 0 0 0 0 0\n0 1 0 0 0 0\n");
    let out = run(&["classify-line", "--q", "7", file.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("orbit: o6"), "{}", stdout(&out));

    let out = run(&["classify-point", "--q", "7", "0,1,0,0,0,0"]);
    assert!(stdout(&out).contains("Rank2Exterior"), "{}", stdout(&out));
    let out = run(&["classify-point", "--q", "7", "--matrix", "1,0,0,1,0,0"]);
    // X0^2 + X1^2 at q = 7: -1 is a non-square
    assert!(stdout(&out).contains("Rank2Interior"), "{}", stdout(&out));
}

#[test]
fn stabilizer_and_reps_and_census() {
    let out = run(&["stabilizer", "--q", "3", "--orbit", "o5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("stabilizer order: 72 (expected 72)"), "{}", stdout(&out));

    let out = run(&["stabilizer", "--q", "17", "--orbit", "S1"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["reps", "--q", "9", "--orbit", "S14'"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Σ14′"));

    let out = run(&["census", "--q", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1 + 15);
}
