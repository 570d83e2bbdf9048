use std::path::Path;
use std::process::{Command, Output};

use mrlrc::artifact::{CodeArtifact, ReportArtifact};
use tempfile::TempDir;

fn mrlrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrlrc")).args(args).env_remove("MRLRC_CAP").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn build(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let path = dir.path().join(name);
    let path = path.to_str().unwrap().to_string();
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", &path]);
    let out = mrlrc(&full);
    assert!(out.status.success(), "{}", stderr(&out));
    path
}

fn read_artifact(path: &str) -> CodeArtifact {
    CodeArtifact::parse(&std::fs::read_to_string(path).unwrap(), false).unwrap()
}

#[test]
fn construct_reports_field_size() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    let out = mrlrc(&[
        "construct", "-n", "8", "-r", "4", "-h", "2", "-a", "1", "--route", "manual", "--q", "4", "--m", "3", "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("4^6"), "{}", stderr(&out));
    let art = read_artifact(path.to_str().unwrap());
    assert_eq!(art.params.q, 4);
    assert_eq!(art.extension_modulus.split(',').count(), 7);
    assert_eq!(art.matrix.len(), 4);
}

#[test]
fn construct_to_stdout_is_deterministic() {
    let args = ["construct", "-n", "9", "-r", "3", "-h", "2", "-a", "1"];
    let a = mrlrc(&args);
    let b = mrlrc(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    CodeArtifact::parse(&stdout(&a), false).unwrap();
}

#[test]
fn locals_only_code() {
    let dir = TempDir::new().unwrap();
    let path = build(&dir, "l.json", &["-n", "8", "-r", "4", "-h", "0", "-a", "1"]);
    let art = read_artifact(&path);
    assert_eq!(art.matrix.len(), 2);
    assert!(art.coprime.is_none());
    assert_eq!(mrlrc(&["verify", &path]).status.code(), Some(0));
}

#[test]
fn invalid_shape_is_an_error() {
    let out = mrlrc(&["construct", "-n", "9", "-r", "4", "-h", "1", "-a", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("multiple"));
    let out = mrlrc(&["construct", "-n", "8", "-r", "4", "-h", "1", "-a", "1", "--route", "nope"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_passes_and_writes_report() {
    let dir = TempDir::new().unwrap();
    let path = build(&dir, "c.json", &["-n", "8", "-r", "4", "-h", "2", "-a", "1"]);
    let report = dir.path().join("r.json");
    let out = mrlrc(&["verify", &path, "--jobs", "2", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("PASS 240/240"));
    let rep = ReportArtifact::parse(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(rep.passed);
    assert_eq!(rep.code_digest, read_artifact(&path).digest);

    let out = mrlrc(&["verify", &path, "--mode", "sampled", "--samples", "50", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("50/50"));
}

#[test]
fn generator_form_verifies() {
    let dir = TempDir::new().unwrap();
    let path = build(&dir, "g.json", &["-n", "8", "-r", "4", "-h", "1", "-a", "1", "--form", "generator"]);
    assert_eq!(mrlrc(&["verify", &path]).status.code(), Some(0));
    let out = mrlrc(&["encode", &path, "--random"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tampered_artifact() {
    let dir = TempDir::new().unwrap();
    let path = build(&dir, "c.json", &["-n", "8", "-r", "4", "-h", "2", "-a", "1"]);
    let mut art = read_artifact(&path);
    // duplicate a heavy column into the neighbouring one
    for row in 2..4 {
        art.matrix[row][1] = art.matrix[row][0].clone();
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, art.render()).unwrap();
    let bad = bad.to_str().unwrap();
    let out = mrlrc(&["verify", bad]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("digest"));
    let out = mrlrc(&["verify", bad, "--force"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("witness: "));
}

#[test]
fn cap_exceeded_exit_code() {
    let dir = TempDir::new().unwrap();
    let path = build(&dir, "c.json", &["-n", "12", "-r", "4", "-h", "2", "-a", "1"]);
    assert_eq!(mrlrc(&["verify", &path, "--cap", "10"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_mrlrc")).args(["verify", &path]).env("MRLRC_CAP", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_decode_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = build(&dir, "c.json", &["-n", "8", "-r", "4", "-h", "2", "-a", "1"]);
    let out = mrlrc(&["encode", &path, "--random", "--seed", "9"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let word = stdout(&out).trim().to_string();
    let mut symbols: Vec<String> = word.split(',').map(String::from).collect();
    assert_eq!(symbols.len(), 8);
    // one per group plus two heavy erasures in group 0
    for p in [0, 1, 2, 5] {
        symbols[p] = "?".into();
    }
    let received = symbols.join(",");
    let out = mrlrc(&["decode", &path, "--word", &received, "--erasures", "0:0,0:1,0:2,1:1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), word);

    let out = mrlrc(&["decode", &path, "--word", &received, "--erasures", "0:0,0:1,0:2,0:3,1:1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn explicit_message_encoding() {
    let dir = TempDir::new().unwrap();
    let path = build(&dir, "c.json", &["-n", "8", "-r", "4", "-h", "2", "-a", "1"]);
    let out = mrlrc(&["encode", &path, "--message", "0,0,0,0"]);
    assert_eq!(stdout(&out).trim(), "0,0,0,0,0,0,0,0");
    let out = mrlrc(&["encode", &path, "--message", "1,2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_csv_and_text() {
    let out = mrlrc(&["bounds", "-n", "4096", "-r", "64", "-h", "4", "-a", "1", "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("label,kind,applicable"));
    assert!(text.lines().any(|l| l.starts_with("prior-max-power,")));
    assert!(text.lines().any(|l| l.starts_with("exact:parity-bch,exact,true")));
    let out = mrlrc(&["bounds", "-n", "64", "-r", "8", "-h", "2", "-a", "1", "--claims"]);
    assert!(stdout(&out).contains("binary-crossover"));
    assert!(stdout(&out).contains("0 refuted"));
}

#[test]
fn help_flag_is_long_only() {
    let out = mrlrc(&["construct", "--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Heavy parities"));
    assert!(Path::new(env!("CARGO_BIN_EXE_mrlrc")).exists());
}

#[test]
fn selftest_passes() {
    let out = mrlrc(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 10);
}
