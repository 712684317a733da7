use std::path::PathBuf;
use std::process::{Command, Output};

use lorentz_harmonics::cli::sci;
use lorentz_harmonics::grouprep::zfn;
use lorentz_harmonics::numkit::HalfInt;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorentz-harmonics")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eval_prints_library_value() {
    let o = bin(&["eval", "zfn", "-l", "1/2", "-m", "1/2", "-n", "1/2", "--theta", "1.0", "--tau", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = zfn(HalfInt::HALF, HalfInt::HALF, HalfInt::HALF, 1.0, 0.5).unwrap();
    assert_eq!(stdout(&o).trim(), format!("{} {}", sci(v.re), sci(v.im)));
    let o = bin(&["eval", "zfn", "-l", "0", "-m", "0", "-n", "0", "--theta", "0.3", "--tau", "0.1", "--json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["re"], 1.0);
    assert_eq!(j["im"], 0.0);
}

#[test]
fn usage_errors_exit_two() {
    let o = bin(&["eval", "zfn", "-l", "2/3", "-m", "0", "-n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parity"));
    assert_eq!(bin(&["eval", "zfn", "-l", "1", "-m", "0", "-n", "0", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["eval", "zfn", "-l", "1", "-m", "2", "-n", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["solve", "maxwell", "-l", "1/2", "-n", "1/2"]).status.code(), Some(2));
}

#[test]
fn check_exit_status_follows_results() {
    let o = bin(&["check", "commutators"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count() >= 28);
    let o = bin(&["check", "casimir", "-l", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bin(&["check", "lambda", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["pass"], false);
    assert!(j["checks"].as_array().unwrap().iter().any(|c| c["status"] == "Fail"));
}

#[test]
fn solve_writes_one_row_per_grid_point() {
    let path = scratch("d.csv");
    let args = [
        "solve", "dirac", "-l", "1/2", "-n", "1/2", "--mass", "1.0", "--rmin", "0.5", "--rmax", "5", "--steps", "512",
        "--out",
    ];
    let o = bin(&[&args[..], &[path.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert_eq!(text.lines().count(), 513);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 1 + 2 * 4 + 2 * 4);
    bin(&[&args[..], &[path.to_str().unwrap()]].concat());
    assert_eq!(std::fs::read(&path).unwrap(), first);
    std::fs::remove_dir_all(path.parent().unwrap()).unwrap();
}

#[test]
fn weyl_output_equals_massless_dirac() {
    let common = ["-l", "1/2", "-n", "-1/2", "--steps", "64", "--theta", "1.2", "--tau", "0.3"];
    let w = bin(&[&["solve", "weyl"][..], &common[..]].concat());
    let d = bin(&[&["solve", "dirac", "--mass", "0"][..], &common[..]].concat());
    assert_eq!(w.status.code(), Some(0));
    assert_eq!(w.stdout, d.stdout);
}

#[test]
fn maxwell_emits_six_components() {
    let o = bin(&["solve", "maxwell", "-l", "1", "-n", "0", "--steps", "32", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["labels"].as_array().unwrap().len(), 6);
    assert_eq!(j["psi"].as_array().unwrap().len(), 32);
}

#[test]
fn report_lists_every_truncation() {
    let o = bin(&["report", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = j.as_array().unwrap();
    for k in [4, 8, 16] {
        assert!(rows.iter().any(|r| r["kmax"] == k));
    }
}
