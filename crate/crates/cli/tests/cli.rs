//! End-to-end tests of the command line surface: JSON round trips,
//! deterministic output, and the exit code contract.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use dhecke::cohomology::{torus_group, CohRing};
use dhecke::root_datum::RootDatum;
use dhecke::satake::{satake_basis, ToralElementJson};
use dhecke::CoeffRing;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dhecke"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dhecke-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn rank_one_context() -> (RootDatum, CohRing) {
    let rd = RootDatum::catalog("PGL2").unwrap();
    let group = torus_group(&rd, 3, 1).unwrap();
    let ring = CohRing::new(group, CoeffRing::new(3, 1).unwrap()).unwrap();
    (rd, ring)
}

#[test]
fn multiply_matches_the_library_product() {
    let dir = scratch("multiply");
    let (rd, ring) = rank_one_context();
    let t = satake_basis(&rd, &ring, &[1], &ring.one()).unwrap();
    let tx = satake_basis(&rd, &ring, &[1], &ring.x(0)).unwrap();
    let left = dir.join("t.json");
    let right = dir.join("tx.json");
    fs::write(&left, serde_json::to_string(&t.to_json()).unwrap()).unwrap();
    fs::write(&right, serde_json::to_string(&tx.to_json()).unwrap()).unwrap();

    let out = run(&[
        "satake",
        "--group",
        "PGL2",
        "--q",
        "7",
        "--ell",
        "3",
        "--r",
        "1",
        "--left",
        left.to_str().unwrap(),
        "--right",
        right.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let got: ToralElementJson = serde_json::from_slice(&out.stdout).unwrap();
    let expected = t.multiply(&tx).unwrap().to_json();
    assert_eq!(
        serde_json::to_value(&got).unwrap(),
        serde_json::to_value(&expected).unwrap()
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = scratch("determinism");
    let (rd, ring) = rank_one_context();
    let t = satake_basis(&rd, &ring, &[1], &ring.one()).unwrap();
    let path = dir.join("t.json");
    fs::write(&path, serde_json::to_string(&t.to_json()).unwrap()).unwrap();

    let args = [
        "satake",
        "--left",
        path.to_str().unwrap(),
        "--right",
        path.to_str().unwrap(),
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn presentation_table_for_the_rank_one_datum() {
    let out = run(&[
        "satake",
        "--group",
        "PGL2",
        "--support",
        "3",
        "--max-degree",
        "2",
    ]);
    assert!(out.status.success());
    let table: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(table["ranks"][3], serde_json::json!([4, 3, 3]));
}

#[test]
fn malformed_json_exits_three_with_a_location() {
    let dir = scratch("badjson");
    let path = dir.join("broken.json");
    fs::write(&path, "{ \"support\": [ oops").unwrap();
    let out = run(&[
        "satake",
        "--left",
        path.to_str().unwrap(),
        "--right",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("line") && stderr.contains("column"),
        "{stderr}"
    );
}

#[test]
fn asymmetric_support_exits_three() {
    let dir = scratch("invariance");
    let (rd, ring) = rank_one_context();
    let t = satake_basis(&rd, &ring, &[1], &ring.one()).unwrap();
    let mut json = t.to_json();
    json.support.truncate(1);
    let path = dir.join("half.json");
    fs::write(&path, serde_json::to_string(&json).unwrap()).unwrap();
    let out = run(&[
        "satake",
        "--left",
        path.to_str().unwrap(),
        "--right",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn regime_violations_exit_two() {
    let out = run(&["satake", "--q", "5", "--support", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["satake", "--q", "9", "--support", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["satake", "--group", "E8", "--support", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["satake", "--r", "2", "--support", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_satake_oracle_passes() {
    let out = run(&[
        "verify",
        "--suite",
        "satake-oracle",
        "--q",
        "7",
        "--ell",
        "3",
        "--r",
        "1",
        "--depth",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["suite"], "satake-oracle");
    assert_eq!(report["checks_failed"], 0);
    assert!(report["checks_passed"].as_u64().unwrap() > 200);
}

#[test]
fn verify_koszul_reports_the_rank_table() {
    let out = run(&["verify", "--suite", "koszul", "--max-degree", "3"]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("[1, 3, 3, 1]"), "{stderr}");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checks_failed"], 0);
}

#[test]
fn verify_iwahori_handles_the_degenerate_character() {
    let out = run(&["verify", "--suite", "iwahori"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checks_failed"], 0);
}

#[test]
fn verify_unknown_suite_exits_two() {
    let out = run(&["verify", "--suite", "frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = scratch("outflag");
    let path = dir.join("report.json");
    let out = run(&[
        "verify",
        "--suite",
        "presentation",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["suite"], "presentation");
    assert_eq!(report["checks_failed"], 0);
}
