mod common;

use std::process::{Command, Output};

const HEADER: &str = "t,r,k,value,error_estimate,tail_bound,evaluations";

fn hypheat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypheat"))
        .args(args)
        .output()
        .unwrap()
}

fn rows(out: &Output) -> Vec<Vec<f64>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect()
}

#[test]
fn grid_half_weight_rows_match_linear_factor_oracle() {
    let out = hypheat(&[
        "grid",
        "--t-range",
        "0.5:4:3",
        "--r-range",
        "0.2:2:3",
        "--k",
        "0,0.5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().next(), Some(HEADER));
    assert!(text.is_ascii() && !text.contains('\r'));
    let rows = rows(&out);
    assert_eq!(rows.len(), 18);
    for row in rows.iter().filter(|r| r[2] == 0.5) {
        let oracle = common::naive_kernel(row[0], row[1], 0.5, |x, _| 2.0 * x);
        assert!(
            (row[3] - oracle).abs() <= 1e-6 * oracle,
            "{row:?} vs {oracle}"
        );
    }
}

#[test]
fn grid_json_lines_carry_the_csv_fields() {
    let out = hypheat(&[
        "grid",
        "--t-range",
        "1:2:2",
        "--r-range",
        "0:1:2",
        "--k",
        "-1.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let records: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 4);
    for rec in &records {
        for field in HEADER.split(',') {
            assert!(rec.get(field).is_some(), "missing {field}");
        }
        assert_eq!(rec["k"].as_f64(), Some(-1.5));
        assert!(rec["evaluations"].is_u64());
    }
}

#[test]
fn grid_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("hypheat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.csv");
    let p = path.to_str().unwrap();
    let out = hypheat(&[
        "grid",
        "--t-range",
        "1:1:1",
        "--r-range",
        "0:1:2",
        "--k",
        "0",
        "--out",
        p,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn grid_failure_truncates_output() {
    let out = hypheat(&[
        "grid",
        "--t-range",
        "200:200:1",
        "--r-range",
        "0:1:2",
        "--k",
        "0,50",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let rows = rows(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[2] == 0.0));
}

#[test]
fn printed_numbers_round_trip() {
    let out = hypheat(&[
        "eval",
        "--t",
        "0.7",
        "--r",
        "1.3",
        "--k",
        "0.3",
        "--format",
        "csv",
        "--rel-tol",
        "1e-12",
    ]);
    let row = &rows(&out)[0];
    assert_eq!(row[0], 0.7);
    assert_eq!(row[1], 1.3);
    assert_eq!(row[2], 0.3);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = text.lines().nth(1).unwrap().split(',').nth(3).unwrap();
    let mantissa = value.split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
}

#[test]
fn eval_from_points_matches_distance() {
    let a = hypheat(&["eval", "--t", "1", "--z", "0,1", "--w", "0,2", "--k", "0.5"]);
    let b = hypheat(&[
        "eval",
        "--t",
        "1",
        "--r",
        "0.6931471805599453",
        "--k",
        "0.5",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["eval", "--t", "0", "--r", "1", "--k", "0"][..],
        &["eval", "--t", "1", "--r", "1"],
        &["eval", "--t", "1", "--z", "0,1", "--k", "0"],
        &["eval", "--t", "1", "--z", "0,-1", "--w", "0,1", "--k", "0"],
        &[
            "grid",
            "--t-range",
            "0:1:3",
            "--r-range",
            "0:1:2",
            "--k",
            "0",
        ],
        &[
            "grid",
            "--t-range",
            "1:2:3",
            "--r-range",
            "0:1:2",
            "--k",
            "0,x",
        ],
        &["check", "--suite", "nosuch"],
        &[],
    ] {
        let out = hypheat(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn check_tcheb_passes() {
    let out = hypheat(&["check", "--suite", "tcheb"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 6);
    assert!(text.lines().all(|l| l.starts_with("SUITE tcheb.")
        && l.contains(" PASS worst=")
        && l.contains(" at=")));
}
