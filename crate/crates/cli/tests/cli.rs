use std::f64::consts::FRAC_PI_3;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use curvalign_core::io::read_distance_matrix;
use serde_json::Value;

fn curvalign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvalign"))
        .args(args)
        .env_remove("CURVALIGN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a single JSON document")
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = curvalign(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const PI_3: &str = "1.0471975511965976";

#[test]
fn aligning_a_curve_with_itself() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["limacon"]);
    let v = stdout_json(&curvalign(&["align", s(&a), s(&a), "--method", "fft"]));
    assert_eq!(v["shift"], 0);
    assert!(v["theta"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["energy"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn recovery_fixture_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let reference = gen(dir.path(), "ref.csv", &["limacon", "-N", "512"]);
    let template = gen(
        dir.path(),
        "templ.json",
        &["limacon", "-N", "512", "--shift", "0.25", "--rotate", PI_3],
    );
    let fft = stdout_json(&curvalign(&[
        "align",
        s(&reference),
        s(&template),
        "--method",
        "fft",
        "-N",
        "512",
    ]));
    let naive = stdout_json(&curvalign(&[
        "align",
        s(&reference),
        s(&template),
        "--method",
        "naive",
        "-N",
        "512",
    ]));
    assert!((fft["t0"].as_f64().unwrap() - 0.25).abs() <= 2.0 / 512.0);
    assert!((fft["theta"].as_f64().unwrap() - FRAC_PI_3).abs() <= 0.02);
    assert_eq!(fft["shift"], naive["shift"]);
    assert!((fft["theta"].as_f64().unwrap() - naive["theta"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn distance_of_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["bumps", "-N", "128"]);
    for approach in ["1", "2"] {
        let v = stdout_json(&curvalign(&[
            "distance",
            s(&a),
            s(&a),
            "--approach",
            approach,
            "-N",
            "128",
        ]));
        assert!(
            v["distance"].as_f64().unwrap() <= 1e-6,
            "approach {approach}"
        );
        assert_eq!(v["gamma"].as_array().unwrap().len(), 129);
    }
}

#[test]
fn warped_copy_is_at_near_zero_distance() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["limacon"]);
    let b = gen(
        dir.path(),
        "b.csv",
        &[
            "limacon", "--shift", "0.25", "--rotate", PI_3, "--warp", "gamma2",
        ],
    );
    let v = stdout_json(&curvalign(&[
        "distance",
        s(&a),
        s(&b),
        "--approach",
        "2",
        "-N",
        "256",
    ]));
    assert!(v["distance"].as_f64().unwrap() <= 0.005, "{v}");
    assert!((v["theta"].as_f64().unwrap() - FRAC_PI_3).abs() < 0.02);
    let out = curvalign(&[
        "distance",
        s(&a),
        s(&b),
        "--max-iters",
        "1",
        "--tol",
        "0",
        "--method",
        "naive",
    ]);
    assert_eq!(stdout_json(&out)["iterations"], 1);
}

#[test]
fn approach1_refuses_large_curves() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["circle", "-N", "600"]);
    let out = curvalign(&["distance", s(&a), s(&a), "--approach", "1", "-N", "600"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("approach 2"));
}

#[test]
fn matrix_of_identical_files_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["clover"]);
    let b = gen(dir.path(), "b.json", &["clover"]);
    let out = curvalign(&["matrix", s(&a), s(&b)]);
    assert!(out.status.success());
    let (ids, values) = read_distance_matrix(out.stdout.as_slice()).unwrap();
    assert_eq!(ids, ["a.csv", "b.json"]);
    assert!(values.iter().flatten().all(|v| v.abs() <= 1e-6));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a.csv vs b.json"));
}

#[test]
fn matrix_matches_the_frozen_family_fixture() {
    let fixture =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/family_matrix_n256.csv");
    let (ids, frozen) = read_distance_matrix(File::open(fixture).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    // a single directory argument is expanded in name order
    let mut files = Vec::new();
    for (k, family) in ids.iter().enumerate() {
        files.push(gen(
            dir.path(),
            &format!("{k}_{family}.csv"),
            &[family, "-N", "256"],
        ));
    }
    let out_path = dir.path().join("matrix.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_curvalign"))
        .args([
            "matrix",
            s(dir.path()),
            "--approach",
            "2",
            "-N",
            "256",
            "--out",
            s(&out_path),
        ])
        .env("CURVALIGN_THREADS", "2")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let (got_ids, values) = read_distance_matrix(File::open(&out_path).unwrap()).unwrap();
    assert_eq!(got_ids.len(), 5);
    for (i, row) in values.iter().enumerate() {
        assert!(row[i] <= 1e-6);
        for (v, f) in row.iter().zip(&frozen[i]) {
            assert!((v - f).abs() <= 1e-6, "{v} vs {f}");
        }
    }
    let json = Command::new(env!("CARGO_BIN_EXE_curvalign"))
        .args([
            "matrix",
            s(&files[0]),
            s(&files[1]),
            "--format",
            "json",
            "-N",
            "64",
        ])
        .output()
        .unwrap();
    let v = stdout_json(&json);
    assert_eq!(v["ids"].as_array().unwrap().len(), 2);
    assert_eq!(v["values"][0][0], 0.0);
}

#[test]
fn failed_pairs_give_nan_cells_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["circle"]);
    let b = gen(dir.path(), "b.csv", &["limacon"]);
    let out = curvalign(&["matrix", s(&a), s(&b), "--approach", "1", "-N", "600"]);
    assert_eq!(out.status.code(), Some(2));
    let (_, values) = read_distance_matrix(out.stdout.as_slice()).unwrap();
    assert!(values.iter().flatten().all(|v| v.is_nan()));
}

#[test]
fn bench_table() {
    let out = curvalign(&["bench", "--sizes", "64,128,256", "--runs", "5"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "N,t_naive,t_fft,speedup,error");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(
        rows.iter().map(|r| r[0] as usize).collect::<Vec<_>>(),
        [64, 128, 256]
    );
    for w in rows.windows(2) {
        assert!(w[1][4] <= 0.6 * w[0][4], "error must shrink with N");
    }
    assert!(rows.iter().all(|r| r[1] > 0.0 && r[2] > 0.0));

    let md = curvalign(&["bench", "--sizes", "32", "--format", "markdown"]);
    assert!(String::from_utf8(md.stdout).unwrap().starts_with("| N |"));
    let json = stdout_json(&curvalign(&["bench", "--sizes", "32", "--format", "json"]));
    assert_eq!(json[0]["n"], 32);
}

#[test]
fn bench_handles_near_zero_errors_at_large_sizes() {
    // The recovery error drops to ~1e-10 here, far below the trace round-off.
    let out = curvalign(&["bench", "--sizes", "1024,4096", "--format", "json"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = stdout_json(&out);
    let errors: Vec<f64> = (0..2).map(|i| json[i]["error"].as_f64().unwrap()).collect();
    assert!(errors[1] < errors[0] && errors[1] > 0.0);
}

#[test]
fn usage_and_input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["circle", "-N", "40"]);
    let b = gen(dir.path(), "b.csv", &["circle", "-N", "50"]);
    let missing = dir.path().join("missing.csv");
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "0,0\n1,x\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["align", s(&a), s(&a), "-N", "8"],
        vec!["frobnicate"],
        vec!["bench", "--sizes", "256,128"],
        vec!["bench", "--runs", "3"],
        vec!["align", s(&a), s(&missing)],
        vec!["align", s(&a), s(&bad)],
        vec!["align", s(&a), s(&b), "--no-resample"],
        vec!["gen", "spiral"],
        vec!["gen", "circle", "--warp", "gamma9"],
        vec!["matrix", s(&a)],
    ];
    for args in cases {
        let out = curvalign(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_curvalign"))
        .args(["matrix", s(&a), s(&a)])
        .env("CURVALIGN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(curvalign(&["--help"]).status.code(), Some(0));
}

#[test]
fn no_resample_keeps_input_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.csv", &["hippopede", "-N", "100"]);
    let v = stdout_json(&curvalign(&[
        "align",
        s(&a),
        s(&a),
        "--no-resample",
        "-N",
        "300",
    ]));
    assert_eq!(v["shift"], 0);
    let v = stdout_json(&curvalign(&["distance", s(&a), s(&a), "--no-resample"]));
    assert_eq!(v["gamma"].as_array().unwrap().len(), 101);
}

#[test]
fn gen_writes_both_formats() {
    let out = curvalign(&["gen", "superellipse", "-N", "16", "--format", "json"]);
    let v = stdout_json(&out);
    assert_eq!(v["closed"], true);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 16);
    let out = curvalign(&["gen", "fourier_random", "-N", "16", "--seed", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert_eq!(text.lines().next().unwrap(), "x,y");
    let again = curvalign(&["gen", "fourier_random", "-N", "16", "--seed", "4"]);
    assert_eq!(again.stdout, text.as_bytes());
}
