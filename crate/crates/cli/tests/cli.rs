use std::path::Path;
use std::process::{Command, Output};

use al_ist_cli::io::{parse_sequence, sequence_json};
use al_ist::Sequence;
use num_complex::Complex64;
use proptest::prelude::*;

fn al_ist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_al-ist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn solve_on_zero_datum_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "zero.json", r#"{"offset": -2, "values": [[0,0],[0,0]]}"#);
    let out = al_ist(&["--cmd", "solve", "--in", &input, "--t", "1", "--window"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,re,im,budget\n"));
    for r in rows(&text) {
        assert_eq!((r[1], r[2]), (0.0, 0.0));
        assert!(r[3] <= 1e-6);
    }
}

#[test]
fn compare_on_random_datum_passes() {
    let out = al_ist(&["--cmd", "compare", "--seed", "17", "--sites", "5", "--t", "1", "--eps", "1e-6"]);
    let note = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(0), "{note}");
    assert!(note.starts_with("PASS"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,re,im,budget,ref_re,ref_im,deviation\n"));
    for r in rows(&text) {
        assert!(r[6] <= 1e-6);
    }
}

#[test]
fn nlft_single_site_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "one.json", r#"{"offset": 3, "values": [[0.3, 0.4]]}"#);
    let out = al_ist(&["--cmd", "nlft", "--in", &input]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let s = 1.0 / 0.75f64.sqrt();
    assert_eq!(v["a"]["min_deg"], 0);
    assert!((v["a"]["coeffs"][0][0].as_f64().unwrap() - s).abs() < 1e-15);
    assert_eq!(v["b"]["min_deg"], -3);
    assert!((v["b"]["coeffs"][0][0].as_f64().unwrap() - 0.3 * s).abs() < 1e-15);
    assert!((v["b"]["coeffs"][0][1].as_f64().unwrap() + 0.4 * s).abs() < 1e-15);
    assert!(v["unitarity_defect"].as_f64().unwrap() < 1e-12);
}

#[test]
fn multiplier_reports_bounds() {
    let out = al_ist(&["--cmd", "multiplier", "--order", "10", "--t", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let delta = v["delta"].as_f64().unwrap();
    assert!(v["max_truncation_error"].as_f64().unwrap() <= delta);
    assert!(v["max_abs_g"].as_f64().unwrap() < 1.0);
    assert_eq!(v["g"]["coeffs"].as_array().unwrap().len(), 21);
}

#[test]
fn identical_jobs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = al_ist(&[
            "--cmd", "solve", "--seed", "3", "--sites", "6", "--t", "0.7", "--window",
            "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn reference_at_time_zero_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let q = Sequence::new(-1, vec![Complex64::new(0.1, -0.7), Complex64::new(1.0 / 3.0, 0.2)]).unwrap();
    let input = write(dir.path(), "q.json", &sequence_json(&q));
    let out = al_ist(&["--cmd", "reference", "--in", &input, "--boundary", "periodic", "--t", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, std::fs::read_to_string(&input).unwrap());
    assert_eq!(parse_sequence(&text).unwrap(), q);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"offset": 0, "values": [[1.0, 0.0]]}"#);
    assert_eq!(al_ist(&["--cmd", "solve", "--in", &bad]).status.code(), Some(2));
    let extra = write(dir.path(), "extra.json", r#"{"offset": 0, "values": [], "scale": 2}"#);
    assert_eq!(al_ist(&["--cmd", "solve", "--in", &extra]).status.code(), Some(2));
    assert_eq!(al_ist(&["--cmd", "solve", "--seed", "1", "--eps", "2"]).status.code(), Some(2));

    let hot = write(dir.path(), "hot.json", r#"{"offset": 0, "values": [[0.95, 0], [0.9, 0]]}"#);
    let out = al_ist(&["--cmd", "reference", "--in", &hot, "--t", "20", "--h", "5", "--radius", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("modulus guard"));
}

#[test]
fn thread_count_from_environment() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_al-ist"))
            .args(["--cmd", "solve", "--seed", "2", "--t", "0.5"])
            .env("AL_IST_THREADS", v)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("3").stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequence_documents_round_trip_bit_exactly(
        offset in -1000i64..1000,
        parts in prop::collection::vec((-0.7f64..0.7, -0.7f64..0.7), 0..20),
    ) {
        let q = Sequence::new(offset, parts.iter().map(|(a, b)| Complex64::new(*a, *b)).collect()).unwrap();
        let back = parse_sequence(&sequence_json(&q)).unwrap();
        prop_assert_eq!(back.offset(), q.offset());
        for (x, y) in back.values().iter().zip(q.values()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }
}
