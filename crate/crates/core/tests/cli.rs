mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use orthomono::cli::commands::{analyze, batch, exit_code, pad, BatchOutput, Options, EXIT_INCONSISTENT};
use orthomono::cli::report::ReportDocument;
use orthomono::Error;
use proptest::prelude::*;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthomono")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orthomono-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn base_pair_exits_zero_with_json() {
    let out = bin(&["analyze", "--f", common::BASE_F, "--g", common::BASE_G, "--json", "-"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = ReportDocument::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(doc.derived.n, 5);
    let sig = doc.signature.unwrap();
    assert_eq!((sig.p, sig.q), (3, 2));
}

#[test]
fn invalid_inputs_exit_two() {
    for args in [
        vec!["analyze", "--f", "x^5-", "--g", "x+1"],
        vec!["analyze", "--f", "(x-1)*(x+1)", "--g", "(x+1)^2"],
        vec!["analyze", "--f", common::BASE_G, "--g", common::BASE_F],
        vec!["pad", "--f0", common::BASE_F, "--g0", common::BASE_G, "--P", "y+1", "--Q", "y+1"],
        vec!["frobnicate"],
    ] {
        let out = bin(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn auto_shift_repairs_reversed_constants() {
    let out = bin(&["analyze", "--f", common::BASE_G, "--g", common::BASE_F, "--auto-shift", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn inconsistency_maps_to_three() {
    assert_eq!(exit_code(&Error::Inconsistency("x".into())), EXIT_INCONSISTENT);
}

#[test]
fn error_json_is_written() {
    let path = scratch("err.json");
    let out = bin(&["analyze", "--f", "(x-1)*(x+1)", "--g", "(x+1)^2", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["error"]["exit_code"], 2);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let opts = Options::default();
    let a = analyze(common::BASE_F, common::BASE_G, &opts).unwrap();
    let b = analyze(common::BASE_F, common::BASE_G, &opts).unwrap();
    assert_eq!(a.without_timings().to_json(), b.without_timings().to_json());
    let back = ReportDocument::from_json(&a.to_json()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn trivial_padding_reproduces_base() {
    let opts = Options::default();
    let base = analyze(common::BASE_F, common::BASE_G, &opts).unwrap();
    let padded = pad(common::BASE_F, common::BASE_G, "(1)", "(1)", 6, &opts).unwrap();
    assert_eq!(padded.signature, base.signature);
    assert_eq!(padded.gram, base.gram);
    assert_eq!(padded.witness.conclusion, base.witness.conclusion);
}

#[test]
fn batch_keeps_order_and_reports_failures() {
    let text = format!(
        "# comment\n{} ; {}\n\nnot a pair\n{{\"f\": \"(x-1)\", \"g\": \"(x+1)\"}}\n",
        common::BASE_F,
        common::BASE_G
    );
    let rows = batch(&text, &Options::default());
    assert_eq!(rows.len(), 3);
    assert!(matches!(&rows[0], BatchOutput::Report(d) if d.derived.n == 5));
    assert!(matches!(&rows[1], BatchOutput::Failure { line: 4, .. }));
    assert!(matches!(&rows[2], BatchOutput::Report(d) if d.derived.n == 1));

    let path = scratch("batch.txt");
    std::fs::write(&path, &text).unwrap();
    let out = bin(&["analyze", "--batch", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
}

#[test]
fn paper_suite_passes() {
    let out = bin(&["paper-suite", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn arbitrary_text_never_panics_or_exits_three(f in "\\PC{0,24}", g in "[-+*^()x0-9 ]{0,12}") {
        if let Err(e) = analyze(&f, &g, &Options::default()) {
            prop_assert_ne!(exit_code(&e), EXIT_INCONSISTENT, "{:?}", e);
        }
    }
}
