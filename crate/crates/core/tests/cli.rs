//! End-to-end checks of the `qposit` binary: exit codes and dump formats.

use std::fs;
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_traits::Signed;
use qposit::cli::read_csv;
use qposit::generating::{e_k, f_def, g_poch, omega};
use qposit::verify::{load_certificate, verify_prefix_stream};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qposit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn constant_term_of_f() {
    let out = run(&["coeffs", "--k", "3", "--m", "1", "--N", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n");
}

#[test]
fn human_coefficients_match_library() {
    let out = run(&["coeffs", "--k", "4", "--m", "2", "--N", "40"]);
    let printed: Vec<BigInt> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(printed, f_def(4, 2, 40).unwrap().into_coeffs());
}

#[test]
fn csv_dumps_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], Vec<BigInt>); 4] = [
        (&["coeffs", "--k", "5", "--m", "1", "--N", "300"], f_def(5, 1, 300).unwrap().into_coeffs()),
        (&["omega", "--N", "300"], omega(300).into_coeffs()),
        (&["ek", "--k", "3", "--N", "150"], e_k(3, 150).unwrap().into_coeffs()),
        (&["g", "--k", "4", "--n", "3", "--N", "200"], g_poch(4, 3, 200).unwrap().into_coeffs()),
    ];
    for (i, (args, expected)) in cases.into_iter().enumerate() {
        let path = dir.path().join(format!("dump{i}.csv"));
        let mut argv = args.to_vec();
        argv.extend(["--csv", path.to_str().unwrap()]);
        assert_eq!(code(&argv), 0, "{args:?}");
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("n,coefficient\n"));
        assert_eq!(read_csv(&path).unwrap(), expected, "{args:?}");
    }
}

#[test]
fn verify_exit_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qposit"))
        .args(["verify", "--k", "7"])
        .env("QPOS_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let cert = load_certificate(&dir.path().join("verify-k7-streaming.json")).unwrap();
    assert_eq!(cert.method, "prefix-sum/streaming/v1");
}

#[test]
fn verify_k10_matches_published_ell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k10.json");
    assert_eq!(code(&["verify", "--k", "10", "--stream", "--cert", path.to_str().unwrap()]), 0);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"ell\": 765765"), "{text}");
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&[]), 3);
    assert_eq!(code(&["coeffs", "--k", "3"]), 3);
    assert_eq!(code(&["verify", "--k", "2", "--no-cert"]), 3);
    assert_eq!(code(&["verify", "--k", "11", "--materialize", "--no-cert"]), 3);
    assert_eq!(code(&["verify", "--k", "5", "--stream", "--materialize"]), 3);
    assert_eq!(code(&["scan", "--conjecture", "G", "--k-max", "3"]), 3);
    assert_eq!(code(&["identities", "--N", "oops"]), 3);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn scans_exit_0() {
    assert_eq!(code(&["scan", "--conjecture", "lemma53", "--n-max", "12"]), 0);
    assert_eq!(code(&["scan", "--conjecture", "strict", "--k-max", "4", "--N", "200"]), 0);
    assert_eq!(code(&["scan", "--conjecture", "G", "--k-max", "4", "--n-max", "3", "--N", "100"]), 0);
    assert_eq!(code(&["scan", "--conjecture", "diff", "--k-max", "4", "--n-max", "3", "--N", "100"]), 0);
}

#[test]
fn strict_scan_counterexample_exits_1() {
    // c_{1,2}(7) = 0 and c_{1,2}(10) = -1: a genuine failure of strict
    // positivity, which must surface as exit 1 rather than an error.
    let out = run(&["scan", "--conjecture", "strict", "--k-max", "1", "--m", "2", "--N", "20"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("COUNTEREXAMPLE"));
}

#[test]
fn identities_exit_0() {
    assert_eq!(code(&["identities", "--N", "120", "-q"]), 0);
}

#[test]
fn verified_implies_nonnegative_coefficients() {
    // The certificate is sufficient: every verified k must give F_{k,1} ⪰ 0.
    for k in 3..=9 {
        let r = verify_prefix_stream(k).unwrap();
        assert!(r.verified, "k={k}");
        let f = f_def(k, 1, 2000).unwrap();
        assert!(f.coeffs().iter().all(|c| !c.is_negative()), "k={k}");
    }
}
