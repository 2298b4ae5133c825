//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `-- --nocapture`). Tolerances and sample
//! counts are pinned here, not configurable.

use std::process::Command;
use std::time::Instant;

use holorot_core::verification::{
    check_calibration_maximum, check_classifier, check_corollary, check_invariant_intersection,
    check_quat_dimension_counts, check_rotation_sphere, check_spin7_proof_identities,
    check_spin7_spectrum, common_intersection_checks, CheckOutcome, VerifyParams,
};

fn report(criterion: &str, checks: &[CheckOutcome]) {
    let ok = checks.iter().all(|c| c.passed);
    println!(
        "ACCEPTANCE {criterion}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    for c in checks {
        println!(
            "  [{}] {}: {}",
            if c.passed { "ok" } else { "FAILED" },
            c.name,
            c.detail
        );
    }
    assert!(ok, "criterion {criterion} failed");
}

fn acceptance_params() -> VerifyParams {
    VerifyParams {
        seed: 2024,
        tol: 1e-9,
        grid: 64,
        samples: 1000,
    }
}

/// Criterion 1: quaternionic projector ranks (3, 2n²+n, (2n²−n−1)×3) for
/// n = 1, 2, 3, exact integer counts at cutoff 1e−8, within 5 seconds.
#[test]
fn acceptance_1_quaternionic_dimension_counts() {
    let start = Instant::now();
    let check = check_quat_dimension_counts();
    let elapsed = start.elapsed();
    let timed = CheckOutcome {
        name: "runtime-under-5s".into(),
        passed: elapsed.as_secs_f64() < 5.0,
        detail: format!("{elapsed:.2?}"),
    };
    report("1 (dimension counts)", &[check, timed]);
}

/// Criterion 2: for 100 random structure pairs L ≠ ±L′ at n = 2, the
/// intersection of the (1,1)-spaces equals the invariant summand with all
/// principal angles below 1e−8.
#[test]
fn acceptance_2_invariant_intersection() {
    let check = check_invariant_intersection(100, acceptance_params().seed);
    report("2 (intersection of (1,1)-spaces)", &[check]);
}

/// Criterion 3: calibration functional constant (spread < 1e−9) over 10³
/// sphere samples for 20 invariant-summand models; strict inequality off ±I
/// for 20 generic primitive-(1,1) models; pointwise wedge identities to
/// 1e−10.
#[test]
fn acceptance_3_calibration_maximum() {
    let checks = check_calibration_maximum(&acceptance_params());
    report("3 (calibration maximum)", &checks);
}

/// Criterion 4: T = *(Ω∧·) has spectrum {3 ×7, −1 ×21} to 1e−10; *Ω = Ω
/// exactly; the canonical structure reproduces all 14 monomials exactly.
#[test]
fn acceptance_4_spin7_spectrum() {
    let checks = check_spin7_spectrum();
    report("4 (Spin(7) spectrum)", &checks);
}

/// Criterion 5: for 20 random HYM instanton models with c₁ = 0 the rotation
/// quadratic form is negative semidefinite (max eigenvalue < 1e−8), a 10⁴
/// point sweep of the 6-sphere confirms the inequality (≤ 1e−8) with the
/// equality set matching ker Q, the scaling and cross-term identities hold
/// to 1e−9, all within 60 seconds.
#[test]
fn acceptance_5_rotation_sphere() {
    let start = Instant::now();
    let mut checks = check_spin7_proof_identities(&acceptance_params());
    checks.extend(check_rotation_sphere(&acceptance_params(), 20, 10_000));
    let elapsed = start.elapsed();
    checks.push(CheckOutcome {
        name: "runtime-under-60s".into(),
        passed: elapsed.as_secs_f64() < 60.0,
        detail: format!("{elapsed:.2?}"),
    });
    report("5 (rotation sphere)", &checks);
}

/// Criterion 6: golden models for each verdict class classify correctly; a
/// 64×64 structure grid confirms the HYM locus matches each verdict's
/// family; every (1,1)-type mixed component gives |m₂ − m₃| < 1e−9·max(1,|m₁|).
#[test]
fn acceptance_6_rotability_classifier() {
    let checks = check_classifier(&acceptance_params());
    report("6 (rotability classifier)", &checks);
}

/// Criterion 7: over 50 random λ = λ′ = 0 HYM product models, the pairing
/// identity holds iff the verdict is FullProduct or DiagonalSphere, and the
/// internal m₂+m₃ identity holds to 1e−9.
#[test]
fn acceptance_7_corollary_consistency() {
    let checks = check_corollary(&acceptance_params(), 50);
    report("7 (pairing identity)", &checks);
}

/// Criterion 8: the common intersection of the (1,1)-spaces of 50 random
/// compatible structures has dimension 3 on ℝ⁴ and 0 on ℝ⁶ and ℝ⁸.
#[test]
fn acceptance_8_common_intersection() {
    let checks = common_intersection_checks(acceptance_params().seed);
    report("8 (pointwise flatness analogue)", &checks);
}

/// Criterion 9: every CLI command is byte-identical across two runs with a
/// fixed seed, and the golden-file suite matches.
#[test]
fn acceptance_9_cli_determinism() {
    let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let run = |args: &[&str]| -> (Option<i32>, Vec<u8>) {
        let out = Command::new(env!("CARGO_BIN_EXE_holorot"))
            .args(args)
            .env_remove("HOLOROT_THREADS")
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    let mut checks = Vec::new();
    let fp = golden.join("fullproduct.json");
    let inst = golden.join("instanton.json");
    let hh = golden.join("hyperholomorphic.json");
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "generate",
            "--structure",
            "k3xk3",
            "--kind",
            "hym",
            "--seed",
            "77",
        ],
        vec![
            "generate",
            "--structure",
            "spin7",
            "--kind",
            "instanton-hym",
            "--seed",
            "77",
        ],
        vec![
            "decompose",
            "--structure",
            "k3xk3",
            "--in",
            fp.to_str().unwrap(),
        ],
        vec![
            "classify",
            "--structure",
            "spin7",
            "--in",
            inst.to_str().unwrap(),
            "--samples",
            "500",
        ],
        vec![
            "calibrate",
            "--structure",
            "quat:2",
            "--in",
            hh.to_str().unwrap(),
            "--samples",
            "50",
        ],
        vec!["verify", "--suite", "models"],
    ];
    let mut all_same = true;
    for args in &commands {
        let (c1, o1) = run(args);
        let (c2, o2) = run(args);
        if c1 != Some(0) || c1 != c2 || o1 != o2 {
            all_same = false;
        }
    }
    checks.push(CheckOutcome {
        name: "cli/byte-identical-runs".into(),
        passed: all_same,
        detail: format!("{} commands run twice", commands.len()),
    });

    // golden-file suite
    let mut goldens_ok = true;
    let mut detail = String::from("7 golden classifications");
    for (structure, name, extra) in [
        ("k3xk3", "fullproduct", vec![]),
        ("k3xk3", "leftsphere", vec![]),
        ("k3xk3", "rightsphere", vec![]),
        ("k3xk3", "diagonalsphere", vec![]),
        ("k3xk3", "notrotable", vec![]),
        ("quat:2", "hyperholomorphic", vec![]),
        ("spin7", "instanton", vec!["--samples", "2000"]),
    ] {
        let input = golden.join(format!("{name}.json"));
        let expected =
            std::fs::read_to_string(golden.join(format!("{name}.expected.json"))).unwrap();
        let mut args = vec![
            "classify",
            "--structure",
            structure,
            "--in",
            input.to_str().unwrap(),
        ];
        args.extend(extra);
        let (code, out) = run(&args);
        let got = String::from_utf8(out).unwrap();
        if code != Some(0) || got.trim_end() != expected.trim_end() {
            goldens_ok = false;
            detail = format!("mismatch on {name}");
        }
    }
    checks.push(CheckOutcome {
        name: "cli/golden-suite".into(),
        passed: goldens_ok,
        detail,
    });
    report("9 (CLI determinism)", &checks);
}
