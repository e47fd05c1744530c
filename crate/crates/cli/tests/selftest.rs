//! The acceptance suite, one test per criterion. Each prints a PASS/FAIL line with the
//! measured values straight to stderr so it shows up without `--nocapture`.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use onecircle_cli::acceptance::{run, title, Options, SUITE_BUDGET};

fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "acceptance: {line}");
}

fn criterion(id: usize) {
    let outcome = run(id, &Options::default());
    report(&outcome.to_string());
    assert!(
        outcome.passed,
        "criterion {id} failed: {}",
        outcome.measured
    );
}

#[test]
fn criterion_01_parallelogram_residual() {
    criterion(1);
}

#[test]
fn criterion_02_hexagonal_limit() {
    criterion(2);
}

#[test]
fn criterion_03_fiber_symmetry() {
    criterion(3);
}

#[test]
fn criterion_04_order_six_symmetry() {
    criterion(4);
}

#[test]
fn criterion_05_slope_on_loci() {
    criterion(5);
}

#[test]
fn criterion_06_slope_monotonicity() {
    criterion(6);
}

#[test]
fn criterion_07_boundary_limit() {
    criterion(7);
}

#[test]
fn criterion_08_hexagon_containment() {
    criterion(8);
}

#[test]
fn criterion_09_degeneration() {
    criterion(9);
}

#[test]
fn criterion_10_packing_validity() {
    criterion(10);
}

#[test]
fn criterion_11_selftest() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_onecircle"))
        .arg("selftest")
        .output()
        .expect("run selftest");
    let elapsed = start.elapsed();
    let ok = out.status.success() && elapsed < SUITE_BUDGET;
    let line = format!(
        "{} [11] {}: exit code {:?}, wall time {:.2} s (< 60 s)",
        if ok { "PASS" } else { "FAIL" },
        title(11),
        out.status.code(),
        elapsed.as_secs_f64()
    );
    report(&line);
    for l in String::from_utf8_lossy(&out.stdout).lines() {
        report(&format!("  selftest | {l}"));
    }
    assert!(ok, "{line}");
}
