//! One line per numbered check: `PASS 01 ...` or `FAIL 01 ...`.

use mzv_core::verify::{run_check, Level};

fn run(id: u32, level: Level) {
    let outcome = run_check(id, level);
    println!("{outcome}");
    assert!(outcome.pass, "{outcome}");
}

#[test]
fn criterion_01_witt_lyndon() {
    run(1, Level::Quick);
}

#[test]
fn criterion_02_depth_graded_dims() {
    run(2, Level::Quick);
}

#[test]
fn criterion_03_series_coefficients() {
    run(3, Level::Quick);
}

#[test]
fn criterion_04_weight_eleven_matrix() {
    run(4, Level::Quick);
}

#[test]
fn criterion_05_convergent_counts() {
    run(5, Level::Quick);
}

#[test]
fn criterion_06_insertion_sets() {
    run(6, Level::Quick);
}

#[test]
fn criterion_07_dim_delta() {
    run(7, Level::Quick);
}

#[test]
#[ignore = "long-running tier"]
fn criterion_08_rank_at_nine() {
    run(8, Level::Full);
}

#[test]
fn criterion_09_reduction() {
    run(9, Level::Quick);
}

#[test]
#[ignore = "long-running tier: weight six reduction"]
fn criterion_09_reduction_at_nine() {
    run(9, Level::Full);
}

#[test]
fn criterion_10_monte_carlo() {
    run(10, Level::Quick);
}

#[test]
fn criterion_11_partial_dims() {
    run(11, Level::Quick);
}

#[test]
fn criterion_12_picard() {
    run(12, Level::Quick);
}

#[test]
fn criterion_13_properties() {
    run(13, Level::Quick);
}
