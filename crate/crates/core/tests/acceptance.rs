//! Acceptance criteria, one test per criterion. Each test prints a
//! `PASS`/`FAIL` summary line followed by the individual checks.

use siegel_bn::verify::{run_suites, VerifyOptions};

const SEED: u64 = 20_240_601;

fn criterion(id: u32, title: &str, suites: &[&str]) {
    let opts = VerifyOptions {
        seed: SEED,
        ..VerifyOptions::default()
    };
    let names: Vec<String> = suites.iter().map(|s| s.to_string()).collect();
    let checks = run_suites(&names, &opts).expect("known suites");
    let ok = checks.iter().all(|c| c.passed());
    println!("criterion {id:>2} {}: {title}", if ok { "PASS" } else { "FAIL" });
    for c in &checks {
        println!("    {}", c.line());
    }
    assert!(ok, "criterion {id} failed");
}

#[test]
fn criterion_01_isometry_invariance() {
    criterion(1, "isometry invariance on the Siegel disk and the unit ball", &["siegel-isometry", "ball-isometry"]);
}

#[test]
fn criterion_02_distance_formula_equivalence() {
    criterion(2, "Kähler distance formulas agree", &["siegel-distances"]);
}

#[test]
fn criterion_03_inverse_automorphism() {
    criterion(3, "automorphism roundtrips", &["inverse-automorphism"]);
}

#[test]
fn criterion_04_almost_geodesic_law() {
    criterion(4, "almost geodesic endpoints and scaling", &["almost-geodesic"]);
}

#[test]
fn criterion_05_reference_manifolds() {
    criterion(5, "generic geodesic on SPD and SO(3) matches closed forms", &["reference-manifolds"]);
}

#[test]
fn criterion_06_cayley_isometry() {
    criterion(6, "Cayley transform is an isometry", &["cayley"]);
}

#[test]
fn criterion_07_image_gram_identity() {
    criterion(7, "factored form of I - φφᴴ", &["disk-identities"]);
}

#[test]
fn criterion_08_frechet_mean() {
    criterion(8, "Fréchet mean symmetry, centering and monotone descent", &["frechet"]);
}

#[test]
fn criterion_09_bn_updates() {
    criterion(9, "BN momentum extremes and single-point batch", &["bn"]);
}

#[test]
fn criterion_10_burg_scalar_example() {
    criterion(10, "Burg recursion on (1, 0.5, 0.5)", &["burg"]);
}

#[test]
fn criterion_11_poincare_reduction() {
    criterion(11, "unit ball distance reduces to Poincaré for n = 1", &["poincare-reduction"]);
}

#[test]
fn criterion_12_end_to_end_smoke() {
    criterion(12, "kNN on synthetic clutter beats chance, permuted labels do not", &["pipeline"]);
}

#[test]
fn criterion_13_knn_distance_scalar() {
    criterion(13, "kNN distance between (1, 0) and (4, 0)", &["knn-distance"]);
}
