use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex;
use serde_json::Value;
use siegel_bn::formats::{
    matrix_to_json, to_json, BnStateFile, DatasetFile, FeatureRecord, FeaturesFile, SeriesRecord,
    SpecJson, SplitJson, FORMAT_VERSION,
};
use siegel_bn::radar::{ProductFeature, Split};
use siegel_bn::{ComplexMatrix, RealMatrix, SiegelDiskPoint, SpdPoint};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_siegel-bn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn simulate(dir: &Path, name: &str, seed: &str) -> PathBuf {
    let out = p(dir, name);
    let o = run(&[
        "simulate", "--classes", "3", "--dim", "2", "--length", "30", "--order", "3",
        "--per-class", "6", "--test-per-class", "2", "--seed", seed, "--out", &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    PathBuf::from(out)
}

fn read(path: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn scalar_feature(p0: f64, w: f64) -> ProductFeature<f64> {
    ProductFeature::new(
        SpdPoint::new(RealMatrix::from_diag(&[p0])).unwrap(),
        vec![SiegelDiskPoint::new(ComplexMatrix::from_diag(&[Complex::new(w, 0.0)])).unwrap()],
    )
    .unwrap()
}

/// Two scalar clusters on the disk axis around ±0.8.
fn cluster_file(dir: &Path, name: &str, per_class: usize, split: Split, offset: f64) -> String {
    let recs = (0..2 * per_class)
        .map(|i| {
            let label = i / per_class;
            let sign = if label == 0 { 1.0 } else { -1.0 };
            let w = sign * (0.8 + offset + 0.01 * (i % per_class) as f64 / per_class as f64);
            FeatureRecord::from_feature(label, i, split, &scalar_feature(1.0, w))
        })
        .collect();
    let path = p(dir, name);
    fs::write(&path, to_json(&FeaturesFile::new(0, 2, 1, 2, recs)).unwrap()).unwrap();
    path
}

#[test]
fn simulate_counts_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = simulate(dir.path(), "a.json", "7");
    let b = simulate(dir.path(), "b.json", "7");
    let c = simulate(dir.path(), "c.json", "8");
    let (a, b, c) = (fs::read(a).unwrap(), fs::read(b).unwrap(), fs::read(c).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["series"].as_array().unwrap().len(), 3 * 8);
    assert_eq!(v["format_version"], FORMAT_VERSION);
    assert_eq!(v["kind"], "dataset");
    assert_eq!(v["seed"], 7);
    // complex samples are [re, im] pairs
    assert_eq!(v["series"][0]["samples"][0][0].as_array().unwrap().len(), 2);
}

#[test]
fn invalid_spec_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["simulate", "--length", "3", "--order", "3", "--out", &p(dir.path(), "x.json")]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&run(&["simulate"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn unwritable_path_fails_cleanly() {
    let o = run(&["simulate", "--classes", "1", "--per-class", "1", "--dim", "1", "--out", "/nonexistent/dir/x.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn represent_preserves_counts_and_validity() {
    let dir = tempfile::tempdir().unwrap();
    let ds = simulate(dir.path(), "ds.json", "1");
    let out = p(dir.path(), "f.json");
    let o = run(&["represent", "--input", ds.to_str().unwrap(), "--out", &out]);
    assert_eq!(code(&o), 0);
    let v = read(&out);
    let feats = v["features"].as_array().unwrap();
    assert_eq!(feats.len(), 24);
    assert!(feats.iter().all(|f| f["valid"] == true));
    assert_eq!(feats[0]["w"].as_array().unwrap().len(), 2);

    let train = p(dir.path(), "t.json");
    run(&["represent", "--input", ds.to_str().unwrap(), "--split", "train", "--out", &train]);
    assert_eq!(read(&train)["features"].as_array().unwrap().len(), 18);
}

fn scalar_dataset(dir: &Path, values: &[f64]) -> String {
    let file = DatasetFile {
        format_version: FORMAT_VERSION,
        kind: "dataset".into(),
        seed: 0,
        spec: SpecJson {
            classes: 1,
            per_class: 1,
            test_per_class: 0,
            dim: 1,
            length: values.len(),
            order: 2,
        },
        series: vec![SeriesRecord {
            label: 0,
            index: 0,
            split: SplitJson::Train,
            samples: values.iter().map(|&v| vec![[v, 0.0]]).collect(),
        }],
    };
    let path = p(dir, "scalar.json");
    fs::write(&path, to_json(&file).unwrap()).unwrap();
    path
}

#[test]
fn geometric_series_triggers_the_clamp() {
    let dir = tempfile::tempdir().unwrap();
    let values: Vec<f64> = (0..20).map(|k| 2.0 * 0.8f64.powi(k)).collect();
    let ds = scalar_dataset(dir.path(), &values);
    let out = p(dir.path(), "f.json");
    assert_eq!(code(&run(&["represent", "--input", &ds, "--out", &out])), 0);
    let f = &read(&out)["features"][0];
    assert!(f["rescaled"].as_u64().unwrap() > 0);
    assert_eq!(f["valid"], true);
}

#[test]
fn degenerate_series_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let ds = scalar_dataset(dir.path(), &[0.0; 6]);
    let o = run(&["represent", "--input", &ds, "--out", &p(dir.path(), "f.json")]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.path().join("f.json").exists());
}

fn state(path: &str) -> BnStateFile {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bn_momentum_zero_keeps_the_initial_mean() {
    let dir = tempfile::tempdir().unwrap();
    let feats = cluster_file(dir.path(), "f.json", 4, Split::Train, 0.0);
    let st = p(dir.path(), "s.json");
    let o = run(&["bn", "--input", &feats, "--mode", "fit", "--momentum", "0", "--state", &st, "--out", &p(dir.path(), "o.json")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = state(&st).to_states().unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].running_mean, SiegelDiskPoint::zero(1));
}

#[test]
fn bn_fit_then_apply_agree_at_full_momentum() {
    let dir = tempfile::tempdir().unwrap();
    let feats = cluster_file(dir.path(), "f.json", 4, Split::Train, 0.0);
    let (st, fit, app) = (p(dir.path(), "s.json"), p(dir.path(), "fit.json"), p(dir.path(), "app.json"));
    assert_eq!(code(&run(&["bn", "--input", &feats, "--mode", "fit", "--momentum", "1", "--iters", "20", "--state", &st, "--out", &fit])), 0);
    assert_eq!(code(&run(&["bn", "--input", &feats, "--mode", "apply", "--state", &st, "--out", &app])), 0);
    assert_eq!(fs::read(&fit).unwrap(), fs::read(&app).unwrap());
}

#[test]
fn bn_single_point_maps_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let rec = FeatureRecord::from_feature(0, 0, Split::Train, &scalar_feature(2.0, 0.6));
    let feats = p(dir.path(), "one.json");
    fs::write(&feats, to_json(&FeaturesFile::new(0, 1, 1, 2, vec![rec])).unwrap()).unwrap();
    let out = p(dir.path(), "o.json");
    assert_eq!(code(&run(&["bn", "--input", &feats, "--mode", "fit", "--state", &p(dir.path(), "s.json"), "--out", &out])), 0);
    let (f, _) = serde_json::from_value::<FeaturesFile>(read(&out)).unwrap().features().unwrap();
    assert_eq!(f[0].w[0], SiegelDiskPoint::zero(1));
    assert_eq!(f[0].p0.matrix()[(0, 0)], 2.0);
    let zero = matrix_to_json(&ComplexMatrix::zeros(1, 1));
    assert_eq!(read(&out)["features"][0]["w"][0], serde_json::to_value(zero).unwrap());
}

#[test]
fn bn_apply_without_state_fails() {
    let dir = tempfile::tempdir().unwrap();
    let feats = cluster_file(dir.path(), "f.json", 2, Split::Train, 0.0);
    let o = run(&["bn", "--input", &feats, "--mode", "apply", "--state", &p(dir.path(), "none.json"), "--out", &p(dir.path(), "o.json")]);
    assert_eq!(code(&o), 2);
}

fn accuracy(csv: &str) -> f64 {
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("dataset,method,k,accuracy,seed"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[3].split('.').nth(1).map(str::len), Some(4));
    row[3].parse().unwrap()
}

#[test]
fn knn_separates_clusters_and_fails_on_permuted_labels() {
    let dir = tempfile::tempdir().unwrap();
    let train = cluster_file(dir.path(), "train.json", 50, Split::Train, 0.0);
    let test = cluster_file(dir.path(), "test.json", 50, Split::Test, 0.005);
    let out = p(dir.path(), "a.csv");
    let conf = p(dir.path(), "c.csv");
    assert_eq!(code(&run(&["knn", "--train", &train, "--test", &test, "--out", &out, "--confusion", &conf])), 0);
    assert_eq!(accuracy(&out), 1.0);
    assert_eq!(fs::read_to_string(&conf).unwrap(), "class,predicted_0,predicted_1\n0,50,0\n1,0,50\n");

    let again = p(dir.path(), "b.csv");
    run(&["knn", "--train", &train, "--test", &test, "--out", &again]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());

    let perm = p(dir.path(), "p.csv");
    let o = run(&["knn", "--train", &train, "--test", &test, "--k", "1", "--permute-labels", "--seed", "3", "--out", &perm]);
    assert_eq!(code(&o), 0);
    let sigma = (0.25f64 / 100.0).sqrt();
    assert!((accuracy(&perm) - 0.5).abs() <= 3.0 * sigma);
}

#[test]
fn verify_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = p(dir.path(), "r.json");
    let o = run(&["verify", "--suite", "siegel-distances", "--suite", "burg", "--seed", "4", "--out", &report]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = read(&report);
    assert_eq!(v["command"], "verify");
    assert_eq!(v["seed"], 4);
    assert_eq!(v["passed"], true);
    assert!(v["wall_clock_ms"].is_u64());
    assert_eq!(v["config"]["suites"], serde_json::json!(["siegel-distances", "burg"]));
    for c in v["checks"].as_array().unwrap() {
        assert!(c["name"].is_string());
        assert_eq!(c["status"], "pass");
        assert!(c["measured"].is_f64() || c["measured"].is_u64());
        assert!(c["tolerance"].is_number());
        assert!(c["comparison"] == "<=" || c["comparison"] == ">=");
    }
}

#[test]
fn perturbed_distance_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let report = p(dir.path(), "r.json");
    let o = run(&["verify", "--suite", "siegel-distances", "--perturb-distance", "--out", &report]);
    assert_eq!(code(&o), 1);
    let v = read(&report);
    assert_eq!(v["passed"], false);
    let failed: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c["measured"].is_number() && c["tolerance"].is_number()));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(code(&run(&["verify", "--suite", "nope"])), 2);
}

#[test]
fn state_file_shape_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let feats = cluster_file(dir.path(), "f.json", 2, Split::Train, 0.0);
    let st = p(dir.path(), "s.json");
    let bad = BnStateFile::from_states(0, 2, 0.1, &[]);
    fs::write(&st, to_json(&bad).unwrap()).unwrap();
    let o = run(&["bn", "--input", &feats, "--mode", "apply", "--state", &st, "--out", &p(dir.path(), "o.json")]);
    assert_eq!(code(&o), 2);
}
