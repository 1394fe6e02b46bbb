//! End-to-end runs of the synthetic clutter pipeline.

use siegel_bn::bn::FrechetConfig;
use siegel_bn::formats::{from_json, to_json, BnStateFile, DatasetFile, FeatureRecord, FeaturesFile};
use siegel_bn::radar::{
    bn_normalize_features, generate_dataset, initial_states, knn_run, represent_all, DatasetSpec,
    Split,
};
use siegel_bn::verify::pipeline_features;

fn spec(seed: u64) -> DatasetSpec {
    DatasetSpec {
        classes: 3,
        per_class: 12,
        test_per_class: 4,
        dim: 3,
        length: 40,
        order: 3,
        seed,
    }
}

#[test]
fn dataset_is_a_pure_function_of_the_seed() {
    let a = generate_dataset::<f64>(&spec(1)).unwrap();
    let b = generate_dataset::<f64>(&spec(1)).unwrap();
    let c = generate_dataset::<f64>(&spec(2)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let text = to_json(&DatasetFile::from_dataset(&a)).unwrap();
    assert_eq!(text, to_json(&DatasetFile::from_dataset(&b)).unwrap());
    assert_eq!(a.records.len(), 3 * 16);
    assert_eq!(a.records.iter().filter(|r| r.split == Split::Test).count(), 12);
}

#[test]
fn features_are_valid_and_classify_above_chance() {
    let s = spec(3);
    let (tr, trl, te, tel) = pipeline_features(&s).unwrap();
    assert_eq!((tr.len(), te.len()), (36, 12));
    let run = knn_run(&tr, &trl, &te, &tel, s.classes, None, 10, 3).unwrap();
    assert!(run.evaluation.accuracy > 1.0 / 3.0);
    let confusion: usize = run.evaluation.confusion.iter().flatten().sum();
    assert_eq!(confusion, 12);
    let cv = run.cv.unwrap();
    assert_eq!(cv.scores.iter().map(|s| s.0).collect::<Vec<_>>(), vec![1, 3, 5, 7, 9]);
}

#[test]
fn normalized_features_roundtrip_through_files() {
    let s = spec(4);
    let ds = generate_dataset::<f64>(&s).unwrap();
    let series: Vec<_> = ds.records.iter().map(|r| &r.series).collect();
    let feats: Vec<_> = represent_all(&series, s.order)
        .unwrap()
        .into_iter()
        .map(|p| p.feature)
        .collect();
    let states = initial_states(s.dim, s.order, 1.0).unwrap();
    let cfg = FrechetConfig::default();
    let (fit, states) = bn_normalize_features(&feats, &states, true, &cfg).unwrap();
    assert!(fit.iter().zip(&feats).all(|(a, b)| a.p0 == b.p0));

    let file = BnStateFile::from_states(s.seed, s.dim, 1.0, &states);
    let loaded = from_json::<BnStateFile>(&to_json(&file).unwrap()).unwrap().to_states().unwrap();
    assert_eq!(loaded, states);
    let (applied, _) = bn_normalize_features(&feats, &loaded, false, &cfg).unwrap();
    assert_eq!(applied, fit);

    let recs: Vec<_> = ds
        .records
        .iter()
        .zip(&applied)
        .map(|(r, f)| FeatureRecord::from_feature(r.label, r.index, r.split, f))
        .collect();
    assert!(recs.iter().all(|r| r.valid));
    let ff = FeaturesFile::new(s.seed, s.classes, s.dim, s.order, recs);
    let (back, labels) = from_json::<FeaturesFile>(&to_json(&ff).unwrap()).unwrap().features().unwrap();
    assert_eq!(back, applied);
    assert_eq!(labels.len(), ds.records.len());
}
