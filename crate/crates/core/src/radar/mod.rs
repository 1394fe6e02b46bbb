//! Synthetic radar clutter: AR simulation, Burg-style features, batch
//! normalization of the features and geodesic kNN.

pub mod burg;
pub mod feature;
pub mod knn;
pub mod normalize;
pub mod simulate;
pub mod spec;

use rayon::prelude::*;

pub use burg::{burg_representation, BurgOutput};
pub use feature::{project_burg, project_feature, ProductFeature, Projection};
pub use knn::{
    cross_validate, distance_table, evaluate, knn_classify, knn_distance, pairwise_table,
    CrossValidation, Evaluation, DEFAULT_K_GRID,
};
pub use normalize::{bn_normalize_features, initial_states, DiskState};
pub use simulate::{
    generate_dataset, sample_rng, simulate_series, Dataset, LabeledSeries, Split, TimeSeries,
};
pub use spec::{make_class_spec, ArClassSpec, DatasetSpec};

use crate::error::Result;
use crate::scalar::Scalar;

/// Burg recursion and projection for every series, in order.
pub fn represent_all<T: Scalar>(series: &[&TimeSeries<T>], order: usize) -> Result<Vec<Projection<T>>> {
    series
        .par_iter()
        .map(|s| project_burg(&burg_representation(s, order)?))
        .collect()
}

/// Outcome of a kNN run: the cross-validation scores when `k` was chosen by
/// cross-validation, and the held-out evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct KnnRun {
    pub cv: Option<CrossValidation>,
    pub evaluation: Evaluation,
}

/// Selects `k` by `folds`-fold cross-validation on the training set unless a
/// fixed `k` is given, then classifies the test set.
#[allow(clippy::too_many_arguments)]
pub fn knn_run<T: Scalar>(
    train: &[ProductFeature<T>],
    train_labels: &[usize],
    test: &[ProductFeature<T>],
    test_labels: &[usize],
    classes: usize,
    k: Option<usize>,
    folds: usize,
    seed: u64,
) -> Result<KnnRun> {
    let cv = match k {
        Some(_) => None,
        None => Some(cross_validate(
            &pairwise_table(train)?,
            train_labels,
            &DEFAULT_K_GRID,
            folds,
            seed,
        )?),
    };
    let k = k.or(cv.as_ref().map(|c| c.best_k)).unwrap_or(1);
    let evaluation = evaluate(&distance_table(test, train)?, train_labels, test_labels, k, classes)?;
    Ok(KnnRun { cv, evaluation })
}
