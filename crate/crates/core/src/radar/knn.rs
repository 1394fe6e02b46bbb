//! Nearest-neighbour classification of product features.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::feature::ProductFeature;
use crate::error::{Error, Result};
use crate::reference::spd_distance;
use crate::scalar::Scalar;
use crate::siegel::disk::distance_kahler;

/// Candidate `k` values tried by cross-validation.
pub const DEFAULT_K_GRID: [usize; 5] = [1, 3, 5, 7, 9];

/// `d² = r‖log(x⁰^{-1/2} y⁰ x⁰^{-1/2})‖² + Σⱼ ((r−j)/4) d²_K(xʲ, yʲ)` with
/// `d_K` the Kähler distance on the disk.
pub fn knn_distance<T: Scalar>(a: &ProductFeature<T>, b: &ProductFeature<T>) -> Result<T> {
    if a.dim() != b.dim() || a.order() != b.order() {
        return Err(Error::Shape(format!(
            "features of size {}/order {} and size {}/order {}",
            a.dim(),
            a.order(),
            b.dim(),
            b.order()
        )));
    }
    let r = a.order();
    let spd = spd_distance(&a.p0, &b.p0)?;
    let mut d2 = T::lit(r as f64) * spd * spd;
    for (j, (x, y)) in a.w.iter().zip(&b.w).enumerate() {
        let weight = T::lit((r - (j + 1)) as f64 / 4.0);
        let dk = distance_kahler(x, y)?;
        d2 += weight * dk * dk;
    }
    Ok(d2.sqrt())
}

/// Distances from every query to every training feature, row per query.
pub fn distance_table<T: Scalar>(
    queries: &[ProductFeature<T>],
    train: &[ProductFeature<T>],
) -> Result<Vec<Vec<T>>> {
    queries
        .par_iter()
        .map(|q| train.iter().map(|t| knn_distance(q, t)).collect())
        .collect()
}

/// Symmetric table of pairwise distances within one set.
pub fn pairwise_table<T: Scalar>(features: &[ProductFeature<T>]) -> Result<Vec<Vec<T>>> {
    let n = features.len();
    let upper: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| knn_distance(&features[i], &features[j]))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    let mut table = vec![vec![T::zero(); n]; n];
    for (i, row) in upper.iter().enumerate() {
        for (off, d) in row.iter().enumerate() {
            let j = i + 1 + off;
            table[i][j] = *d;
            table[j][i] = *d;
        }
    }
    Ok(table)
}

/// Majority label among the `k` nearest candidates; ties go to the label with
/// the smallest summed distance, then to the lowest label.
pub fn vote<T: Scalar>(dists: &[T], labels: &[usize], candidates: &[usize], k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if candidates.is_empty() {
        return Err(Error::InvalidArgument("empty training set".into()));
    }
    if k > candidates.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the training set size {}",
            candidates.len()
        )));
    }
    let mut order: Vec<usize> = candidates.to_vec();
    order.sort_by(|&a, &b| {
        dists[a]
            .partial_cmp(&dists[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut tally: Vec<(usize, usize, T)> = Vec::new();
    for &i in &order[..k] {
        match tally.iter_mut().find(|t| t.0 == labels[i]) {
            Some(t) => {
                t.1 += 1;
                t.2 += dists[i];
            }
            None => tally.push((labels[i], 1, dists[i])),
        }
    }
    tally.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(a.2.partial_cmp(&b.2).unwrap_or(std::cmp::Ordering::Equal))
            .then(a.0.cmp(&b.0))
    });
    Ok(tally[0].0)
}

pub fn knn_classify<T: Scalar>(
    train: &[ProductFeature<T>],
    labels: &[usize],
    query: &ProductFeature<T>,
    k: usize,
) -> Result<usize> {
    if train.len() != labels.len() {
        return Err(Error::Shape("one label per training feature".into()));
    }
    let dists = train
        .iter()
        .map(|t| knn_distance(query, t))
        .collect::<Result<Vec<_>>>()?;
    let all: Vec<usize> = (0..train.len()).collect();
    vote(&dists, labels, &all, k)
}

/// Cross-validated accuracy of every `k` in the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossValidation {
    pub scores: Vec<(usize, f64)>,
    pub best_k: usize,
}

/// `folds`-fold cross-validation on a precomputed pairwise table; the best
/// `k` is the most accurate, the smallest on ties. Grid values larger than
/// some training fold are skipped.
pub fn cross_validate<T: Scalar>(
    table: &[Vec<T>],
    labels: &[usize],
    grid: &[usize],
    folds: usize,
    seed: u64,
) -> Result<CrossValidation> {
    let n = labels.len();
    if folds < 2 || folds > n {
        return Err(Error::InvalidArgument(format!(
            "{folds} folds for {n} training samples"
        )));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_of = vec![0; n];
    for (pos, &i) in idx.iter().enumerate() {
        fold_of[i] = pos % folds;
    }
    let min_train = n - n.div_ceil(folds);
    let mut scores = Vec::new();
    for &k in grid.iter().filter(|&&k| k >= 1 && k <= min_train) {
        let mut correct = 0;
        for f in 0..folds {
            let train: Vec<usize> = (0..n).filter(|&i| fold_of[i] != f).collect();
            for i in (0..n).filter(|&i| fold_of[i] == f) {
                if vote(&table[i], labels, &train, k)? == labels[i] {
                    correct += 1;
                }
            }
        }
        scores.push((k, correct as f64 / n as f64));
    }
    let best_k = scores
        .iter()
        .fold(None, |best: Option<(usize, f64)>, &(k, s)| match best {
            Some((_, bs)) if bs >= s => best,
            _ => Some((k, s)),
        })
        .map(|b| b.0)
        .ok_or_else(|| Error::InvalidArgument("no usable k in the grid".into()))?;
    Ok(CrossValidation { scores, best_k })
}

/// Predictions, accuracy and confusion counts `confusion[true][predicted]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub k: usize,
    pub predictions: Vec<usize>,
    pub accuracy: f64,
    pub confusion: Vec<Vec<usize>>,
}

pub fn evaluate<T: Scalar>(
    table: &[Vec<T>],
    train_labels: &[usize],
    test_labels: &[usize],
    k: usize,
    classes: usize,
) -> Result<Evaluation> {
    let all: Vec<usize> = (0..train_labels.len()).collect();
    let predictions = table
        .iter()
        .map(|row| vote(row, train_labels, &all, k))
        .collect::<Result<Vec<_>>>()?;
    let mut confusion = vec![vec![0; classes]; classes];
    let mut correct = 0;
    for (&t, &p) in test_labels.iter().zip(&predictions) {
        if t >= classes || p >= classes {
            return Err(Error::InvalidArgument(format!("label beyond {classes} classes")));
        }
        confusion[t][p] += 1;
        correct += usize::from(t == p);
    }
    let accuracy = if test_labels.is_empty() {
        0.0
    } else {
        correct as f64 / test_labels.len() as f64
    };
    Ok(Evaluation {
        k,
        predictions,
        accuracy,
        confusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, RealMatrix};
    use crate::reference::SpdPoint;
    use crate::siegel::SiegelDiskPoint;
    use num_complex::Complex;

    fn feat(p: f64, w: f64) -> ProductFeature<f64> {
        ProductFeature::new(
            SpdPoint::new(RealMatrix::from_diag(&[p])).unwrap(),
            vec![SiegelDiskPoint::new(ComplexMatrix::from_diag(&[Complex::new(w, 0.0)])).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn scalar_distance() {
        let d = knn_distance(&feat(1.0, 0.0), &feat(4.0, 0.0)).unwrap();
        assert!((d - (2.0 * 4f64.ln().powi(2)).sqrt()).abs() < 1e-12);
        assert!((d - 1.960_516_286_937_094_5).abs() < 1e-9);
        assert!(knn_distance(&feat(2.0, 0.3), &feat(2.0, 0.3)).unwrap() < 1e-12);
    }

    #[test]
    fn symmetric() {
        let a = feat(1.3, 0.2);
        let b = feat(0.4, -0.6);
        assert!((knn_distance(&a, &b).unwrap() - knn_distance(&b, &a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn separable_clusters() {
        let train: Vec<_> = (0..10)
            .map(|i| feat(1.0, if i < 5 { 0.8 - 0.01 * i as f64 } else { -0.8 + 0.01 * i as f64 }))
            .collect();
        let labels: Vec<usize> = (0..10).map(|i| usize::from(i >= 5)).collect();
        assert_eq!(knn_classify(&train, &labels, &feat(1.0, 0.75), 3).unwrap(), 0);
        assert_eq!(knn_classify(&train, &labels, &feat(1.0, -0.77), 3).unwrap(), 1);
        assert_eq!(knn_classify(&train, &labels, &train[2], 1).unwrap(), 0);
    }

    #[test]
    fn forced_tie() {
        // k equal to the set size with balanced labels: the nearer class wins.
        let train = vec![feat(1.0, 0.5), feat(1.0, -0.5), feat(1.0, 0.4), feat(1.0, -0.7)];
        let labels = vec![1, 0, 1, 0];
        assert_eq!(knn_classify(&train, &labels, &feat(1.0, 0.45), 4).unwrap(), 1);
        // Exact tie in counts and sums falls back to the lowest label.
        let train = vec![feat(1.0, 0.5), feat(1.0, -0.5)];
        assert_eq!(knn_classify(&train, &[3, 2], &feat(1.0, 0.0), 2).unwrap(), 2);
    }

    #[test]
    fn errors() {
        let empty: Vec<ProductFeature<f64>> = Vec::new();
        assert!(knn_classify(&empty, &[], &feat(1.0, 0.0), 1).is_err());
        assert!(knn_classify(&[feat(1.0, 0.0)], &[0], &feat(1.0, 0.0), 2).is_err());
    }

    #[test]
    fn cross_validation_picks_a_k() {
        let feats: Vec<_> = (0..20)
            .map(|i| feat(1.0, if i % 2 == 0 { 0.6 } else { -0.6 } + 0.005 * i as f64))
            .collect();
        let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let table = pairwise_table(&feats).unwrap();
        let cv = cross_validate(&table, &labels, &DEFAULT_K_GRID, 10, 3).unwrap();
        assert_eq!(cv.scores.len(), 5);
        assert_eq!(cv.best_k, 1);
        assert_eq!(cv.scores[0].1, 1.0);
    }
}
