//! Slot-wise batch normalization of product features.

use super::feature::ProductFeature;
use crate::bn::{bn_apply, bn_fit_batch, BnState, FrechetConfig, SiegelDisk};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::siegel::SiegelDiskPoint;

pub type DiskState<T> = BnState<SiegelDiskPoint<T>, T>;

/// Fresh states, one per disk slot.
pub fn initial_states<T: Scalar>(n: usize, order: usize, momentum: T) -> Result<Vec<DiskState<T>>> {
    let dom = SiegelDisk::new(n);
    (1..order).map(|_| BnState::new(&dom, momentum)).collect()
}

/// Normalizes disk slot `l` of every feature as one batch, with
/// `bn_fit_batch` when `fit` is set and `bn_apply` otherwise. `p⁰` is left
/// untouched. Returns the normalized features and the updated states.
pub fn bn_normalize_features<T: Scalar>(
    features: &[ProductFeature<T>],
    states: &[DiskState<T>],
    fit: bool,
    cfg: &FrechetConfig,
) -> Result<(Vec<ProductFeature<T>>, Vec<DiskState<T>>)> {
    let Some(first) = features.first() else {
        return Ok((Vec::new(), states.to_vec()));
    };
    let (n, r) = (first.dim(), first.order());
    if features.iter().any(|f| f.dim() != n || f.order() != r) {
        return Err(Error::Shape("features differ in size or order".into()));
    }
    if states.len() != r - 1 {
        return Err(Error::Shape(format!(
            "{} states for {} disk slots",
            states.len(),
            r - 1
        )));
    }
    let dom = SiegelDisk::new(n);
    let mut out: Vec<ProductFeature<T>> = features.to_vec();
    let mut new_states = Vec::with_capacity(states.len());
    for (l, state) in states.iter().enumerate() {
        let batch: Vec<SiegelDiskPoint<T>> = features.iter().map(|f| f.w[l].clone()).collect();
        let (normalized, st) = if fit {
            bn_fit_batch(&dom, state, &batch, cfg)?
        } else {
            (bn_apply(&dom, state, &batch)?, state.clone())
        };
        for (f, x) in out.iter_mut().zip(normalized) {
            f.w[l] = x;
        }
        new_states.push(st);
    }
    Ok((out, new_states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;
    use crate::reference::SpdPoint;
    use crate::sampling::random_disk_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn features(count: usize, n: usize, r: usize, seed: u64) -> Vec<ProductFeature<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|i| {
                ProductFeature::new(
                    SpdPoint::new(RealMatrix::identity(n).scale(1.0 + i as f64)).unwrap(),
                    (1..r).map(|_| random_disk_point(&mut rng, n, 0.7)).collect(),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn order_one_is_identity() {
        let f = features(4, 2, 1, 1);
        let (out, st) = bn_normalize_features(&f, &[], true, &FrechetConfig::default()).unwrap();
        assert_eq!(out, f);
        assert!(st.is_empty());
    }

    #[test]
    fn single_sample_maps_to_origin() {
        let f = features(1, 2, 3, 2);
        let st = initial_states(2, 3, 0.1).unwrap();
        let (out, _) = bn_normalize_features(&f, &st, true, &FrechetConfig::default()).unwrap();
        assert!(out[0].w.iter().all(|w| *w == SiegelDiskPoint::zero(2)));
        assert_eq!(out[0].p0, f[0].p0);
    }

    #[test]
    fn fit_then_apply_at_full_momentum() {
        let f = features(6, 2, 3, 3);
        let st = initial_states(2, 3, 1.0).unwrap();
        let cfg = FrechetConfig::default();
        let (fit, st) = bn_normalize_features(&f, &st, true, &cfg).unwrap();
        let (applied, st2) = bn_normalize_features(&f, &st, false, &cfg).unwrap();
        assert_eq!(fit, applied);
        assert_eq!(st, st2);
    }
}
