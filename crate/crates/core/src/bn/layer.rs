//! Batch normalization on a domain: training updates and test-time application.

use super::domain::{almost_geodesic, FrechetChart, NormalizedDomain};
use super::frechet::{frechet_mean, FrechetConfig};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_MOMENTUM: f64 = 0.1;

/// Running mean `m_r`, bias `g` and momentum `η` of one layer.
#[derive(Clone, Debug, PartialEq)]
pub struct BnState<P, T> {
    pub running_mean: P,
    pub bias: P,
    pub momentum: T,
}

impl<P: Clone, T: Scalar> BnState<P, T> {
    /// Running mean and bias at the identity element.
    pub fn new<D>(dom: &D, momentum: T) -> Result<Self>
    where
        D: NormalizedDomain<T, Point = P>,
    {
        check_momentum(momentum)?;
        Ok(Self {
            running_mean: dom.identity(),
            bias: dom.identity(),
            momentum,
        })
    }

    pub fn with_bias(mut self, bias: P) -> Self {
        self.bias = bias;
        self
    }
}

fn check_momentum<T: Scalar>(eta: T) -> Result<()> {
    if eta >= T::zero() && eta <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "momentum {} outside [0, 1]",
            eta.as_f64()
        )))
    }
}

/// Training step: `m_b` = Fréchet mean of the batch,
/// `m_r ← γ(m_r, m_b; η)`, outputs `φ_g⁻¹(φ_{m_b}(xⱼ))`.
pub fn bn_fit_batch<T: Scalar, D: FrechetChart<T>>(
    dom: &D,
    state: &BnState<D::Point, T>,
    batch: &[D::Point],
    cfg: &FrechetConfig,
) -> Result<(Vec<D::Point>, BnState<D::Point, T>)> {
    check_momentum(state.momentum)?;
    if batch.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    let batch_mean = frechet_mean(dom, batch, cfg)?.mean;
    let running_mean = almost_geodesic(dom, &state.running_mean, &batch_mean, state.momentum)?;
    let centered = dom.center_all(&batch_mean, batch)?;
    let out = dom.bias_all(&state.bias, &centered)?;
    Ok((
        out,
        BnState {
            running_mean,
            bias: state.bias.clone(),
            momentum: state.momentum,
        },
    ))
}

/// Test-time step: `φ_g⁻¹(φ_{m_r}(xⱼ))`.
pub fn bn_apply<T: Scalar, D: NormalizedDomain<T>>(
    dom: &D,
    state: &BnState<D::Point, T>,
    batch: &[D::Point],
) -> Result<Vec<D::Point>> {
    let centered = dom.center_all(&state.running_mean, batch)?;
    dom.bias_all(&state.bias, &centered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bn::domain::{SiegelDisk, UnitBall};
    use crate::sampling::{random_ball_point, random_disk_point};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_point_maps_to_identity() {
        let dom = SiegelDisk::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let x = random_disk_point::<f64, _>(&mut rng, 2, 0.8);
        let st = BnState::new(&dom, 0.1).unwrap();
        let (out, _) = bn_fit_batch(&dom, &st, std::slice::from_ref(&x), &FrechetConfig::default()).unwrap();
        assert_eq!(out[0], dom.identity());
    }

    #[test]
    fn momentum_extremes() {
        let dom = SiegelDisk::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        let batch: Vec<_> = (0..6).map(|_| random_disk_point::<f64, _>(&mut rng, 2, 0.7)).collect();
        let cfg = FrechetConfig::default();
        let mean = frechet_mean(&dom, &batch, &cfg).unwrap().mean;

        let st1 = BnState::new(&dom, 1.0).unwrap();
        let (out, new1) = bn_fit_batch(&dom, &st1, &batch, &cfg).unwrap();
        assert_eq!(new1.running_mean, mean);
        assert_eq!(bn_apply(&dom, &new1, &batch).unwrap(), out);

        let start = random_disk_point::<f64, _>(&mut rng, 2, 0.5);
        let st0 = BnState {
            running_mean: start.clone(),
            ..BnState::new(&dom, 0.0).unwrap()
        };
        let (_, new0) = bn_fit_batch(&dom, &st0, &batch, &cfg).unwrap();
        assert_eq!(new0.running_mean, start);
    }

    #[test]
    fn apply_with_identity_state_is_identity() {
        let dom = UnitBall::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let batch: Vec<_> = (0..5).map(|_| random_ball_point::<f64, _>(&mut rng, 3, 0.9)).collect();
        let st = BnState::new(&dom, 0.1).unwrap();
        assert_eq!(bn_apply(&dom, &st, &batch).unwrap(), batch);
    }

    #[test]
    fn bias_roundtrip() {
        let dom = SiegelDisk::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(104);
        let g = random_disk_point::<f64, _>(&mut rng, 2, 0.6);
        let m = random_disk_point::<f64, _>(&mut rng, 2, 0.6);
        let x = random_disk_point::<f64, _>(&mut rng, 2, 0.6);
        let st = BnState {
            running_mean: m.clone(),
            bias: g.clone(),
            momentum: 0.1,
        };
        let out = bn_apply(&dom, &st, std::slice::from_ref(&x)).unwrap();
        let recentered = dom.center(&g, &out[0]).unwrap();
        let expect = dom.center(&m, &x).unwrap();
        assert!((recentered.matrix() - expect.matrix()).max_abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_momentum_and_empty_batch() {
        let dom = SiegelDisk::new(1);
        assert!(BnState::<_, f64>::new(&dom, 1.5).is_err());
        let st = BnState::new(&dom, 0.1).unwrap();
        let empty: Vec<crate::siegel::SiegelDiskPoint<f64>> = Vec::new();
        assert!(bn_fit_batch(&dom, &st, &empty, &FrechetConfig::default()).is_err());
    }
}
