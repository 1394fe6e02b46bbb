//! Domain-generic batch normalization: almost geodesics, Fréchet means and
//! the training/testing updates of a BN layer.

pub mod domain;
pub mod frechet;
pub mod layer;

pub use domain::{
    alpha_curve, almost_geodesic, DiskMetric, FrechetChart, NormalizedDomain, RotationGroup,
    SiegelDisk, SpdManifold, UnitBall,
};
pub use frechet::{
    frechet_mean, frechet_mean_weighted, FrechetConfig, FrechetFailure, FrechetReport,
    GradientMode, StepPolicy,
};
pub use layer::{bn_apply, bn_fit_batch, BnState, DEFAULT_MOMENTUM};
