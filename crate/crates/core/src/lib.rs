//! Batch normalization on complex matrix domains.
//!
//! The Siegel disk, the Siegel upper half space and the complex unit ball are
//! handled through their automorphism groups: each point `x` has an isometry
//! `φ_x` sending it to the origin, an almost geodesic joins two points, and a
//! Fréchet mean plays the role of the batch mean. SPD matrices and SO(3) are
//! included as reference domains. The `radar` module runs the synthetic
//! clutter pipeline (AR simulation, Burg features, kNN).
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the precision.

// `!(x > 0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity, clippy::wrong_self_convention)]

pub mod ball;
pub mod bn;
pub mod error;
pub mod formats;
pub mod linalg;
pub mod radar;
pub mod reference;
pub mod sampling;
pub mod scalar;
pub mod siegel;
pub mod verify;

pub use ball::BallPoint;
pub use bn::{
    bn_apply, bn_fit_batch, frechet_mean, BnState, FrechetConfig, FrechetReport, NormalizedDomain,
    SiegelDisk, UnitBall,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Matrix, RealMatrix};
pub use radar::{DatasetSpec, ProductFeature, TimeSeries};
pub use reference::{RotationPoint, SpdPoint};
pub use scalar::Scalar;
pub use siegel::{SiegelDiskPoint, SymplecticMatrix, UpperHalfPoint};

pub type SiegelDiskPoint64 = SiegelDiskPoint<f64>;
pub type SiegelDiskPoint32 = SiegelDiskPoint<f32>;
pub type UpperHalfPoint64 = UpperHalfPoint<f64>;
pub type UpperHalfPoint32 = UpperHalfPoint<f32>;
pub type BallPoint64 = BallPoint<f64>;
pub type BallPoint32 = BallPoint<f32>;
pub type SpdPoint64 = SpdPoint<f64>;
pub type SpdPoint32 = SpdPoint<f32>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type RealMatrix64 = RealMatrix<f64>;
pub type RealMatrix32 = RealMatrix<f32>;
pub type ProductFeature64 = ProductFeature<f64>;
pub type TimeSeries64 = TimeSeries<f64>;
