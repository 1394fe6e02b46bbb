//! The rotation group SO(3) with the bi-invariant metric.

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::scalar::Scalar;

/// Largest rotation angle accepted by [`so3_log`] is `π − LOG_ANGLE_GAP`.
pub const LOG_ANGLE_GAP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct RotationPoint<T: Scalar> {
    r: RealMatrix<T>,
}

fn det3<T: Scalar>(m: &RealMatrix<T>) -> T {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

impl<T: Scalar> RotationPoint<T> {
    /// Checks `‖rᵀr − I‖_F ≤ 1e-8` and `det r > 0`.
    pub fn new(r: RealMatrix<T>) -> Result<Self> {
        if r.rows() != 3 || r.cols() != 3 {
            return Err(Error::Shape(format!("rotation of size {}x{}", r.rows(), r.cols())));
        }
        if !r.is_finite() {
            return Err(Error::NonFinite("rotation".into()));
        }
        let err = (&(&r.transpose() * &r) - &RealMatrix::identity(3)).frobenius_norm();
        if err > T::tol(1e-8) {
            return Err(Error::OutsideDomain(format!(
                "orthogonality residual {:e}",
                err.as_f64()
            )));
        }
        if !(det3(&r) > T::zero()) {
            return Err(Error::OutsideDomain("rotation has negative determinant".into()));
        }
        Ok(Self { r })
    }

    pub fn identity() -> Self {
        Self {
            r: RealMatrix::identity(3),
        }
    }

    pub fn matrix(&self) -> &RealMatrix<T> {
        &self.r
    }
}

fn hat<T: Scalar>(w: &[T; 3]) -> RealMatrix<T> {
    let z = T::zero();
    RealMatrix::from_row_major(3, 3, vec![z, -w[2], w[1], w[2], z, -w[0], -w[1], w[0], z])
        .expect("3x3")
}

/// Rodrigues formula.
pub fn so3_exp<T: Scalar>(w: &[T; 3]) -> RotationPoint<T> {
    let theta = w.iter().map(|v| *v * *v).sum::<T>().sqrt();
    let k = hat(w);
    let k2 = &k * &k;
    // Series forms below the cancellation threshold.
    let (a, b) = if theta < T::lit(1e-4) {
        let t2 = theta * theta;
        (
            T::one() - t2 / T::lit(6.0),
            T::lit(0.5) - t2 / T::lit(24.0),
        )
    } else {
        (
            theta.sin() / theta,
            (T::one() - theta.cos()) / (theta * theta),
        )
    };
    let r = &(&RealMatrix::identity(3) + &k.scale(a)) + &k2.scale(b);
    RotationPoint { r }
}

/// Axis-angle vector of a rotation with angle below `π − 1e-6`.
pub fn so3_log<T: Scalar>(x: &RotationPoint<T>) -> Result<[T; 3]> {
    let r = &x.r;
    let half = T::lit(0.5);
    let c = ((r.trace() - T::one()) * half).max(-T::one()).min(T::one());
    let theta = c.acos();
    if theta >= T::PI() - T::lit(LOG_ANGLE_GAP) {
        return Err(Error::Range(format!(
            "rotation angle {} too close to π",
            theta.as_f64()
        )));
    }
    let v = [
        r[(2, 1)] - r[(1, 2)],
        r[(0, 2)] - r[(2, 0)],
        r[(1, 0)] - r[(0, 1)],
    ];
    let k = if theta < T::lit(1e-4) {
        half * (T::one() + theta * theta / T::lit(6.0))
    } else {
        half * theta / theta.sin()
    };
    Ok(v.map(|e| e * k))
}

/// `xᵀ y`, so that `φ_x(x) = I`.
pub fn so3_translate<T: Scalar>(x: &RotationPoint<T>, y: &RotationPoint<T>) -> RotationPoint<T> {
    RotationPoint {
        r: &x.r.transpose() * &y.r,
    }
}

/// `x z`.
pub fn so3_translate_inv<T: Scalar>(x: &RotationPoint<T>, z: &RotationPoint<T>) -> RotationPoint<T> {
    RotationPoint { r: &x.r * &z.r }
}

/// `‖log(xᵀy)‖_F = √2 |w|`.
pub fn so3_distance<T: Scalar>(x: &RotationPoint<T>, y: &RotationPoint<T>) -> Result<T> {
    let w = so3_log(&so3_translate(x, y))?;
    Ok(T::SQRT_2() * w.iter().map(|v| *v * *v).sum::<T>().sqrt())
}

/// `exp(t log x)`.
pub fn so3_power<T: Scalar>(t: T, x: &RotationPoint<T>) -> Result<RotationPoint<T>> {
    let w = so3_log(x)?;
    Ok(so3_exp(&w.map(|v| v * t)))
}

/// `x exp(t log(xᵀy))`.
pub fn so3_geodesic<T: Scalar>(
    x: &RotationPoint<T>,
    y: &RotationPoint<T>,
    t: T,
) -> Result<RotationPoint<T>> {
    if t == T::zero() {
        return Ok(x.clone());
    }
    if t == T::one() {
        return Ok(y.clone());
    }
    Ok(so3_translate_inv(x, &so3_power(t, &so3_translate(x, y))?))
}
