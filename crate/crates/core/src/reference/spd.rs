//! Symmetric positive definite matrices under the affine-invariant metric.

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, herm_fun, hpd_sqrt_pair, RealMatrix};
use crate::scalar::Scalar;

/// Smallest eigenvalue accepted for an SPD point.
pub const SPD_FLOOR: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SpdPoint<T: Scalar> {
    m: RealMatrix<T>,
}

impl<T: Scalar> SpdPoint<T> {
    pub fn new(m: RealMatrix<T>) -> Result<Self> {
        m.require_square("SPD point")?;
        if !m.is_finite() {
            return Err(Error::NonFinite("SPD point".into()));
        }
        if m.symmetric_residual() > T::tol(1e-9) * (T::one() + m.frobenius_norm()) {
            return Err(Error::OutsideDomain("SPD point is not symmetric".into()));
        }
        let m = m.symmetric_part();
        let min = herm_eig(&m)?.min_eigenvalue();
        if !(min > T::tol(SPD_FLOOR)) {
            return Err(Error::NotPositiveDefinite {
                eigenvalue: min.as_f64(),
            });
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: RealMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &RealMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> RealMatrix<T> {
        self.m
    }
}

fn same_dim<T: Scalar>(x: &SpdPoint<T>, y: &SpdPoint<T>) -> Result<()> {
    if x.dim() == y.dim() {
        Ok(())
    } else {
        Err(Error::Shape(format!("SPD points of size {} and {}", x.dim(), y.dim())))
    }
}

/// `a b a` for symmetric `a`, symmetrized to remove rounding asymmetry.
fn congruence<T: Scalar>(a: &RealMatrix<T>, b: &RealMatrix<T>) -> RealMatrix<T> {
    (&(a * b) * a).symmetric_part()
}

/// `x^{-1/2} y x^{-1/2}`.
pub fn spd_translate<T: Scalar>(x: &SpdPoint<T>, y: &SpdPoint<T>) -> Result<SpdPoint<T>> {
    same_dim(x, y)?;
    let (_, inv_sqrt) = hpd_sqrt_pair(&x.m)?;
    SpdPoint::new(congruence(&inv_sqrt, &y.m))
}

/// `x^{1/2} z x^{1/2}`.
pub fn spd_translate_inv<T: Scalar>(x: &SpdPoint<T>, z: &SpdPoint<T>) -> Result<SpdPoint<T>> {
    same_dim(x, z)?;
    let (sqrt, _) = hpd_sqrt_pair(&x.m)?;
    SpdPoint::new(congruence(&sqrt, &z.m))
}

/// `‖log(x^{-1/2} y x^{-1/2})‖_F`.
pub fn spd_distance<T: Scalar>(x: &SpdPoint<T>, y: &SpdPoint<T>) -> Result<T> {
    let z = spd_translate(x, y)?;
    Ok(spd_log_norm(&z))
}

/// `‖log z‖_F`, the distance from the identity.
pub fn spd_log_norm<T: Scalar>(z: &SpdPoint<T>) -> T {
    herm_eig(&z.m)
        .map(|e| e.eigenvalues.iter().map(|l| l.ln().powi(2)).sum::<T>().sqrt())
        .unwrap_or_else(|_| T::nan())
}

/// Matrix power `x^t`.
pub fn spd_power<T: Scalar>(t: T, x: &SpdPoint<T>) -> Result<SpdPoint<T>> {
    if t.is_zero() {
        return Ok(SpdPoint::identity(x.dim()));
    }
    SpdPoint::new(herm_fun(&x.m, |l| l.powf(t))?.symmetric_part())
}

/// `x^{1/2} (x^{-1/2} y x^{-1/2})ᵗ x^{1/2}`.
pub fn spd_geodesic<T: Scalar>(x: &SpdPoint<T>, y: &SpdPoint<T>, t: T) -> Result<SpdPoint<T>> {
    same_dim(x, y)?;
    if t == T::zero() {
        return Ok(x.clone());
    }
    if t == T::one() {
        return Ok(y.clone());
    }
    let (sqrt, inv_sqrt) = hpd_sqrt_pair(&x.m)?;
    let inner = SpdPoint::new(congruence(&inv_sqrt, &y.m))?;
    let p = spd_power(t, &inner)?;
    SpdPoint::new(congruence(&sqrt, &p.m))
}
