//! The complex unit ball `𝔹ₙ = {x ∈ ℂⁿ : |x| < 1}` and the scalar Poincaré disc.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::siegel::disk::geodesic_radius;

pub const DEFAULT_MARGIN: f64 = 1e-7;

/// A point of the complex unit ball.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint<T: Scalar> {
    v: Vec<Complex<T>>,
}

/// `⟨a, b⟩ = Σ aⱼ conj(bⱼ)`.
pub fn inner<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::zero(), |acc, (x, y)| acc + x * y.conj())
}

pub fn norm<T: Scalar>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

impl<T: Scalar> BallPoint<T> {
    pub fn new(v: Vec<Complex<T>>) -> Result<Self> {
        Self::with_margin(v, T::tol(DEFAULT_MARGIN))
    }

    /// Checks `|v| ≤ 1 − margin` (strictly below one when `margin` is zero).
    pub fn with_margin(v: Vec<Complex<T>>, margin: T) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Shape("ball point of dimension zero".into()));
        }
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("ball point".into()));
        }
        let r = norm(&v);
        let limit = T::one() - margin;
        let inside = if margin > T::zero() {
            r <= limit + T::lit(8.0) * T::epsilon()
        } else {
            r < T::one()
        };
        if !inside {
            return Err(Error::OutsideDomain(format!(
                "norm {} exceeds {}",
                r.as_f64(),
                limit.as_f64()
            )));
        }
        Ok(Self { v })
    }

    pub(crate) fn from_computed(v: Vec<Complex<T>>) -> Result<Self> {
        Self::with_margin(v, T::zero()).map_err(|e| match e {
            Error::OutsideDomain(msg) => Error::Range(format!("result left the ball: {msg}")),
            other => other,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            v: vec![Complex::zero(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn coords(&self) -> &[Complex<T>] {
        &self.v
    }

    pub fn norm(&self) -> T {
        norm(&self.v)
    }

    fn neg(&self) -> Self {
        Self {
            v: self.v.iter().map(|z| -z).collect(),
        }
    }
}

fn same_dim<T: Scalar>(x: &BallPoint<T>, y: &BallPoint<T>) -> Result<()> {
    if x.dim() == y.dim() {
        Ok(())
    } else {
        Err(Error::Shape(format!("ball points of dimension {} and {}", x.dim(), y.dim())))
    }
}

fn automorphism_raw<T: Scalar>(x: &[Complex<T>], y: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let s = T::one() - norm(x).powi(2);
    if !(s > T::zero()) {
        return Err(Error::Range("automorphism centre on the boundary".into()));
    }
    let sq = s.sqrt();
    let denom = Complex::<T>::one() - inner(y, x);
    if denom.norm() <= T::epsilon() {
        return Err(Error::Range("1 − ⟨y, x⟩ vanishes".into()));
    }
    let w: Vec<Complex<T>> = y.iter().zip(x).map(|(a, b)| (a - b) / denom).collect();
    let coef = inner(&w, x) / (T::one() + sq);
    Ok(w.iter().zip(x).map(|(wi, xi)| xi * coef + wi * sq).collect())
}

/// `φ_x(y) = ω_x((y−x)/(1−⟨y,x⟩))` with
/// `ω_x(z) = ⟨z,x⟩/(1+√(1−|x|²))·x + √(1−|x|²)·z`.
pub fn automorphism<T: Scalar>(x: &BallPoint<T>, y: &BallPoint<T>) -> Result<BallPoint<T>> {
    same_dim(x, y)?;
    BallPoint::from_computed(automorphism_raw(&x.v, &y.v)?)
}

/// `φ_x⁻¹ = φ_{−x}`.
pub fn automorphism_inv<T: Scalar>(x: &BallPoint<T>, z: &BallPoint<T>) -> Result<BallPoint<T>> {
    automorphism(&x.neg(), z)
}

/// `½ log((1+|φ_x(y)|)/(1−|φ_x(y)|))`.
pub fn distance<T: Scalar>(x: &BallPoint<T>, y: &BallPoint<T>) -> Result<T> {
    same_dim(x, y)?;
    let q = norm(&automorphism_raw(&x.v, &y.v)?);
    if !(q < T::one()) {
        return Err(Error::Range(format!("|φ_x(y)| = {} reaches the boundary", q.as_f64())));
    }
    Ok(q.atanh())
}

/// Poincaré distance on the unit disc of ℂ.
pub fn poincare_distance<T: Scalar>(a: Complex<T>, b: Complex<T>) -> Result<T> {
    if !(a.norm() < T::one() && b.norm() < T::one()) {
        return Err(Error::OutsideDomain("Poincaré distance needs |a|, |b| < 1".into()));
    }
    let m = ((a - b) / (Complex::<T>::one() - a * b.conj())).norm();
    if !(m < T::one()) {
        return Err(Error::Range("points numerically on the boundary".into()));
    }
    Ok(m.atanh())
}

/// `t ⊗ x = t·x`.
pub fn scalar_mul<T: Scalar>(t: T, x: &BallPoint<T>) -> Result<BallPoint<T>> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "scalar multiplier {} outside [0, 1]",
            t.as_f64()
        )));
    }
    Ok(BallPoint {
        v: x.v.iter().map(|z| z * t).collect(),
    })
}

/// Almost geodesic `γ(t) = φ_x⁻¹(s(t)/|z| · z)`, `z = φ_x(y)`.
pub fn almost_geodesic<T: Scalar>(x: &BallPoint<T>, y: &BallPoint<T>, t: T) -> Result<BallPoint<T>> {
    same_dim(x, y)?;
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "curve parameter {} outside [0, 1]",
            t.as_f64()
        )));
    }
    if t == T::zero() {
        return Ok(x.clone());
    }
    if t == T::one() {
        return Ok(y.clone());
    }
    let z = automorphism_raw(&x.v, &y.v)?;
    let q = norm(&z);
    if q == T::zero() {
        return Ok(x.clone());
    }
    if !(q < T::one()) {
        return Err(Error::Range("φ_x(y) reached the boundary".into()));
    }
    let k = geodesic_radius(q, t) / q;
    let scaled: Vec<Complex<T>> = z.iter().map(|c| c * k).collect();
    BallPoint::from_computed(automorphism_raw(&x.neg().v, &scaled)?)
}
