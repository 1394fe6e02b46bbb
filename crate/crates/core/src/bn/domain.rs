//! The operations a domain has to supply for batch normalization, and their
//! implementations on the Siegel disk, the unit ball, SPD matrices and SO(3).

use std::fmt::Debug;

use num_complex::Complex;
use rayon::prelude::*;

use crate::ball::{self, BallPoint};
use crate::error::{Error, Result};
use crate::linalg::{herm_exp, spectral_norm, RealMatrix};
use crate::reference::{
    so3_distance, so3_exp, so3_log, so3_power, so3_translate, so3_translate_inv, spd_distance,
    spd_power, spd_translate, spd_translate_inv, RotationPoint, SpdPoint,
};
use crate::scalar::Scalar;
use crate::siegel::disk::{self, kahler_sq_from_image, kobayashi_from_norm};
use crate::siegel::{cayley, DiskAutomorphism, SiegelDiskPoint, UpperHalfPoint};

/// Batches at least this large are processed in parallel.
const PARALLEL_BATCH: usize = 64;

/// Solves for the curve parameter of the almost geodesic:
/// `α = ((1+q)ᵗ − (1−q)ᵗ) / (q((1+q)ᵗ + (1−q)ᵗ))`.
pub fn alpha_curve<T: Scalar>(q: T, t: T) -> Result<T> {
    if !(q > T::zero() && q < T::one()) {
        return Err(Error::InvalidArgument(format!(
            "seminorm {} outside (0, 1)",
            q.as_f64()
        )));
    }
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "curve parameter {} outside [0, 1]",
            t.as_f64()
        )));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    if t == T::one() {
        return Ok(T::one());
    }
    Ok(disk::geodesic_radius(q, t) / q)
}

/// A domain with automorphisms `φ_x` sending `x` to the identity element.
pub trait NormalizedDomain<T: Scalar>: Sync {
    type Point: Clone + Debug + PartialEq + Send + Sync;

    /// The identity element `0_ℳ`.
    fn identity(&self) -> Self::Point;

    /// `φ_m(x)`.
    fn center(&self, m: &Self::Point, x: &Self::Point) -> Result<Self::Point>;

    /// `φ_g⁻¹(x)`.
    fn bias(&self, g: &Self::Point, x: &Self::Point) -> Result<Self::Point>;

    /// `t ⊗ x = φ₀⁻¹(t φ₀(x))` for `t ∈ [0, 1]`.
    fn scalar_mul(&self, t: T, x: &Self::Point) -> Result<Self::Point>;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<T>;

    /// Seminorm of the ambient representation, when the distance is of
    /// Kobayashi type.
    fn seminorm(&self, _x: &Self::Point) -> Result<Option<T>> {
        Ok(None)
    }

    /// The `α` at which `d(0, α ⊗ z) = t d(0, z)`; `t` itself when there is no seminorm.
    fn alpha(&self, z: &Self::Point, t: T) -> Result<T> {
        match self.seminorm(z)? {
            Some(q) if q > T::zero() => alpha_curve(q, t),
            _ => Ok(t),
        }
    }

    fn center_all(&self, m: &Self::Point, xs: &[Self::Point]) -> Result<Vec<Self::Point>> {
        map_batch(xs, |x| self.center(m, x))
    }

    fn bias_all(&self, g: &Self::Point, xs: &[Self::Point]) -> Result<Vec<Self::Point>> {
        map_batch(xs, |x| self.bias(g, x))
    }

    /// `d²(x, pⱼ)` for every `pⱼ`.
    fn sq_distances_to(&self, x: &Self::Point, points: &[Self::Point]) -> Result<Vec<T>> {
        map_batch(points, |p| self.distance(x, p).map(|d| d * d))
    }
}

/// A Euclidean parameterization used by the Fréchet mean solver.
pub trait FrechetChart<T: Scalar>: NormalizedDomain<T> {
    fn chart_dim(&self) -> usize;

    /// Starting parameters for a batch.
    fn chart_init(&self, points: &[Self::Point]) -> Result<Vec<T>>;

    fn from_chart(&self, params: &[T]) -> Result<Self::Point>;

    /// Closed-form gradient of `Σ wⱼ d²(pⱼ, x(params))`, when available.
    fn objective_gradient(
        &self,
        _params: &[T],
        _points: &[Self::Point],
        _weights: &[T],
    ) -> Option<Result<Vec<T>>> {
        None
    }
}

/// Order-preserving map over a batch, parallel for large batches.
pub(crate) fn map_batch<P, Q, F>(xs: &[P], f: F) -> Result<Vec<Q>>
where
    P: Sync,
    Q: Send,
    F: Fn(&P) -> Result<Q> + Sync + Send,
{
    if xs.len() >= PARALLEL_BATCH {
        xs.par_iter().map(f).collect()
    } else {
        xs.iter().map(f).collect()
    }
}

/// Almost geodesic `γ(t) = φ_x⁻¹(α(t) ⊗ φ_x(y))`.
pub fn almost_geodesic<T: Scalar, D: NormalizedDomain<T>>(
    dom: &D,
    x: &D::Point,
    y: &D::Point,
    t: T,
) -> Result<D::Point> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "curve parameter {} outside [0, 1]",
            t.as_f64()
        )));
    }
    if t == T::zero() || x == y {
        return Ok(x.clone());
    }
    if t == T::one() {
        return Ok(y.clone());
    }
    let z = dom.center(x, y)?;
    if dom.seminorm(&z)? == Some(T::zero()) {
        return Ok(x.clone());
    }
    let a = dom.alpha(&z, t)?;
    dom.bias(x, &dom.scalar_mul(a, &z)?)
}

/// Distance used on the Siegel disk.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DiskMetric {
    #[default]
    Kahler,
    Kobayashi,
}

/// The Siegel disk of `n×n` complex symmetric matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiegelDisk {
    pub n: usize,
    pub metric: DiskMetric,
}

impl SiegelDisk {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            metric: DiskMetric::Kahler,
        }
    }

    pub fn with_metric(n: usize, metric: DiskMetric) -> Self {
        Self { n, metric }
    }

    fn image_distance<T: Scalar>(&self, z: &crate::linalg::ComplexMatrix<T>) -> Result<T> {
        match self.metric {
            DiskMetric::Kahler => Ok(kahler_sq_from_image(z)?.sqrt()),
            DiskMetric::Kobayashi => kobayashi_from_norm(spectral_norm(z)?),
        }
    }

    fn check<T: Scalar>(&self, x: &SiegelDiskPoint<T>) -> Result<()> {
        if x.dim() == self.n {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "point of size {} on a disk of size {}",
                x.dim(),
                self.n
            )))
        }
    }
}

fn is_origin<T: Scalar>(x: &SiegelDiskPoint<T>) -> bool {
    x.matrix().as_slice().iter().all(|e| e.re == T::zero() && e.im == T::zero())
}

impl<T: Scalar> NormalizedDomain<T> for SiegelDisk {
    type Point = SiegelDiskPoint<T>;

    fn identity(&self) -> Self::Point {
        SiegelDiskPoint::zero(self.n)
    }

    fn center(&self, m: &Self::Point, x: &Self::Point) -> Result<Self::Point> {
        self.check(m)?;
        self.check(x)?;
        if is_origin(m) {
            return Ok(x.clone());
        }
        DiskAutomorphism::new(m)?.apply(x)
    }

    fn bias(&self, g: &Self::Point, x: &Self::Point) -> Result<Self::Point> {
        self.check(g)?;
        self.check(x)?;
        if is_origin(g) {
            return Ok(x.clone());
        }
        DiskAutomorphism::new(g)?.apply_inv(x)
    }

    fn scalar_mul(&self, t: T, x: &Self::Point) -> Result<Self::Point> {
        disk::scalar_mul(t, x)
    }

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<T> {
        match self.metric {
            DiskMetric::Kahler => disk::distance_kahler(x, y),
            DiskMetric::Kobayashi => disk::distance_kobayashi(x, y),
        }
    }

    fn seminorm(&self, x: &Self::Point) -> Result<Option<T>> {
        Ok(Some(x.spectral_norm()))
    }

    fn center_all(&self, m: &Self::Point, xs: &[Self::Point]) -> Result<Vec<Self::Point>> {
        if is_origin(m) {
            return Ok(xs.to_vec());
        }
        let phi = DiskAutomorphism::new(m)?;
        map_batch(xs, |x| {
            self.check(x)?;
            phi.apply(x)
        })
    }

    fn bias_all(&self, g: &Self::Point, xs: &[Self::Point]) -> Result<Vec<Self::Point>> {
        if is_origin(g) {
            return Ok(xs.to_vec());
        }
        let phi = DiskAutomorphism::new(g)?;
        map_batch(xs, |x| {
            self.check(x)?;
            phi.apply_inv(x)
        })
    }

    fn sq_distances_to(&self, x: &Self::Point, points: &[Self::Point]) -> Result<Vec<T>> {
        // d(p, x) = d(x, p), so one factorization at x serves the whole batch.
        let phi = DiskAutomorphism::new(x)?;
        map_batch(points, |p| {
            let d = self.image_distance(&phi.apply_matrix(p.matrix())?)?;
            Ok(d * d)
        })
    }
}

/// Number of entries on and below the diagonal of an `n×n` matrix.
pub fn tri_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Symmetric matrix with diagonal `aᵢᵢ` and off-diagonal entries `aᵢⱼ/2`,
/// the symmetrization of the row-major lower-triangular fill of `a`.
pub fn sym_from_lower<T: Scalar>(n: usize, a: &[T]) -> RealMatrix<T> {
    let mut m = RealMatrix::zeros(n, n);
    let half = T::lit(0.5);
    let mut k = 0;
    for i in 0..n {
        for j in 0..=i {
            if i == j {
                m[(i, i)] = a[k];
            } else {
                m[(i, j)] = a[k] * half;
                m[(j, i)] = a[k] * half;
            }
            k += 1;
        }
    }
    m
}

/// `x = cayley(φ₁(a) + i exp(φ₁(b)))` with `φ₁` = [`sym_from_lower`].
impl<T: Scalar> FrechetChart<T> for SiegelDisk {
    fn chart_dim(&self) -> usize {
        2 * tri_len(self.n)
    }

    fn chart_init(&self, _points: &[Self::Point]) -> Result<Vec<T>> {
        Ok(vec![T::zero(); 2 * tri_len(self.n)])
    }

    fn from_chart(&self, params: &[T]) -> Result<Self::Point> {
        let m = tri_len(self.n);
        if params.len() != 2 * m {
            return Err(Error::Shape(format!(
                "{} chart parameters, expected {}",
                params.len(),
                2 * m
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("chart parameters".into()));
        }
        let u = sym_from_lower(self.n, &params[..m]);
        let v = herm_exp(&sym_from_lower(self.n, &params[m..]))?.symmetric_part();
        cayley(&UpperHalfPoint::new(u, v)?)
    }
}

/// The complex unit ball in `ℂⁿ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitBall {
    pub n: usize,
    /// Chart parameters outside the ball are pulled back to radius `1 − margin`.
    pub margin: f64,
}

impl UnitBall {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            margin: ball::DEFAULT_MARGIN,
        }
    }

    fn check<T: Scalar>(&self, x: &BallPoint<T>) -> Result<()> {
        if x.dim() == self.n {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "point of dimension {} in a ball of dimension {}",
                x.dim(),
                self.n
            )))
        }
    }
}

fn is_ball_origin<T: Scalar>(x: &BallPoint<T>) -> bool {
    x.coords().iter().all(|z| z.re == T::zero() && z.im == T::zero())
}

impl<T: Scalar> NormalizedDomain<T> for UnitBall {
    type Point = BallPoint<T>;

    fn identity(&self) -> Self::Point {
        BallPoint::zero(self.n)
    }

    fn center(&self, m: &Self::Point, x: &Self::Point) -> Result<Self::Point> {
        self.check(m)?;
        if is_ball_origin(m) {
            self.check(x)?;
            return Ok(x.clone());
        }
        ball::automorphism(m, x)
    }

    fn bias(&self, g: &Self::Point, x: &Self::Point) -> Result<Self::Point> {
        self.check(g)?;
        if is_ball_origin(g) {
            self.check(x)?;
            return Ok(x.clone());
        }
        ball::automorphism_inv(g, x)
    }

    fn scalar_mul(&self, t: T, x: &Self::Point) -> Result<Self::Point> {
        ball::scalar_mul(t, x)
    }

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<T> {
        ball::distance(x, y)
    }

    fn seminorm(&self, x: &Self::Point) -> Result<Option<T>> {
        Ok(Some(x.norm()))
    }
}

/// Real and imaginary parts, renormalized into the ball when outside.
impl<T: Scalar> FrechetChart<T> for UnitBall {
    fn chart_dim(&self) -> usize {
        2 * self.n
    }

    fn chart_init(&self, points: &[Self::Point]) -> Result<Vec<T>> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty batch".into()))?;
        self.check(first)?;
        let mut p = Vec::with_capacity(2 * self.n);
        p.extend(first.coords().iter().map(|z| z.re));
        p.extend(first.coords().iter().map(|z| z.im));
        Ok(p)
    }

    fn from_chart(&self, params: &[T]) -> Result<Self::Point> {
        if params.len() != 2 * self.n {
            return Err(Error::Shape(format!(
                "{} chart parameters, expected {}",
                params.len(),
                2 * self.n
            )));
        }
        let mut v: Vec<Complex<T>> = (0..self.n)
            .map(|k| Complex::new(params[k], params[self.n + k]))
            .collect();
        let r = ball::norm(&v);
        if !r.is_finite() {
            return Err(Error::NonFinite("chart parameters".into()));
        }
        let limit = T::one() - T::tol(self.margin);
        if r > limit {
            let s = limit / r;
            v.iter_mut().for_each(|z| *z *= s);
        }
        BallPoint::new(v)
    }

    /// Uses `|φ_x(y)|² = 1 − (1−|x|²)(1−|y|²)/|1−⟨y,x⟩|²`; exact inside the
    /// ball, where the renormalization is inactive.
    fn objective_gradient(
        &self,
        params: &[T],
        points: &[Self::Point],
        weights: &[T],
    ) -> Option<Result<Vec<T>>> {
        let n = self.n;
        if params.len() != 2 * n {
            return None;
        }
        let x: Vec<Complex<T>> = (0..n).map(|k| Complex::new(params[k], params[n + k])).collect();
        let a = T::one() - x.iter().map(|z| z.norm_sqr()).sum::<T>();
        if !(a > T::zero()) {
            return None;
        }
        let two = T::lit(2.0);
        let mut grad = vec![T::zero(); 2 * n];
        for (p, &w) in points.iter().zip(weights) {
            let y = p.coords();
            let b = T::one() - y.iter().map(|z| z.norm_sqr()).sum::<T>();
            let c = Complex::new(T::one(), T::zero()) - ball::inner(y, &x);
            let c2 = c.norm_sqr();
            let q2 = (T::one() - a * b / c2).max(T::zero());
            let q = q2.sqrt();
            if !(q < T::one()) {
                return Some(Err(Error::Range("point on the boundary".into())));
            }
            // d(atanh(q)²)/d(q²) = atanh(q) / (q (1 − q²))
            let ratio = if q > T::tol(1e-8) {
                q.atanh() / q
            } else {
                T::one()
            };
            let outer = w * ratio / (T::one() - q2);
            let cc = c.conj();
            for k in 0..n {
                let da_re = -two * x[k].re;
                let da_im = -two * x[k].im;
                let dc2_re = two * (-(cc * y[k])).re;
                let dc2_im = two * (cc * y[k] * Complex::new(T::zero(), T::one())).re;
                let dq2_re = -b * (da_re / c2 - a * dc2_re / (c2 * c2));
                let dq2_im = -b * (da_im / c2 - a * dc2_im / (c2 * c2));
                grad[k] += outer * dq2_re;
                grad[n + k] += outer * dq2_im;
            }
        }
        Some(Ok(grad))
    }
}

/// Symmetric positive definite matrices with the affine-invariant metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpdManifold {
    pub n: usize,
}

impl<T: Scalar> NormalizedDomain<T> for SpdManifold {
    type Point = SpdPoint<T>;

    fn identity(&self) -> Self::Point {
        SpdPoint::identity(self.n)
    }

    fn center(&self, m: &Self::Point, x: &Self::Point) -> Result<Self::Point> {
        spd_translate(m, x)
    }

    fn bias(&self, g: &Self::Point, x: &Self::Point) -> Result<Self::Point> {
        spd_translate_inv(g, x)
    }

    fn scalar_mul(&self, t: T, x: &Self::Point) -> Result<Self::Point> {
        spd_power(t, x)
    }

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<T> {
        spd_distance(x, y)
    }
}

/// `x = exp(φ₁(a))`.
impl<T: Scalar> FrechetChart<T> for SpdManifold {
    fn chart_dim(&self) -> usize {
        tri_len(self.n)
    }

    fn chart_init(&self, _points: &[Self::Point]) -> Result<Vec<T>> {
        Ok(vec![T::zero(); tri_len(self.n)])
    }

    fn from_chart(&self, params: &[T]) -> Result<Self::Point> {
        if params.len() != tri_len(self.n) {
            return Err(Error::Shape("SPD chart parameters".into()));
        }
        SpdPoint::new(herm_exp(&sym_from_lower(self.n, params))?.symmetric_part())
    }
}

/// The rotation group SO(3).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RotationGroup;

impl<T: Scalar> NormalizedDomain<T> for RotationGroup {
    type Point = RotationPoint<T>;

    fn identity(&self) -> Self::Point {
        RotationPoint::identity()
    }

    fn center(&self, m: &Self::Point, x: &Self::Point) -> Result<Self::Point> {
        Ok(so3_translate(m, x))
    }

    fn bias(&self, g: &Self::Point, x: &Self::Point) -> Result<Self::Point> {
        Ok(so3_translate_inv(g, x))
    }

    fn scalar_mul(&self, t: T, x: &Self::Point) -> Result<Self::Point> {
        so3_power(t, x)
    }

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<T> {
        so3_distance(x, y)
    }
}

/// Axis-angle coordinates.
impl<T: Scalar> FrechetChart<T> for RotationGroup {
    fn chart_dim(&self) -> usize {
        3
    }

    fn chart_init(&self, points: &[Self::Point]) -> Result<Vec<T>> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty batch".into()))?;
        Ok(so3_log(first)?.to_vec())
    }

    fn from_chart(&self, params: &[T]) -> Result<Self::Point> {
        match params {
            [a, b, c] => Ok(so3_exp(&[*a, *b, *c])),
            _ => Err(Error::Shape("rotation chart has three parameters".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::spd_geodesic;
    use crate::sampling::{random_ball_point, random_disk_point, random_spd};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn alpha_curve_values() {
        assert_eq!(alpha_curve(0.5, 0.0).unwrap(), 0.0);
        assert_eq!(alpha_curve(0.5, 1.0).unwrap(), 1.0);
        assert!((alpha_curve(0.5f64, 0.5).unwrap() - 0.535_898_384_862_245_4).abs() < 1e-12);
        assert!(alpha_curve(1.0, 0.5).is_err());
        assert!(alpha_curve(0.0, 0.5).is_err());
        let mut prev = 0.0;
        for k in 1..=20 {
            let a = alpha_curve(0.7, k as f64 / 20.0).unwrap();
            assert!(a > prev);
            prev = a;
        }
    }

    #[test]
    fn disk_laws() {
        let dom = SiegelDisk::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let m = random_disk_point::<f64, _>(&mut rng, 2, 0.8);
        let x = random_disk_point::<f64, _>(&mut rng, 2, 0.8);
        assert!(dom.center(&m, &m).unwrap().spectral_norm() < 1e-9);
        let back = dom.bias(&m, &dom.center(&m, &x).unwrap()).unwrap();
        assert!((back.matrix() - x.matrix()).max_abs() < 1e-9);
        let all = dom.center_all(&m, &[x.clone(), m.clone()]).unwrap();
        assert_eq!(all[0], dom.center(&m, &x).unwrap());
    }

    #[test]
    fn generic_geodesic_matches_disk_geodesic() {
        let dom = SiegelDisk::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        for _ in 0..10 {
            let x = random_disk_point::<f64, _>(&mut rng, 3, 0.8);
            let y = random_disk_point::<f64, _>(&mut rng, 3, 0.8);
            let a = almost_geodesic(&dom, &x, &y, 0.3).unwrap();
            let b = disk::almost_geodesic(&x, &y, 0.3).unwrap();
            assert!((a.matrix() - b.matrix()).max_abs() < 1e-12);
        }
        let x = random_disk_point::<f64, _>(&mut rng, 3, 0.8);
        assert_eq!(almost_geodesic(&dom, &x, &x, 0.4).unwrap(), x);
    }

    #[test]
    fn generic_geodesic_is_spd_geodesic() {
        let dom = SpdManifold { n: 3 };
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let x = random_spd::<f64, _>(&mut rng, 3);
        let y = random_spd::<f64, _>(&mut rng, 3);
        for t in [0.25, 0.5, 0.75] {
            let a = almost_geodesic(&dom, &x, &y, t).unwrap();
            let b = spd_geodesic(&x, &y, t).unwrap();
            assert!((a.matrix() - b.matrix()).max_abs() < 1e-9);
        }
    }

    #[test]
    fn disk_chart_origin_and_range() {
        let dom = SiegelDisk::new(2);
        let zero: SiegelDiskPoint<f64> = dom.from_chart(&[0.0; 6]).unwrap();
        assert!(zero.spectral_norm() < 1e-15);
        let p: SiegelDiskPoint<f64> = dom.from_chart(&[0.3, -1.0, 0.2, 0.5, 0.1, -0.4]).unwrap();
        assert!(p.spectral_norm() < 1.0);
        let s = sym_from_lower(2, &[1.0, 2.0, 3.0]);
        assert_eq!(s, RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 3.0]]).unwrap());
    }

    #[test]
    fn ball_chart_renormalizes() {
        let dom = UnitBall::new(1);
        let p: BallPoint<f64> = dom.from_chart(&[3.0, 4.0]).unwrap();
        assert!((p.norm() - (1.0 - 1e-7)).abs() < 1e-12);
    }

    #[test]
    fn ball_gradient_matches_central_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(84);
        for n in 1..=3 {
            let dom = UnitBall::new(n);
            let pts: Vec<BallPoint<f64>> =
                (0..5).map(|_| random_ball_point(&mut rng, n, 0.8)).collect();
            let x = random_ball_point::<f64, _>(&mut rng, n, 0.6);
            let params = dom.chart_init(std::slice::from_ref(&x)).unwrap();
            let w = vec![1.0; pts.len()];
            let g = dom.objective_gradient(&params, &pts, &w).unwrap().unwrap();
            let f = |p: &[f64]| -> f64 {
                let x = dom.from_chart(p).unwrap();
                pts.iter().map(|y| ball::distance(&x, y).unwrap().powi(2)).sum()
            };
            for k in 0..2 * n {
                let h = 1e-5;
                let mut a = params.clone();
                let mut b = params.clone();
                a[k] += h;
                b[k] -= h;
                let fd = (f(&a) - f(&b)) / (2.0 * h);
                assert!((fd - g[k]).abs() <= 1e-5 * (1.0 + g[k].abs()), "{fd} {}", g[k]);
            }
        }
    }

    #[test]
    fn shape_mismatch_reported() {
        let dom = SiegelDisk::new(2);
        let x = SiegelDiskPoint::<f64>::zero(3);
        assert!(matches!(dom.center(&x, &x), Err(Error::Shape(_))));
    }
}
