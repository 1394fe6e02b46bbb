//! The Siegel disk: complex symmetric matrices with spectral norm below one.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, hpd_sqrt_pair, solve, solve_right, spectral_norm, ComplexMatrix};
use crate::scalar::Scalar;

/// Default distance kept between a point and the boundary `‖m‖₂ = 1`.
pub const DEFAULT_MARGIN: f64 = 1e-7;

/// Eigenvalues of `c` are clamped below by zero and must stay under `1 − R_CEILING_GAP`.
pub const R_CEILING_GAP: f64 = 1e-14;

/// A point of the Siegel disk.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelDiskPoint<T: Scalar> {
    m: ComplexMatrix<T>,
}

impl<T: Scalar> SiegelDiskPoint<T> {
    /// Validates with the default boundary margin.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        Self::with_margin(m, T::tol(DEFAULT_MARGIN))
    }

    /// Symmetrizes `m` and checks `‖m‖₂ ≤ 1 − margin`.
    pub fn with_margin(m: ComplexMatrix<T>, margin: T) -> Result<Self> {
        let m = symmetrized(m)?;
        let norm = spectral_norm(&m)?;
        let limit = T::one() - margin;
        let slack = T::lit(8.0) * T::epsilon();
        let inside = if margin > T::zero() {
            norm <= limit + slack
        } else {
            norm < T::one()
        };
        if !inside {
            return Err(Error::OutsideDomain(format!(
                "spectral norm {} exceeds {}",
                norm.as_f64(),
                limit.as_f64()
            )));
        }
        Ok(Self { m })
    }

    /// Accepts a computed result: symmetrized, strictly inside the unit ball.
    pub(crate) fn from_computed(m: ComplexMatrix<T>) -> Result<Self> {
        Self::with_margin(m, T::zero()).map_err(|e| match e {
            Error::OutsideDomain(msg) => Error::Range(format!("result left the Siegel disk: {msg}")),
            other => other,
        })
    }

    pub(crate) fn from_trusted(m: ComplexMatrix<T>) -> Self {
        Self { m }
    }

    /// The identity element `0ₙ`.
    pub fn zero(n: usize) -> Self {
        Self {
            m: ComplexMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.m
    }

    pub fn spectral_norm(&self) -> T {
        spectral_norm(&self.m).expect("square matrix")
    }
}

fn symmetrized<T: Scalar>(m: ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    m.require_square("Siegel disk point")?;
    if !m.is_finite() {
        return Err(Error::NonFinite("Siegel disk point".into()));
    }
    let residual = m.symmetric_residual();
    let tol = T::tol(1e-9) * (T::one() + m.frobenius_norm());
    if residual > tol {
        return Err(Error::OutsideDomain(format!(
            "matrix is not complex symmetric (residual {:e})",
            residual.as_f64()
        )));
    }
    Ok(m.symmetric_part())
}

/// Membership predicate: symmetric within tolerance and `‖m‖₂ < 1 − margin`.
pub fn contains<T: Scalar>(m: &ComplexMatrix<T>, margin: T) -> bool {
    if !m.is_square() || !m.is_finite() {
        return false;
    }
    if m.symmetric_residual() > T::tol(1e-9) * (T::one() + m.frobenius_norm()) {
        return false;
    }
    match spectral_norm(&m.symmetric_part()) {
        Ok(norm) => norm < T::one() - margin,
        Err(_) => false,
    }
}

/// The automorphism `φ_x` with its matrix square roots factored once.
///
/// Centering a whole batch on the same point reuses these factors.
#[derive(Clone, Debug)]
pub struct DiskAutomorphism<T: Scalar> {
    x: ComplexMatrix<T>,
    xh: ComplexMatrix<T>,
    /// (I − xxᴴ)^{1/2}, (I − xxᴴ)^{-1/2}
    left: (ComplexMatrix<T>, ComplexMatrix<T>),
    /// (I − xᴴx)^{1/2}, (I − xᴴx)^{-1/2}
    right: (ComplexMatrix<T>, ComplexMatrix<T>),
}

impl<T: Scalar> DiskAutomorphism<T> {
    pub fn new(x: &SiegelDiskPoint<T>) -> Result<Self> {
        let xm = x.matrix().clone();
        let xh = xm.adjoint();
        let left = hpd_sqrt_pair(&(&xm * &xh).identity_minus())?;
        let right = hpd_sqrt_pair(&(&xh * &xm).identity_minus())?;
        Ok(Self {
            x: xm,
            xh,
            left,
            right,
        })
    }

    /// `φ_x(y) = (I−xxᴴ)^{-1/2} (y−x) (I−xᴴy)⁻¹ (I−xᴴx)^{1/2}`.
    pub fn apply_matrix(&self, y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        let diff = y - &self.x;
        let inner = (&self.xh * y).identity_minus();
        let mid = solve_right(&(&self.left.1 * &diff), &inner)?;
        Ok(&mid * &self.right.0)
    }

    pub fn apply(&self, y: &SiegelDiskPoint<T>) -> Result<SiegelDiskPoint<T>> {
        SiegelDiskPoint::from_computed(self.apply_matrix(y.matrix())?)
    }

    /// `φ_x⁻¹(z) = (I−xxᴴ)^{1/2} (I+zxᴴ)⁻¹ (z+x) (I−xᴴx)^{-1/2}`.
    pub fn apply_inv_matrix(&self, z: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        let lhs = (z * &self.xh).identity_plus();
        let sum = z + &self.x;
        let mid = solve(&lhs, &sum)?;
        Ok(&(&self.left.0 * &mid) * &self.right.1)
    }

    pub fn apply_inv(&self, z: &SiegelDiskPoint<T>) -> Result<SiegelDiskPoint<T>> {
        SiegelDiskPoint::from_computed(self.apply_inv_matrix(z.matrix())?)
    }
}

fn same_dim<T: Scalar>(x: &SiegelDiskPoint<T>, y: &SiegelDiskPoint<T>) -> Result<()> {
    if x.dim() == y.dim() {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "Siegel disk points of size {} and {}",
            x.dim(),
            y.dim()
        )))
    }
}

/// `φ_x(y)`, mapping `x` to `0ₙ`.
pub fn automorphism<T: Scalar>(
    x: &SiegelDiskPoint<T>,
    y: &SiegelDiskPoint<T>,
) -> Result<SiegelDiskPoint<T>> {
    same_dim(x, y)?;
    DiskAutomorphism::new(x)?.apply(y)
}

/// `φ_x⁻¹(z)`.
pub fn automorphism_inv<T: Scalar>(
    x: &SiegelDiskPoint<T>,
    z: &SiegelDiskPoint<T>,
) -> Result<SiegelDiskPoint<T>> {
    same_dim(x, z)?;
    DiskAutomorphism::new(x)?.apply_inv(z)
}

/// `Σⱼ log²((1+√rⱼ)/(1−√rⱼ))` over eigenvalues `rⱼ ∈ [0, 1)`.
pub(crate) fn log_ratio_sum<T: Scalar>(rs: impl IntoIterator<Item = T>) -> Result<T> {
    let ceiling = T::one() - T::tol(R_CEILING_GAP);
    let two = T::lit(2.0);
    let mut acc = T::zero();
    for r in rs {
        if !r.is_finite() {
            return Err(Error::NonFinite("distance eigenvalue".into()));
        }
        if r >= ceiling {
            return Err(Error::Range(format!(
                "eigenvalue {} reaches the boundary",
                r.as_f64()
            )));
        }
        let s = r.max(T::zero()).sqrt();
        // log((1+s)/(1-s)) = 2 atanh(s)
        let l = two * s.atanh();
        acc += l * l;
    }
    Ok(acc)
}

/// Squared Kähler distance from `z = φ_x(y)`, via the eigenvalues of `zzᴴ`.
pub(crate) fn kahler_sq_from_image<T: Scalar>(z: &ComplexMatrix<T>) -> Result<T> {
    let c = z * &z.adjoint();
    log_ratio_sum(herm_eig(&c)?.eigenvalues)
}

/// Kähler distance with `c = φ_x(y) φ_x(y)ᴴ`; the default distance formula.
pub fn distance_kahler<T: Scalar>(x: &SiegelDiskPoint<T>, y: &SiegelDiskPoint<T>) -> Result<T> {
    same_dim(x, y)?;
    let z = DiskAutomorphism::new(x)?.apply_matrix(y.matrix())?;
    Ok(kahler_sq_from_image(&z)?.sqrt())
}

/// Kähler distance with
/// `c = I − (I−xxᴴ)^{1/2}(I−yxᴴ)⁻¹(I−yyᴴ)(I−xyᴴ)⁻¹(I−xxᴴ)^{1/2}`.
pub fn distance_kahler_alt<T: Scalar>(
    x: &SiegelDiskPoint<T>,
    y: &SiegelDiskPoint<T>,
) -> Result<T> {
    same_dim(x, y)?;
    let c = identity_minus_image_gram(x, y)?.identity_minus();
    Ok(log_ratio_sum(herm_eig(&c)?.eigenvalues)?.sqrt())
}

/// `(I−xxᴴ)^{1/2}(I−yxᴴ)⁻¹(I−yyᴴ)(I−xyᴴ)⁻¹(I−xxᴴ)^{1/2}`, which equals
/// `I − φ_x(y)φ_x(y)ᴴ`.
pub fn identity_minus_image_gram<T: Scalar>(
    x: &SiegelDiskPoint<T>,
    y: &SiegelDiskPoint<T>,
) -> Result<ComplexMatrix<T>> {
    let (xm, ym) = (x.matrix(), y.matrix());
    let (xh, yh) = (xm.adjoint(), ym.adjoint());
    let (a_sqrt, _) = hpd_sqrt_pair(&(xm * &xh).identity_minus())?;
    let left = (ym * &xh).identity_minus();
    let mid = (ym * &yh).identity_minus();
    let right = (xm * &yh).identity_minus();
    let inner = solve_right(&solve(&left, &mid)?, &right)?;
    Ok((&(&a_sqrt * &inner) * &a_sqrt).hermitian_part())
}

/// Kähler distance through `c = (y−x)(I−xᴴy)⁻¹(yᴴ−xᴴ)(I−xyᴴ)⁻¹`.
///
/// Kept only for cross-checking: `c` is not Hermitian, so its eigenvalues
/// come from the general solver, and the evaluation is rejected as unstable
/// when they are not real and inside `[0, 1)` to within `1e-6`.
pub fn distance_naive<T: Scalar>(x: &SiegelDiskPoint<T>, y: &SiegelDiskPoint<T>) -> Result<T> {
    same_dim(x, y)?;
    let (xm, ym) = (x.matrix(), y.matrix());
    let (xh, yh) = (xm.adjoint(), ym.adjoint());
    let d = ym - xm;
    let first = solve_right(&d, &(&xh * ym).identity_minus())?;
    let second = solve_right(&(&first * &d.adjoint()), &(xm * &yh).identity_minus())?;
    let eigs = crate::linalg::eigenvalues(&second)?;
    let tol = T::tol(1e-6);
    let mut rs = Vec::with_capacity(eigs.len());
    for l in eigs {
        if l.im.abs() > tol || l.re < -tol || l.re >= T::one() {
            return Err(Error::Unstable(format!(
                "eigenvalue {}{:+}i of the naive cross term is not in [0, 1)",
                l.re.as_f64(),
                l.im.as_f64()
            )));
        }
        rs.push(l.re);
    }
    Ok(log_ratio_sum(rs)?.sqrt())
}

/// Kobayashi distance `½ log((1+‖φ_x(y)‖₂)/(1−‖φ_x(y)‖₂))`.
pub fn distance_kobayashi<T: Scalar>(
    x: &SiegelDiskPoint<T>,
    y: &SiegelDiskPoint<T>,
) -> Result<T> {
    same_dim(x, y)?;
    let z = DiskAutomorphism::new(x)?.apply_matrix(y.matrix())?;
    kobayashi_from_norm(spectral_norm(&z)?)
}

pub(crate) fn kobayashi_from_norm<T: Scalar>(q: T) -> Result<T> {
    if !(q < T::one()) {
        return Err(Error::Range(format!("seminorm {} reaches the boundary", q.as_f64())));
    }
    Ok(q.atanh())
}

/// `t ⊗ x = t·x`, since `φ₀` is the identity map.
pub fn scalar_mul<T: Scalar>(t: T, x: &SiegelDiskPoint<T>) -> Result<SiegelDiskPoint<T>> {
    if !(t >= T::zero() && t <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "scalar multiplier {} outside [0, 1]",
            t.as_f64()
        )));
    }
    Ok(SiegelDiskPoint::from_trusted(
        x.matrix().map(|e| Complex::new(e.re * t, e.im * t)),
    ))
}

/// `((1+q)ᵗ − (1−q)ᵗ) / ((1+q)ᵗ + (1−q)ᵗ)`: the seminorm of the point at
/// parameter `t` along the almost geodesic from the origin to a point of
/// seminorm `q`.
pub fn geodesic_radius<T: Scalar>(q: T, t: T) -> T {
    let a = (T::one() + q).powf(t);
    let b = (T::one() - q).powf(t);
    (a - b) / (a + b)
}

/// Almost geodesic `γ(t) = φ_x⁻¹(s(t)/‖z‖₂ · z)`, `z = φ_x(y)`.
pub fn almost_geodesic<T: Scalar>(
    x: &SiegelDiskPoint<T>,
    y: &SiegelDiskPoint<T>,
    t: T,
) -> Result<SiegelDiskPoint<T>> {
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
    let phi = DiskAutomorphism::new(x)?;
    let z = phi.apply_matrix(y.matrix())?;
    let q = spectral_norm(&z)?;
    if q == T::zero() {
        return Ok(x.clone());
    }
    if !(q < T::one()) {
        return Err(Error::Range("φ_x(y) reached the boundary".into()));
    }
    let scaled = z.scale(geodesic_radius(q, t) / q);
    phi.apply_inv(&SiegelDiskPoint::from_trusted(scaled.symmetric_part()))
}
