//! The Siegel upper half space `u + iv` and the symplectic group acting on it.


use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, herm_eig, hpd_sqrt_pair, solve_right, ComplexMatrix, RealMatrix};
use crate::scalar::Scalar;

use super::disk::log_ratio_sum;

/// A point `u + iv` with `u` real symmetric and `v` symmetric positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperHalfPoint<T: Scalar> {
    u: RealMatrix<T>,
    v: RealMatrix<T>,
}

impl<T: Scalar> UpperHalfPoint<T> {
    pub fn new(u: RealMatrix<T>, v: RealMatrix<T>) -> Result<Self> {
        let n = u.require_square("real part")?;
        if v.rows() != n || v.cols() != n {
            return Err(Error::Shape("real and imaginary parts differ in size".into()));
        }
        if !u.is_finite() || !v.is_finite() {
            return Err(Error::NonFinite("upper half space point".into()));
        }
        for (m, what) in [(&u, "real part"), (&v, "imaginary part")] {
            if m.symmetric_residual() > T::tol(1e-9) * (T::one() + m.frobenius_norm()) {
                return Err(Error::OutsideDomain(format!("{what} is not symmetric")));
            }
        }
        let (u, v) = (u.symmetric_part(), v.symmetric_part());
        let min = herm_eig(&v)?.min_eigenvalue();
        if !(min > T::tol(1e-10)) {
            return Err(Error::OutsideDomain(format!(
                "imaginary part has eigenvalue {:e}",
                min.as_f64()
            )));
        }
        Ok(Self { u, v })
    }

    /// Splits a complex matrix into `u + iv`.
    pub fn from_complex(m: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(m.re(), m.im())
    }

    /// `i·I`, the base point.
    pub fn base(n: usize) -> Self {
        Self {
            u: RealMatrix::zeros(n, n),
            v: RealMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn real(&self) -> &RealMatrix<T> {
        &self.u
    }

    pub fn imag(&self) -> &RealMatrix<T> {
        &self.v
    }

    pub fn to_complex(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_parts(&self.u, &self.v).expect("validated shapes")
    }
}

/// A real `2n × 2n` matrix `g` with `gᵀ e g = e`, `e = [[0, I], [−I, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix<T: Scalar> {
    g: RealMatrix<T>,
}

/// The standard symplectic form `e₂ₙ`.
pub fn symplectic_form<T: Scalar>(n: usize) -> RealMatrix<T> {
    let zero = RealMatrix::zeros(n, n);
    let id = RealMatrix::identity(n);
    RealMatrix::from_blocks(&zero, &id, &(-&id), &zero)
}

impl<T: Scalar> SymplecticMatrix<T> {
    /// Checks `‖gᵀ e g − e‖_F ≤ 1e-8·max(1, ‖g‖_F²)`.
    pub fn new(g: RealMatrix<T>) -> Result<Self> {
        let dim = g.require_square("symplectic matrix")?;
        if dim % 2 != 0 || dim == 0 {
            return Err(Error::Shape(format!("symplectic matrix of odd size {dim}")));
        }
        let residual = symplectic_residual(&g);
        let scale = g.frobenius_norm();
        if residual > T::tol(1e-8) * (scale * scale).max(T::one()) {
            return Err(Error::InvalidArgument(format!(
                "matrix is not symplectic (residual {:e})",
                residual.as_f64()
            )));
        }
        Ok(Self { g })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            g: RealMatrix::identity(2 * n),
        }
    }

    pub fn half_dim(&self) -> usize {
        self.g.rows() / 2
    }

    pub fn matrix(&self) -> &RealMatrix<T> {
        &self.g
    }

    /// Blocks `(a, b, c, d)` of `[[a, b], [c, d]]`.
    pub fn blocks(&self) -> [RealMatrix<T>; 4] {
        let n = self.half_dim();
        [
            self.g.block(0, 0, n, n),
            self.g.block(0, n, n, n),
            self.g.block(n, 0, n, n),
            self.g.block(n, n, n, n),
        ]
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Self::new(self.g.matmul(&other.g)?)
    }
}

pub fn symplectic_residual<T: Scalar>(g: &RealMatrix<T>) -> T {
    let e = symplectic_form::<T>(g.rows() / 2);
    (&(&g.transpose() * &e) * g - &e).frobenius_norm()
}

pub fn is_symplectic<T: Scalar>(g: &RealMatrix<T>) -> bool {
    g.is_square() && g.rows().is_multiple_of(2) && symplectic_residual(g) <= T::tol(1e-8)
}

/// Cross-ratio `R(x,y) = (x−y)(x−ȳ)⁻¹(x̄−ȳ)(x̄−y)⁻¹`.
pub fn cross_ratio<T: Scalar>(
    x: &UpperHalfPoint<T>,
    y: &UpperHalfPoint<T>,
) -> Result<ComplexMatrix<T>> {
    if x.dim() != y.dim() {
        return Err(Error::Shape("upper half space points differ in size".into()));
    }
    let xc = x.to_complex();
    let yc = y.to_complex();
    let (xb, yb) = (xc.conj(), yc.conj());
    let first = solve_right(&(&xc - &yc), &(&xc - &yb))?;
    let second = solve_right(&(&xb - &yb), &(&xb - &yc))?;
    Ok(&first * &second)
}

/// Riemannian distance from the eigenvalues of the cross-ratio.
pub fn distance<T: Scalar>(x: &UpperHalfPoint<T>, y: &UpperHalfPoint<T>) -> Result<T> {
    let r = cross_ratio(x, y)?;
    let tol = T::tol(1e-8);
    let mut rs = Vec::with_capacity(r.rows());
    for l in eigenvalues(&r)? {
        if l.im.abs() > tol || l.re < -tol || l.re >= T::one() {
            return Err(Error::Unstable(format!(
                "cross-ratio eigenvalue {}{:+}i is not in [0, 1)",
                l.re.as_f64(),
                l.im.as_f64()
            )));
        }
        rs.push(l.re);
    }
    Ok(log_ratio_sum(rs)?.sqrt())
}

/// Generalized linear fractional transformation `g[x] = (ax+b)(cx+d)⁻¹`.
pub fn action<T: Scalar>(g: &SymplecticMatrix<T>, x: &UpperHalfPoint<T>) -> Result<UpperHalfPoint<T>> {
    if g.half_dim() != x.dim() {
        return Err(Error::Shape("symplectic matrix and point differ in size".into()));
    }
    let [a, b, c, d] = g.blocks();
    let xc = x.to_complex();
    let num = &(&a.to_complex() * &xc) + &b.to_complex();
    let den = &(&c.to_complex() * &xc) + &d.to_complex();
    let m = solve_right(&num, &den).map_err(|e| match e {
        Error::Singular { rcond } => Error::Range(format!("cx + d is singular (rcond {rcond:e})")),
        other => other,
    })?;
    UpperHalfPoint::from_complex(&m)
}

/// `g_{u+iv} = [[v^{1/2}, u v^{-1/2}], [0, v^{-1/2}]]`, which sends `iI` to `u + iv`.
pub fn point_to_group<T: Scalar>(x: &UpperHalfPoint<T>) -> Result<SymplecticMatrix<T>> {
    let n = x.dim();
    let (vs, vis) = hpd_sqrt_pair(x.imag())?;
    let g = RealMatrix::from_blocks(&vs, &(x.real() * &vis), &RealMatrix::zeros(n, n), &vis);
    SymplecticMatrix::new(g)
}

/// `[[a, b], [−b, a]]` for a unitary `a + ib`: the stabilizer of `iI`.
pub fn stabilizer_element<T: Scalar>(unitary: &ComplexMatrix<T>) -> Result<SymplecticMatrix<T>> {
    let a = unitary.re();
    let b = unitary.im();
    SymplecticMatrix::new(RealMatrix::from_blocks(&a, &b, &(-&b), &a))
}
