use num_traits::{Float, Zero};


use super::eigen::herm_eig;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{Entry, Scalar};

/// Smallest eigenvalue accepted as positive by [`hpd_fun`].
pub const HPD_FLOOR: f64 = 1e-12;

/// `U f(Λ) Uᴴ` for a Hermitian matrix, with no sign restriction on the spectrum.
pub fn herm_fun<E: Entry>(a: &Matrix<E>, f: impl Fn(E::Real) -> E::Real) -> Result<Matrix<E>> {
    Ok(herm_eig(a)?.reconstruct(f))
}

/// `U f(Λ) Uᴴ` for a Hermitian positive definite matrix.
///
/// Fails with [`Error::NotPositiveDefinite`] naming the smallest eigenvalue
/// when it does not exceed [`HPD_FLOOR`]; it never clamps.
pub fn hpd_fun<E: Entry>(a: &Matrix<E>, f: impl Fn(E::Real) -> E::Real) -> Result<Matrix<E>> {
    let eig = herm_eig(a)?;
    let min = eig.min_eigenvalue();
    if !(min > E::Real::tol(HPD_FLOOR)) {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: min.as_f64(),
        });
    }
    Ok(eig.reconstruct(f))
}

pub fn hpd_sqrt<E: Entry>(a: &Matrix<E>) -> Result<Matrix<E>> {
    hpd_fun(a, |l| l.sqrt())
}

pub fn hpd_inv_sqrt<E: Entry>(a: &Matrix<E>) -> Result<Matrix<E>> {
    hpd_fun(a, |l| l.sqrt().recip())
}

/// Both `a^{1/2}` and `a^{-1/2}` from one factorization.
pub fn hpd_sqrt_pair<E: Entry>(a: &Matrix<E>) -> Result<(Matrix<E>, Matrix<E>)> {
    let eig = herm_eig(a)?;
    let min = eig.min_eigenvalue();
    if !(min > E::Real::tol(HPD_FLOOR)) {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: min.as_f64(),
        });
    }
    Ok((
        eig.reconstruct(|l| l.sqrt()),
        eig.reconstruct(|l| l.sqrt().recip()),
    ))
}

/// Largest singular value, computed as `sqrt(λ_max(aᴴa))`.
///
/// Accurate for the largest singular value; small singular values lose
/// about half their digits through the squaring, which does not matter for
/// the norm.
pub fn spectral_norm<E: Entry>(a: &Matrix<E>) -> Result<E::Real> {
    a.require_square("spectral_norm input")?;
    if a.rows() == 0 {
        return Ok(E::Real::zero());
    }
    let gram = &a.adjoint() * a;
    let lmax = herm_eig(&gram)?.max_eigenvalue();
    Ok(lmax.max(E::Real::zero()).sqrt())
}

/// Singular values in ascending order, via the eigenvalues of `aᴴa`.
pub fn singular_values<E: Entry>(a: &Matrix<E>) -> Result<Vec<E::Real>> {
    let gram = &a.adjoint() * a;
    Ok(herm_eig(&gram)?
        .eigenvalues
        .into_iter()
        .map(|l| l.max(E::Real::zero()).sqrt())
        .collect())
}

/// Matrix exponential of a Hermitian matrix.
pub fn herm_exp<E: Entry>(a: &Matrix<E>) -> Result<Matrix<E>> {
    herm_fun(a, |l| l.exp())
}

/// `Σ λᵢ²` style helper: Frobenius norm of `f(a)` for Hermitian `a`.
pub fn herm_fun_norm<E: Entry>(a: &Matrix<E>, f: impl Fn(E::Real) -> E::Real) -> Result<E::Real> {
    let eig = herm_eig(a)?;
    Ok(eig
        .eigenvalues
        .iter()
        .map(|&l| {
            let v = f(l);
            v * v
        })
        .fold(E::Real::zero(), |acc, v| acc + v)
        .sqrt())
}
