//! Product features `(p⁰, x¹, …, x^{r−1}) ∈ Sym⁺ₙ × SDₙ^{r−1}`.

use super::burg::BurgOutput;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, spectral_norm, ComplexMatrix};
use crate::reference::SpdPoint;
use crate::scalar::Scalar;
use crate::siegel::SiegelDiskPoint;

/// Eigenvalue floor applied to `p⁰`.
pub const DEFAULT_EPSILON: f64 = 1e-4;
/// Distance kept between a projected reflection coefficient and the boundary.
pub const DEFAULT_PROJECTION_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ProductFeature<T: Scalar> {
    pub p0: SpdPoint<T>,
    pub w: Vec<SiegelDiskPoint<T>>,
}

impl<T: Scalar> ProductFeature<T> {
    pub fn new(p0: SpdPoint<T>, w: Vec<SiegelDiskPoint<T>>) -> Result<Self> {
        let n = p0.dim();
        if w.iter().any(|x| x.dim() != n) {
            return Err(Error::Shape("feature components differ in size".into()));
        }
        Ok(Self { p0, w })
    }

    pub fn dim(&self) -> usize {
        self.p0.dim()
    }

    /// The order `r`: one SPD slot plus `r − 1` disk slots.
    pub fn order(&self) -> usize {
        self.w.len() + 1
    }
}

/// A projected feature and how much the projection changed.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection<T: Scalar> {
    pub feature: ProductFeature<T>,
    /// Eigenvalues of `p⁰` raised to `ε`.
    pub clamped_eigenvalues: usize,
    /// Reflection coefficients rescaled into the disk.
    pub rescaled: usize,
}

/// `p⁰ = clamp(sym(Re p̃₀), ε)` and `xⁱ = sym(wᵢ)`, rescaled to spectral norm
/// `1 − margin` when at or beyond it.
pub fn project_feature<T: Scalar>(
    p0_c: &ComplexMatrix<T>,
    ws: &[ComplexMatrix<T>],
    eps: T,
    margin: T,
) -> Result<Projection<T>> {
    let n = p0_c.require_square("covariance")?;
    if !(eps > T::zero()) {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    if !(margin > T::zero() && margin < T::one()) {
        return Err(Error::InvalidArgument("margin must lie in (0, 1)".into()));
    }
    let re = p0_c.re().symmetric_part();
    let eig = herm_eig(&re)?;
    let clamped = eig.eigenvalues.iter().filter(|l| **l < eps).count();
    let p = if clamped == 0 {
        re
    } else {
        eig.reconstruct(|l| l.max(eps)).symmetric_part()
    };
    let p0 = SpdPoint::new(p)?;

    let limit = T::one() - margin;
    let mut rescaled = 0;
    let mut w = Vec::with_capacity(ws.len());
    for m in ws {
        if m.rows() != n || m.cols() != n {
            return Err(Error::Shape("reflection coefficient size".into()));
        }
        let s = m.symmetric_part();
        let norm = spectral_norm(&s)?;
        let s = if norm >= limit {
            rescaled += 1;
            s.scale(limit / norm)
        } else {
            s
        };
        w.push(SiegelDiskPoint::with_margin(s, margin)?);
    }
    Ok(Projection {
        feature: ProductFeature::new(p0, w)?,
        clamped_eigenvalues: clamped,
        rescaled,
    })
}

/// Projection of a Burg output with the default `ε` and margin.
pub fn project_burg<T: Scalar>(out: &BurgOutput<T>) -> Result<Projection<T>> {
    project_feature(
        &out.p0,
        &out.reflections,
        T::lit(DEFAULT_EPSILON),
        T::lit(DEFAULT_PROJECTION_MARGIN),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn c(v: f64) -> ComplexMatrix<f64> {
        ComplexMatrix::from_diag(&[Complex::new(v, 0.0)])
    }

    #[test]
    fn valid_inputs_pass_through() {
        let p = ComplexMatrix::from_rows(&[
            vec![Complex::new(2.0, 0.0), Complex::new(0.5, 0.3)],
            vec![Complex::new(0.5, -0.3), Complex::new(1.0, 0.0)],
        ])
        .unwrap();
        let w = ComplexMatrix::from_rows(&[
            vec![Complex::new(0.2, 0.1), Complex::new(0.0, 0.3)],
            vec![Complex::new(0.0, 0.3), Complex::new(-0.1, 0.0)],
        ])
        .unwrap();
        let out = project_feature(&p, std::slice::from_ref(&w), 1e-4, 1e-6).unwrap();
        assert_eq!((out.clamped_eigenvalues, out.rescaled), (0, 0));
        assert!((out.feature.p0.matrix() - &p.re()).max_abs() < 1e-12);
        assert!((out.feature.w[0].matrix() - &w).max_abs() < 1e-12);
    }

    #[test]
    fn negative_eigenvalue_is_clamped() {
        let out = project_feature(&c(-0.5), &[], 1e-4, 1e-6).unwrap();
        assert!((out.feature.p0.matrix()[(0, 0)] - 1e-4).abs() < 1e-16);
        assert_eq!(out.clamped_eigenvalues, 1);
    }

    #[test]
    fn boundary_coefficient_is_rescaled() {
        let margin = 1e-6;
        let out = project_feature(&c(1.0), &[c(-1.0)], 1e-4, margin).unwrap();
        assert!((out.feature.w[0].matrix()[(0, 0)].re + (1.0 - margin)).abs() < 1e-15);
        assert_eq!(out.rescaled, 1);
        assert_eq!(out.feature.order(), 2);
    }
}
