//! Burg-style extraction of the covariance and reflection coefficients of a
//! multichannel series.

use num_complex::Complex;

use super::simulate::TimeSeries;
use super::spec::zero_c;
use crate::error::{Error, Result};
use crate::linalg::{hpd_inv_sqrt, ComplexMatrix};
use crate::scalar::Scalar;

/// `p̃₀` and the reflection coefficients `w₁ … w_{r−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BurgOutput<T: Scalar> {
    pub p0: ComplexMatrix<T>,
    pub reflections: Vec<ComplexMatrix<T>>,
}

fn outer_sum<'a, T: Scalar>(
    n: usize,
    pairs: impl Iterator<Item = (&'a [Complex<T>], &'a [Complex<T>])>,
) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(n, n);
    for (a, b) in pairs {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += a[i] * b[j].conj();
            }
        }
    }
    m
}

fn mat_vec<T: Scalar>(a: &ComplexMatrix<T>, x: &[Complex<T>]) -> Vec<Complex<T>> {
    (0..a.rows())
        .map(|i| a.row(i).iter().zip(x).fold(zero_c(), |s, (p, q)| s + p * q))
        .collect()
}

fn inv_sqrt_or_degenerate<T: Scalar>(m: &ComplexMatrix<T>, what: &str, i: usize) -> Result<ComplexMatrix<T>> {
    hpd_inv_sqrt(&m.hermitian_part()).map_err(|e| match e {
        Error::NotPositiveDefinite { eigenvalue } => Error::Degenerate(format!(
            "{what} at stage {i} is singular (eigenvalue {eigenvalue:e})"
        )),
        other => other,
    })
}

/// Runs the recursion
///
/// ```text
/// p̃₀ = (1/N) Σ u_k u_kᴴ
/// r^f = Σ_{k≥i} f_{i−1,k} f_{i−1,k}ᴴ,  r^b = Σ b_{i−1,k−1} b_{i−1,k−1}ᴴ,  r^{fb} = Σ f_{i−1,k} b_{i−1,k−1}ᴴ
/// w_i = −(r^f)^{-1/2} r^{fb} ((r^b)^{-1/2})ᴴ
/// f_{i,k} = f_{i−1,k} + w_i b_{i−1,k−1},   b_{i,k} = b_{i−1,k−1} + w_iᴴ f_{i−1,k}
/// ```
///
/// for `i = 1 … r−1`. The reflection coefficients are returned as computed,
/// neither symmetrized nor clamped.
pub fn burg_representation<T: Scalar>(series: &TimeSeries<T>, r: usize) -> Result<BurgOutput<T>> {
    let n = series.dim;
    let len = series.len();
    if r == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    if len < r + 1 {
        return Err(Error::InvalidArgument(format!(
            "series of length {len} is too short for order {r}"
        )));
    }
    let u = &series.samples;
    let p0 = outer_sum(n, u.iter().map(|v| (v.as_slice(), v.as_slice())))
        .scale(T::one() / T::lit(len as f64))
        .hermitian_part();

    let mut f: Vec<Vec<Complex<T>>> = u.clone();
    let mut b: Vec<Vec<Complex<T>>> = u.clone();
    let mut reflections = Vec::with_capacity(r.saturating_sub(1));
    for i in 1..r {
        let rf = outer_sum(n, (i..len).map(|k| (f[k].as_slice(), f[k].as_slice())));
        let rb = outer_sum(n, (i..len).map(|k| (b[k - 1].as_slice(), b[k - 1].as_slice())));
        let rfb = outer_sum(n, (i..len).map(|k| (f[k].as_slice(), b[k - 1].as_slice())));
        let rf_is = inv_sqrt_or_degenerate(&rf, "forward covariance", i)?;
        let rb_is = inv_sqrt_or_degenerate(&rb, "backward covariance", i)?;
        let w = -(&(&rf_is * &rfb) * &rb_is.adjoint());
        let wh = w.adjoint();
        let mut nf = f.clone();
        let mut nb = b.clone();
        for k in i..len {
            let wb = mat_vec(&w, &b[k - 1]);
            let whf = mat_vec(&wh, &f[k]);
            nf[k] = f[k].iter().zip(&wb).map(|(a, c)| a + c).collect();
            nb[k] = b[k - 1].iter().zip(&whf).map(|(a, c)| a + c).collect();
        }
        f = nf;
        b = nb;
        reflections.push(w);
    }
    Ok(BurgOutput { p0, reflections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;
    use crate::radar::simulate::{sample_rng, simulate_series};
    use crate::radar::spec::ArClassSpec;

    fn scalar_series(v: &[f64]) -> TimeSeries<f64> {
        TimeSeries::new(1, v.iter().map(|&x| vec![Complex::new(x, 0.0)]).collect()).unwrap()
    }

    #[test]
    fn scalar_worked_example() {
        let out = burg_representation(&scalar_series(&[1.0, 0.5, 0.5]), 2).unwrap();
        assert!((out.p0[(0, 0)].re - 0.5).abs() < 1e-12);
        let w = out.reflections[0][(0, 0)];
        assert!((w.re + 0.948_683_298_050_513_8).abs() < 1e-12 && w.im == 0.0);
    }

    #[test]
    fn order_one_has_no_reflections() {
        let out = burg_representation(&scalar_series(&[1.0, 2.0]), 1).unwrap();
        assert!(out.reflections.is_empty());
        assert!((out.p0[(0, 0)].re - 2.5).abs() < 1e-15);
    }

    #[test]
    fn geometric_series_reaches_the_boundary() {
        let v: Vec<f64> = (0..20).map(|k| 2.0 * 0.8f64.powi(k)).collect();
        let out = burg_representation(&scalar_series(&v), 2).unwrap();
        assert!((out.reflections[0][(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        let zero = scalar_series(&[0.0; 5]);
        assert!(matches!(burg_representation(&zero, 2), Err(Error::Degenerate(_))));
        assert!(burg_representation(&scalar_series(&[1.0, 2.0]), 2).is_err());
    }

    #[test]
    fn white_noise_reflections_are_small() {
        let n = 2;
        let spec = ArClassSpec::<f64>::white(n, 3, ComplexMatrix::identity(n));
        let s = simulate_series(&spec, 10_000, &mut sample_rng(11, 0, 0)).unwrap();
        let out = burg_representation(&s, 3).unwrap();
        for w in &out.reflections {
            assert!(spectral_norm(w).unwrap() <= 0.05);
        }
        let err = (&out.p0 - &ComplexMatrix::identity(n)).max_abs();
        assert!(err < 0.05);
    }
}
