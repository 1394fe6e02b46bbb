//! Generation recipes for synthetic radar-clutter classes.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, spectral_norm, ComplexMatrix};
use crate::sampling::{random_complex, random_hpd};
use crate::scalar::Scalar;

/// Eigenvalue floor applied to the block-Toeplitz covariance.
pub const TOEPLITZ_FLOOR: f64 = 1e-3;

/// Sizes and seed of a synthetic dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatasetSpec {
    pub classes: usize,
    pub per_class: usize,
    /// Extra samples per class drawn from the same class recipes for testing.
    pub test_per_class: usize,
    pub dim: usize,
    pub length: usize,
    pub order: usize,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        for (v, what) in [
            (self.classes, "classes"),
            (self.per_class, "samples per class"),
            (self.dim, "dimension"),
            (self.length, "length"),
            (self.order, "order"),
        ] {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{what} must be at least 1")));
            }
        }
        if self.length < self.order + 1 {
            return Err(Error::InvalidArgument(format!(
                "length {} is too short for order {}",
                self.length, self.order
            )));
        }
        if self.classes > u32::MAX as usize || self.per_class + self.test_per_class > u32::MAX as usize
        {
            return Err(Error::InvalidArgument("dataset too large".into()));
        }
        Ok(())
    }

    /// Seed of the recipe for `class`.
    pub fn class_seed(&self, class: usize) -> u64 {
        self.seed
            .wrapping_add((class as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .rotate_left(17)
    }
}

/// AR model `u_t + Σⱼ cⱼ u_{t−j} = v_t` with a block-Toeplitz covariance `b`
/// for the first `r` samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ArClassSpec<T: Scalar> {
    pub class: usize,
    pub dim: usize,
    pub order: usize,
    /// `(r·n)×(r·n)` Hermitian positive definite.
    pub b: ComplexMatrix<T>,
    pub coeffs: Vec<ComplexMatrix<T>>,
    pub noise: ComplexMatrix<T>,
}

/// Deterministic class recipe: `B₀` HPD, `Bₖ` random with norm decaying in
/// `k`, the block-Toeplitz assembly clamped to eigenvalues `≥ 1e-3`, and
/// coefficients with `‖cⱼ‖₂ ∈ [0.3/r, 0.5/r]`.
pub fn make_class_spec<T: Scalar>(seed: u64, class: usize, n: usize, r: usize) -> Result<ArClassSpec<T>> {
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument("dimension and order must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = vec![random_hpd::<T, _>(&mut rng, n)];
    for k in 1..r {
        let g = random_complex::<T, _>(&mut rng, n, n);
        let norm = spectral_norm(&g)?;
        blocks.push(g.scale(T::lit(0.5 / k as f64) / norm));
    }
    let mut b = ComplexMatrix::zeros(r * n, r * n);
    for i in 0..r {
        for j in 0..r {
            let blk = if j >= i {
                blocks[j - i].clone()
            } else {
                blocks[i - j].adjoint()
            };
            b.set_block(i * n, j * n, &blk);
        }
    }
    let floor = T::lit(TOEPLITZ_FLOOR);
    let b = herm_eig(&b.hermitian_part())?
        .reconstruct(|l| l.max(floor))
        .hermitian_part();

    let coeffs = (0..r)
        .map(|_| {
            let g = random_complex::<T, _>(&mut rng, n, n);
            let norm = spectral_norm(&g)?;
            let target = rng.gen_range(0.3..=0.5) / r as f64;
            Ok(g.scale(T::lit(target) / norm))
        })
        .collect::<Result<Vec<_>>>()?;
    let noise = random_hpd::<T, _>(&mut rng, n);
    Ok(ArClassSpec {
        class,
        dim: n,
        order: r,
        b,
        coeffs,
        noise,
    })
}

impl<T: Scalar> ArClassSpec<T> {
    /// `Σⱼ ‖cⱼ‖₂`.
    pub fn stability_sum(&self) -> Result<T> {
        self.coeffs.iter().map(spectral_norm).sum()
    }

    /// Coefficient-free model with the given noise covariance.
    pub fn white(n: usize, r: usize, noise: ComplexMatrix<T>) -> Self {
        Self {
            class: 0,
            dim: n,
            order: r,
            b: ComplexMatrix::identity(r * n),
            coeffs: vec![ComplexMatrix::zeros(n, n); r],
            noise,
        }
    }
}

pub(crate) fn zero_c<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = make_class_spec::<f64>(7, 0, 3, 3).unwrap();
        let b = make_class_spec::<f64>(7, 0, 3, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, make_class_spec::<f64>(8, 0, 3, 3).unwrap());
    }

    #[test]
    fn spec_bounds() {
        for seed in 0..10 {
            let s = make_class_spec::<f64>(seed, 0, 4, 3).unwrap();
            let eig = herm_eig(&s.b).unwrap();
            assert!(eig.min_eigenvalue() >= TOEPLITZ_FLOOR - 1e-8);
            assert!(s.b.hermitian_residual() < 1e-12);
            assert!(s.stability_sum().unwrap() <= 0.5 + 1e-12);
            assert_eq!(s.b.rows(), 12);
        }
    }

    #[test]
    fn validation() {
        let mut d = DatasetSpec {
            classes: 5,
            per_class: 50,
            test_per_class: 0,
            dim: 5,
            length: 50,
            order: 3,
            seed: 7,
        };
        assert!(d.validate().is_ok());
        d.length = 3;
        assert!(d.validate().is_err());
        d.length = 50;
        d.classes = 0;
        assert!(d.validate().is_err());
        let large_scale = DatasetSpec {
            classes: 20,
            per_class: 950 / 20 + 1,
            test_per_class: 0,
            dim: 30,
            length: 50,
            order: 3,
            seed: 1,
        };
        assert!(large_scale.validate().is_ok());
    }
}
