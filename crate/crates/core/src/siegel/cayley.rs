//! Matrix Cayley transform between the upper half space and the disk.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{solve_right, ComplexMatrix};
use crate::scalar::Scalar;

use super::disk::SiegelDiskPoint;
use super::upper::UpperHalfPoint;

fn singular_as_range(e: Error) -> Error {
    match e {
        Error::Singular { rcond } => Error::Range(format!(
            "Cayley transform is singular here (rcond {rcond:e})"
        )),
        other => other,
    }
}

/// `(x − iI)(x + iI)⁻¹`.
pub fn cayley<T: Scalar>(x: &UpperHalfPoint<T>) -> Result<SiegelDiskPoint<T>> {
    let n = x.dim();
    let xc = x.to_complex();
    let i = ComplexMatrix::scalar(n, Complex::new(T::zero(), T::one()));
    let m = solve_right(&(&xc - &i), &(&xc + &i)).map_err(singular_as_range)?;
    SiegelDiskPoint::from_computed(m)
}

/// `i(I + z)(I − z)⁻¹`.
pub fn cayley_inv<T: Scalar>(z: &SiegelDiskPoint<T>) -> Result<UpperHalfPoint<T>> {
    let zm = z.matrix();
    let num = zm.identity_plus().scale_by(Complex::new(T::zero(), T::one()));
    let m = solve_right(&num, &zm.identity_minus()).map_err(singular_as_range)?;
    UpperHalfPoint::from_complex(&m).map_err(|e| match e {
        Error::OutsideDomain(msg) => Error::Range(format!("inverse Cayley image invalid: {msg}")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;
    use crate::sampling::{random_disk_point, random_upper_half};
    use crate::siegel::{disk, upper};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn base_points_correspond() {
        let z = cayley(&UpperHalfPoint::<f64>::base(3)).unwrap();
        assert!(z.matrix().frobenius_norm() < 1e-15);
        let x = cayley_inv(&SiegelDiskPoint::<f64>::zero(2)).unwrap();
        assert!((x.imag() - &RealMatrix::identity(2)).frobenius_norm() < 1e-15);
        assert!(x.real().frobenius_norm() < 1e-15);
    }

    #[test]
    fn roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in 1..=3 {
            for _ in 0..10 {
                let x = random_upper_half::<f64, _>(&mut rng, n);
                let back = cayley_inv(&cayley(&x).unwrap()).unwrap();
                assert!((back.to_complex() - x.to_complex()).frobenius_norm() < 1e-9);
                let z = random_disk_point::<f64, _>(&mut rng, n, 0.8);
                let again = cayley(&cayley_inv(&z).unwrap()).unwrap();
                assert!((again.matrix() - z.matrix()).frobenius_norm() < 1e-9);
            }
        }
    }

    #[test]
    fn cayley_is_an_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=2 {
            for _ in 0..20 {
                let x = random_upper_half::<f64, _>(&mut rng, n);
                let y = random_upper_half::<f64, _>(&mut rng, n);
                let dh = upper::distance(&x, &y).unwrap();
                let dd = disk::distance_kahler(&cayley(&x).unwrap(), &cayley(&y).unwrap()).unwrap();
                assert!((dh - dd).abs() <= 1e-8 * (1.0 + dh), "{dh} vs {dd}");
            }
        }
    }
}
