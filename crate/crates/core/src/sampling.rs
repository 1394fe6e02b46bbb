//! Seeded random generators for points of every supported domain.
//!
//! Used by the verification suites and the tests. The laws are simple and
//! chosen to keep samples a controlled distance away from any boundary.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ball::BallPoint;
use crate::linalg::{herm_eig, spectral_norm, ComplexMatrix, Matrix, RealMatrix};
use crate::reference::{so3_exp, RotationPoint, SpdPoint};
use crate::scalar::Scalar;
use crate::siegel::upper::{point_to_group, stabilizer_element};
use crate::siegel::{SiegelDiskPoint, SymplecticMatrix, UpperHalfPoint};

pub fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    let v: f64 = StandardNormal.sample(rng);
    T::lit(v)
}

/// Standard complex Gaussian: real and imaginary parts are `N(0, ½)`.
pub fn complex_normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re * s), T::lit(im * s))
}

pub fn random_complex<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> ComplexMatrix<T> {
    Matrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_real<T: Scalar, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix<T> {
    Matrix::from_fn(rows, cols, |_, _| normal(rng))
}

pub fn random_hermitian<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    random_complex(rng, n, n).hermitian_part()
}

/// `GGᴴ/n + ½I`, eigenvalues bounded below by one half.
pub fn random_hpd<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let g = random_complex::<T, _>(rng, n, n);
    let mut p = (&g * &g.adjoint()).scale(T::one() / T::lit(n as f64));
    for i in 0..n {
        p[(i, i)] += Complex::new(T::lit(0.5), T::zero());
    }
    p.hermitian_part()
}

/// Eigenvectors of a random Hermitian matrix.
pub fn random_unitary<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    herm_eig(&random_hermitian::<T, _>(rng, n))
        .expect("Hermitian by construction")
        .eigenvectors
}

/// Random complex symmetric matrix rescaled to a spectral norm drawn
/// uniformly from `(0, max_norm]`.
pub fn random_disk_point<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_norm: f64,
) -> SiegelDiskPoint<T> {
    let a = random_complex::<T, _>(rng, n, n).symmetric_part();
    let norm = spectral_norm(&a).expect("square");
    let target = max_norm * (1.0 - rng.gen::<f64>());
    let m = if norm > T::zero() {
        a.scale(T::lit(target) / norm)
    } else {
        a
    };
    SiegelDiskPoint::new(m).expect("norm below one")
}

/// Random direction with modulus drawn uniformly from `(0, max_norm]`.
pub fn random_ball_point<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_norm: f64,
) -> BallPoint<T> {
    let v: Vec<Complex<T>> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = crate::ball::norm(&v);
    let target = T::lit(max_norm * (1.0 - rng.gen::<f64>()));
    BallPoint::new(v.into_iter().map(|z| z * (target / norm)).collect()).expect("inside the ball")
}

/// `GGᵀ/n + ½I` for a real Gaussian `G`.
pub fn random_spd<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> SpdPoint<T> {
    let g = random_real::<T, _>(rng, n, n);
    let mut p = (&g * &g.transpose()).scale(T::one() / T::lit(n as f64));
    for i in 0..n {
        p[(i, i)] += T::lit(0.5);
    }
    SpdPoint::new(p.symmetric_part()).expect("positive definite by construction")
}

/// Rotation with axis uniform on the sphere and angle in `[0, max_angle]`.
pub fn random_rotation<T: Scalar, R: Rng + ?Sized>(rng: &mut R, max_angle: f64) -> RotationPoint<T> {
    let axis: [f64; 3] = [
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
    ];
    let len = axis.iter().map(|a| a * a).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let angle = max_angle * rng.gen::<f64>();
    let w = axis.map(|a| T::lit(a / len * angle));
    so3_exp(&w)
}

pub fn random_upper_half<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> UpperHalfPoint<T> {
    let u = random_real::<T, _>(rng, n, n).symmetric_part();
    let v = random_spd::<T, _>(rng, n).into_matrix();
    UpperHalfPoint::new(u, v).expect("valid by construction")
}

/// Product of a point-to-group element, a stabilizer rotation and a shear
/// `[[I, 0], [S, I]]` with `S` symmetric.
pub fn random_symplectic<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymplecticMatrix<T> {
    let p = point_to_group(&random_upper_half::<T, _>(rng, n)).expect("valid point");
    let k = stabilizer_element(&random_unitary::<T, _>(rng, n)).expect("unitary");
    let s = random_real::<T, _>(rng, n, n).symmetric_part().scale(T::lit(0.5));
    let shear = SymplecticMatrix::new(Matrix::from_blocks(
        &Matrix::identity(n),
        &Matrix::zeros(n, n),
        &s,
        &Matrix::identity(n),
    ))
    .expect("shear is symplectic");
    p.compose(&k)
        .and_then(|g| g.compose(&shear))
        .expect("products of symplectic matrices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::upper::is_symplectic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_domains() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..4 {
            let x = random_disk_point::<f64, _>(&mut rng, n, 0.8);
            assert!(x.spectral_norm() <= 0.8 + 1e-12);
            let b = random_ball_point::<f64, _>(&mut rng, n, 0.9);
            assert!(b.norm() <= 0.9 + 1e-12);
            let u = random_unitary::<f64, _>(&mut rng, n);
            let err = (&(&u * &u.adjoint()) - &ComplexMatrix::identity(n)).frobenius_norm();
            assert!(err < 1e-10);
            assert!(is_symplectic(random_symplectic::<f64, _>(&mut rng, n).matrix()));
            let p = random_hpd::<f64, _>(&mut rng, n);
            assert!(herm_eig(&p).unwrap().min_eigenvalue() >= 0.5 - 1e-12);
        }
        let r = random_rotation::<f64, _>(&mut rng, 1.0);
        let m = r.matrix();
        let err = (&(&m.transpose() * m) - &RealMatrix::identity(3)).frobenius_norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn seeded_streams_repeat() {
        let a = random_disk_point::<f64, _>(&mut ChaCha8Rng::seed_from_u64(9), 3, 0.8);
        let b = random_disk_point::<f64, _>(&mut ChaCha8Rng::seed_from_u64(9), 3, 0.8);
        assert_eq!(a, b);
    }
}
