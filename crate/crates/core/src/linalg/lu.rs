use num_traits::{Float, Zero};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{Entry, Scalar};

/// Reciprocal condition number below which a system is treated as singular.
pub const RCOND_FLOOR: f64 = 1e-14;

/// LU factorization with partial pivoting, `P a = L U`.
#[derive(Clone, Debug)]
pub struct Lu<E: Entry> {
    lu: Matrix<E>,
    perm: Vec<usize>,
    rcond: E::Real,
}

impl<E: Entry> Lu<E> {
    pub fn new(a: &Matrix<E>) -> Result<Self> {
        let n = a.require_square("LU input")?;
        if !a.is_finite() {
            return Err(Error::NonFinite("LU input".into()));
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].modulus()))
                .fold((k, E::Real::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == E::Real::zero() {
                return Err(Error::Singular { rcond: 0.0 });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        let mut out = Self {
            lu,
            perm,
            rcond: E::Real::zero(),
        };
        let inv = out.solve_unchecked(&Matrix::identity(n));
        let denom = norm1(a) * norm1(&inv);
        out.rcond = if denom.is_finite() && denom > E::Real::zero() {
            denom.recip()
        } else {
            E::Real::zero()
        };
        if !(out.rcond > E::Real::lit(RCOND_FLOOR)) {
            return Err(Error::Singular {
                rcond: out.rcond.as_f64(),
            });
        }
        Ok(out)
    }

    /// Reciprocal 1-norm condition number `1 / (‖a‖₁ ‖a⁻¹‖₁)`.
    pub fn rcond(&self) -> E::Real {
        self.rcond
    }

    pub fn solve(&self, b: &Matrix<E>) -> Result<Matrix<E>> {
        if b.rows() != self.lu.rows() {
            return Err(Error::Shape(format!(
                "right-hand side has {} rows, system has {}",
                b.rows(),
                self.lu.rows()
            )));
        }
        Ok(self.solve_unchecked(b))
    }

    fn solve_unchecked(&self, b: &Matrix<E>) -> Matrix<E> {
        let n = self.lu.rows();
        let m = b.cols();
        let mut x = Matrix::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        for j in 0..m {
            for i in 0..n {
                let mut s = x[(i, j)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, j)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = s / self.lu[(i, i)];
            }
        }
        x
    }
}

fn norm1<E: Entry>(a: &Matrix<E>) -> E::Real {
    (0..a.cols())
        .map(|j| {
            (0..a.rows())
                .map(|i| a[(i, j)].modulus())
                .fold(E::Real::zero(), |s, v| s + v)
        })
        .fold(E::Real::zero(), |m, v| m.max(v))
}

/// Solves `a x = b`.
pub fn solve<E: Entry>(a: &Matrix<E>, b: &Matrix<E>) -> Result<Matrix<E>> {
    Lu::new(a)?.solve(b)
}

/// Computes `b a⁻¹`.
pub fn solve_right<E: Entry>(b: &Matrix<E>, a: &Matrix<E>) -> Result<Matrix<E>> {
    Ok(solve(&a.transpose(), &b.transpose())?.transpose())
}

pub fn inverse<E: Entry>(a: &Matrix<E>) -> Result<Matrix<E>> {
    let n = a.require_square("inverse input")?;
    solve(a, &Matrix::identity(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{ComplexMatrix, RealMatrix};
    use crate::sampling::random_complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_system_returns_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_complex::<f64, _>(&mut rng, 3, 2);
        let x = solve(&ComplexMatrix::identity(3), &b).unwrap();
        assert!((&x - &b).frobenius_norm() < 1e-15);
    }

    #[test]
    fn diagonal_inverse() {
        let x = solve(&RealMatrix::from_diag(&[2.0, 4.0]), &RealMatrix::identity(2)).unwrap();
        assert_eq!(x, RealMatrix::from_diag(&[0.5, 0.25]));
    }

    #[test]
    fn random_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=8 {
            let a = random_complex::<f64, _>(&mut rng, n, n).identity_plus();
            let b = random_complex::<f64, _>(&mut rng, n, 3);
            let x = solve(&a, &b).unwrap();
            let r = (&(&a * &x) - &b).frobenius_norm();
            assert!(r <= 1e-9 * (1.0 + b.frobenius_norm()));
            let y = solve_right(&b.transpose(), &a.transpose()).unwrap();
            assert!((&(&y * &a.transpose()) - &b.transpose()).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn singular_reports_condition() {
        let a = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(solve(&a, &RealMatrix::identity(2)), Err(Error::Singular { .. })));
        let nearly = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0 + 1e-16]]).unwrap();
        assert!(matches!(inverse(&nearly), Err(Error::Singular { .. })));
    }
}
