//! Eigen-decompositions.
//!
//! Hermitian matrices go through a cyclic complex Jacobi sweep, which is
//! accurate to a few ulps on the small, well-scaled matrices used by the
//! domains. General (non-Hermitian) complex matrices only need their
//! eigenvalues here, obtained from a Hessenberg reduction followed by
//! shifted QR iterations.

use num_complex::Complex;
use num_traits::{Float, One, Zero};

use super::matrix::{ComplexMatrix, Matrix};
use crate::error::{Error, Result};
use crate::scalar::{Entry, Scalar};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `a = U Λ Uᴴ` of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEig<E: Entry> {
    pub eigenvalues: Vec<E::Real>,
    /// Eigenvectors stored as columns.
    pub eigenvectors: Matrix<E>,
}

impl<E: Entry> HermitianEig<E> {
    /// `U f(Λ) Uᴴ`.
    pub fn reconstruct(&self, f: impl Fn(E::Real) -> E::Real) -> Matrix<E> {
        let u = &self.eigenvectors;
        let n = u.rows();
        let fl: Vec<E::Real> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = E::zero();
                for (k, &w) in fl.iter().enumerate() {
                    acc += (u[(i, k)] * u[(j, k)].conj()).scale(w);
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        for i in 0..n {
            out[(i, i)] = E::from_real(out[(i, i)].re());
        }
        out
    }

    pub fn min_eigenvalue(&self) -> E::Real {
        self.eigenvalues.first().copied().unwrap_or_else(E::Real::zero)
    }

    pub fn max_eigenvalue(&self) -> E::Real {
        self.eigenvalues.last().copied().unwrap_or_else(E::Real::zero)
    }
}

/// Eigen-decomposition of a Hermitian (real symmetric) matrix.
///
/// The input is symmetrized as `(a + aᴴ)/2` after checking
/// `‖a − aᴴ‖_F ≤ 1e-8·(1 + ‖a‖_F)`.
pub fn herm_eig<E: Entry>(a: &Matrix<E>) -> Result<HermitianEig<E>> {
    let n = a.require_square("herm_eig input")?;
    if !a.is_finite() {
        return Err(Error::NonFinite("herm_eig input".into()));
    }
    let residual = a.hermitian_residual();
    let tolerance = E::Real::tol(1e-8) * (E::Real::one() + a.frobenius_norm());
    if residual > tolerance {
        return Err(Error::NotHermitian {
            residual: residual.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    let mut h = a.hermitian_part();
    let mut v = Matrix::<E>::identity(n);
    jacobi(&mut h, &mut v)?;

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<E::Real> = (0..n).map(|i| h[(i, i)].re()).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm<E: Entry>(h: &Matrix<E>) -> E::Real {
    let n = h.rows();
    let mut s = E::Real::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += h[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<E: Entry>(h: &mut Matrix<E>, v: &mut Matrix<E>) -> Result<()> {
    let n = h.rows();
    if n < 2 {
        return Ok(());
    }
    let scale = h.frobenius_norm();
    if scale == E::Real::zero() {
        return Ok(());
    }
    let eps = E::Real::epsilon();
    let two = E::Real::lit(2.0);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(h) <= eps * scale {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = h[(p, q)];
                let g = apq.modulus();
                if g <= eps * E::Real::lit(1e-3) * scale {
                    continue;
                }
                let app = h[(p, p)].re();
                let aqq = h[(q, q)].re();
                // Rotation J = D R Dᴴ, D = diag(1, conj(e)), R the real Jacobi rotation.
                let e = apq.phase();
                let theta = (aqq - app) / (two * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + E::Real::one()).sqrt());
                let c = E::Real::one() / (t * t + E::Real::one()).sqrt();
                let s = t * c;
                let jpq = e.scale(s);
                let jqp = -e.conj().scale(s);
                // h <- h J
                for k in 0..n {
                    let hkp = h[(k, p)];
                    let hkq = h[(k, q)];
                    h[(k, p)] = hkp.scale(c) + hkq * jqp;
                    h[(k, q)] = hkp * jpq + hkq.scale(c);
                }
                // h <- Jᴴ h
                for k in 0..n {
                    let hpk = h[(p, k)];
                    let hqk = h[(q, k)];
                    h[(p, k)] = hpk.scale(c) + jqp.conj() * hqk;
                    h[(q, k)] = jpq.conj() * hpk + hqk.scale(c);
                }
                h[(p, q)] = E::zero();
                h[(q, p)] = E::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp.scale(c) + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq.scale(c);
                }
            }
        }
    }
    if off_diagonal_norm(h) <= E::Real::tol(1e-12) * scale {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            method: "Jacobi eigenvalue sweep",
            iterations: MAX_SWEEPS,
        })
    }
}

/// Eigenvalues of a general complex square matrix (unordered).
pub fn eigenvalues<T: Scalar>(a: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = a.require_square("eigenvalues input")?;
    if !a.is_finite() {
        return Err(Error::NonFinite("eigenvalues input".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(a);
    shifted_qr(&mut h)?;
    Ok(h.diag())
}

fn hessenberg<T: Scalar>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let alpha = -Entry::phase(x0).scale(norm);
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vn == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = z.scale(T::one() / vn);
        }
        let two = T::lit(2.0);
        // h <- (I - 2vvᴴ) h on rows k+1..n
        for j in 0..n {
            let mut dot = Complex::<T>::zero();
            for (idx, i) in (k + 1..n).enumerate() {
                dot += v[idx].conj() * h[(i, j)];
            }
            for (idx, i) in (k + 1..n).enumerate() {
                let upd = v[idx] * dot;
                h[(i, j)] -= upd.scale(two);
            }
        }
        // h <- h (I - 2vvᴴ) on columns k+1..n
        for i in 0..n {
            let mut dot = Complex::<T>::zero();
            for (idx, j) in (k + 1..n).enumerate() {
                dot += h[(i, j)] * v[idx];
            }
            for (idx, j) in (k + 1..n).enumerate() {
                let upd: Complex<T> = dot * v[idx].conj();
                h[(i, j)] -= upd.scale(two);
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
    h
}

fn shifted_qr<T: Scalar>(h: &mut ComplexMatrix<T>) -> Result<()> {
    let n = h.rows();
    let eps = T::epsilon();
    let max_iter = 60 * n.max(1);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    let half = T::lit(0.5);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].modulus() + h[(l, l)].modulus();
            let s = if s == T::zero() { T::one() } else { s };
            if h[(l, l - 1)].modulus() <= eps * s {
                h[(l, l - 1)] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::NoConvergence {
                method: "shifted QR eigenvalue iteration",
                iterations: max_iter,
            });
        }
        let a = h[(hi - 1, hi - 1)];
        let b = h[(hi - 1, hi)];
        let c = h[(hi, hi - 1)];
        let d = h[(hi, hi)];
        let mu = if since_deflation % 11 == 10 {
            // exceptional shift
            d + Complex::new(h[(hi, hi - 1)].modulus(), T::zero())
        } else {
            let m = (a + d).scale(half);
            let disc = ((a - d).scale(half) * (a - d).scale(half) + b * c).sqrt();
            let l1 = m + disc;
            let l2 = m - disc;
            if (l1 - d).norm_sqr() <= (l2 - d).norm_sqr() {
                l1
            } else {
                l2
            }
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        let mut rots: Vec<(T, Complex<T>)> = Vec::with_capacity(hi - l);
        for k in l..hi {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == T::zero() {
                (T::one(), Complex::zero())
            } else if x.modulus() == T::zero() {
                (T::zero(), Complex::one())
            } else {
                (x.modulus() / r, Entry::phase(x) * y.conj().scale(T::one() / r))
            };
            for j in k..=hi {
                let p = h[(k, j)];
                let q = h[(k + 1, j)];
                h[(k, j)] = p.scale(cs) + sn * q;
                h[(k + 1, j)] = -sn.conj() * p + q.scale(cs);
            }
            rots.push((cs, sn));
        }
        for (idx, &(cs, sn)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hi) {
                let p = h[(i, k)];
                let q = h[(i, k + 1)];
                h[(i, k)] = p.scale(cs) + sn.conj() * q;
                h[(i, k + 1)] = -sn * p + q.scale(cs);
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok(())
}
