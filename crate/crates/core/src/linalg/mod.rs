//! Dense linear algebra kernels shared by every domain.

mod eigen;
mod funcs;
mod lu;
mod matrix;

pub use eigen::{eigenvalues, herm_eig, HermitianEig};
pub use funcs::{
    herm_exp, herm_fun, herm_fun_norm, hpd_fun, hpd_inv_sqrt, hpd_sqrt, hpd_sqrt_pair,
    singular_values, spectral_norm, HPD_FLOOR,
};
pub use lu::{inverse, solve, solve_right, Lu, RCOND_FLOOR};
pub use matrix::{ComplexMatrix, Matrix, RealMatrix};
