//! Dense complex linear algebra shared by every other module.
//!
//! Everything works in complex double precision, including real inputs: shifts
//! live on the imaginary axis, so a separate real code path buys nothing.

mod eig;
mod hull;
mod lu;
mod orth;
mod pencil;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use eig::{eigenvalues, generalized_eig};
pub use hull::{complex_convex_hull, HullBoundary, HullShape};
pub use lu::{HessenbergLu, LuFactor};
pub use orth::orthonormalize_append;
pub use pencil::{reduced_resolve_batch, solve_shifted, PencilSolver};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Reciprocal condition numbers below this are treated as singular.
pub const SINGULAR_RCOND: f64 = f64::EPSILON;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn is_finite_matrix(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn is_finite_vector(v: &ComplexVector) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Maximum absolute column sum.
pub fn norm1(m: &ComplexMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Frobenius-norm deviation of `V^H V` from the identity.
pub fn orthonormality_defect(v: &ComplexMatrix) -> f64 {
    let g = v.adjoint() * v;
    (g - ComplexMatrix::identity(v.ncols(), v.ncols())).norm()
}

/// Distance of each column of `x` from the span of the orthonormal columns of `q`,
/// relative to the column norm; returns the worst case.
pub fn subspace_residual(q: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
    let proj = q * (q.adjoint() * x);
    (0..x.ncols())
        .map(|j| {
            let col = x.column(j);
            (col - proj.column(j)).norm() / col.norm().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}
