use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Appends `v` to the orthonormal columns of `basis` with two passes of modified
/// Gram-Schmidt. Fails with `RankDeficient` when the orthogonal remainder is
/// shorter than `tol * ||v||`.
pub fn orthonormalize_append(basis: &ComplexMatrix, v: &ComplexVector, tol: f64) -> Result<ComplexMatrix> {
    if basis.ncols() > 0 && basis.nrows() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, vector has {} entries",
            basis.nrows(),
            v.len()
        )));
    }
    let vnorm = v.norm();
    if vnorm == 0.0 || !vnorm.is_finite() {
        return Err(Error::RankDeficient { residual: 0.0 });
    }
    let mut w = v.clone();
    for _pass in 0..2 {
        for q in basis.column_iter() {
            let coeff = q.dotc(&w);
            w.axpy(-coeff, &q, num_complex::Complex64::new(1.0, 0.0));
        }
    }
    let wnorm = w.norm();
    if wnorm < tol * vnorm {
        return Err(Error::RankDeficient {
            residual: wnorm / vnorm,
        });
    }
    w /= num_complex::Complex64::new(wnorm, 0.0);
    let n = v.len();
    let k = basis.ncols();
    let mut out = ComplexMatrix::zeros(n, k + 1);
    if k > 0 {
        out.columns_mut(0, k).copy_from(basis);
    }
    out.set_column(k, &w);
    Ok(out)
}
