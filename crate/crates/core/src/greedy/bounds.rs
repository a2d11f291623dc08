use crate::error::{Error, Result};
use crate::model::StateSpaceSystem;
use crate::numkernel::{eigenvalues, generalized_eig, real, ComplexMatrix, ComplexVector, C64};

/// Pencils up to this size use a dense eigendecomposition outright.
pub const DENSE_BOUNDS_LIMIT: usize = 500;
/// Largest pencil for which the dense route is used as a fallback.
pub const DENSE_FALLBACK_LIMIT: usize = 2000;

const ARNOLDI_DIM: usize = 40;
const MAX_RESTARTS: usize = 60;
const RITZ_TOL: f64 = 1e-10;

/// Smallest- and largest-magnitude eigenvalues of the pencil `(-A, E)`.
pub fn extreme_shift_bounds(sys: &StateSpaceSystem) -> Result<(C64, C64)> {
    if sys.n() <= DENSE_BOUNDS_LIMIT {
        return dense_bounds(sys);
    }
    match iterative_bounds(sys) {
        Ok(b) => Ok(b),
        Err(Error::NonConvergence { iterations }) if sys.n() <= DENSE_FALLBACK_LIMIT => {
            log::warn!("extreme eigenvalue iteration stalled after {iterations} restarts; using dense eigenvalues");
            dense_bounds(sys)
        }
        Err(e) => Err(e),
    }
}

fn extremes(values: impl Iterator<Item = C64>) -> (C64, C64) {
    let mut small = None::<C64>;
    let mut large = None::<C64>;
    for v in values {
        if small.is_none_or(|s| v.norm() < s.norm()) {
            small = Some(v);
        }
        if large.is_none_or(|l| v.norm() > l.norm()) {
            large = Some(v);
        }
    }
    (small.expect("nonempty spectrum"), large.expect("nonempty spectrum"))
}

fn dense_bounds(sys: &StateSpaceSystem) -> Result<(C64, C64)> {
    let spectrum = if sys.has_identity_mass() {
        eigenvalues(sys.a())?
    } else {
        generalized_eig(sys.a(), sys.e())?
    };
    Ok(extremes(spectrum.into_iter().map(|l| -l)))
}

/// Largest-magnitude eigenvalue of `op` by restarted Arnoldi from a fixed start vector.
fn dominant_eigenvalue<F>(n: usize, op: F) -> Result<C64>
where
    F: Fn(&ComplexVector) -> Result<ComplexVector>,
{
    // all-ones alone is orthogonal to the antisymmetric modes of symmetric stencils
    let mut start = ComplexVector::from_fn(n, |i, _| real(1.0 + i as f64 / n as f64));
    let m = ARNOLDI_DIM.min(n);
    let mut previous: Option<C64> = None;
    for _ in 0..MAX_RESTARTS {
        let mut q = ComplexMatrix::zeros(n, m + 1);
        let mut h = ComplexMatrix::zeros(m + 1, m);
        q.set_column(0, &start.normalize());
        let mut size = m;
        for j in 0..m {
            let mut w = op(&q.column(j).into_owned())?;
            for _pass in 0..2 {
                for i in 0..=j {
                    let c = q.column(i).dotc(&w);
                    h[(i, j)] += c;
                    w.axpy(-c, &q.column(i), C64::from(1.0));
                }
            }
            let norm = w.norm();
            h[(j + 1, j)] = real(norm);
            if norm <= 1e-14 * h.column(j).norm() {
                size = j + 1;
                break;
            }
            q.set_column(j + 1, &(w / real(norm)));
        }
        let hm = h.view((0, 0), (size, size)).into_owned();
        let ritz = eigenvalues(&hm)?;
        let theta = *ritz
            .iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("nonempty Ritz set");
        let invariant = size < m;
        // real operators may alternate between the two members of a conjugate pair
        let settled = |p: C64| (p - theta).norm().min((p - theta.conj()).norm()) <= RITZ_TOL * theta.norm();
        if invariant || previous.is_some_and(settled) {
            return Ok(theta);
        }
        previous = Some(theta);
        // restart from the Ritz vector of the dominant Ritz value
        let shifted = &hm - ComplexMatrix::identity(size, size) * theta;
        let y = null_vector(&shifted);
        start = q.view((0, 0), (n, size)) * y;
    }
    Err(Error::NonConvergence {
        iterations: MAX_RESTARTS,
    })
}

/// Approximate null vector of a nearly singular small matrix by inverse iteration.
fn null_vector(m: &ComplexMatrix) -> ComplexVector {
    let n = m.nrows();
    let perturbed = m + ComplexMatrix::identity(n, n) * real(1e-10 * m.norm().max(1e-300));
    let lu = perturbed.lu();
    let mut y = ComplexVector::from_element(n, real(1.0));
    for _ in 0..3 {
        y = lu.solve(&y).unwrap_or(y).normalize();
    }
    y
}

fn iterative_bounds(sys: &StateSpaceSystem) -> Result<(C64, C64)> {
    let solver = sys.solver();
    let n = sys.n();
    let largest = dominant_eigenvalue(n, |v| Ok(solver.apply_operator(v)))?;
    // K^{-1} v = (A - 0 E)^{-1} E v
    let inv_largest = dominant_eigenvalue(n, |v| solver.shifted_solve(real(0.0), &(sys.e() * v)))?;
    Ok((-(C64::from(1.0) / inv_largest), -largest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{diagonal_system, gen_test_system, TestSystemKind};

    #[test]
    fn diagonal_bounds() {
        let (s_min, s_max) = extreme_shift_bounds(&diagonal_system(&[-1.0, -10.0])).unwrap();
        assert!((s_min - real(1.0)).norm() < 1e-14);
        assert!((s_max - real(10.0)).norm() < 1e-14);
    }

    #[test]
    fn scaled_identity() {
        let (s_min, s_max) = extreme_shift_bounds(&diagonal_system(&[-1.0; 5])).unwrap();
        assert!((s_min - real(1.0)).norm() < 1e-14 && (s_max - real(1.0)).norm() < 1e-14);
    }

    #[test]
    fn laplacian_matches_closed_form() {
        let n = 100;
        let sys = gen_test_system(TestSystemKind::Laplacian1d, n, 0);
        let h2 = ((n + 1) as f64).powi(2);
        let mode = |k: usize| 4.0 * h2 * (k as f64 * std::f64::consts::PI / (2.0 * (n + 1) as f64)).sin().powi(2);
        let (s_min, s_max) = extreme_shift_bounds(&sys).unwrap();
        assert!((s_min.re - mode(1)).abs() <= 1e-6 * mode(1));
        assert!((s_max.re - mode(n)).abs() <= 1e-6 * mode(n));
    }

    #[test]
    fn iterative_route_agrees_with_dense() {
        for (kind, n) in [(TestSystemKind::Laplacian1d, 120), (TestSystemKind::RandomDescriptor, 80)] {
            let sys = gen_test_system(kind, n, 3);
            let (dmin, dmax) = dense_bounds(&sys).unwrap();
            let (imin, imax) = iterative_bounds(&sys).unwrap();
            assert!((dmin - imin).norm() <= 1e-6 * dmin.norm(), "{kind:?}: {dmin} vs {imin}");
            assert!((dmax - imax).norm() <= 1e-6 * dmax.norm(), "{kind:?}: {dmax} vs {imax}");
        }
    }
}
