use super::{ComplexMatrix, LuFactor, C64, SINGULAR_RCOND};
use crate::error::{Error, Result};

/// All eigenvalues of a square complex matrix, unordered, with multiplicity.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 0)
        .ok_or(Error::NonConvergence { iterations: 0 })?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Eigenvalues of `N^{-1} M`; fails with `SingularMass` when N is numerically singular.
pub fn generalized_eig(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<Vec<C64>> {
    if !m.is_square() || m.shape() != n.shape() {
        return Err(Error::DimensionMismatch(format!(
            "pencil shapes {:?} and {:?}",
            m.shape(),
            n.shape()
        )));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let lu = LuFactor::new(n);
    if lu.rcond() < SINGULAR_RCOND {
        return Err(Error::SingularMass);
    }
    eigenvalues(&lu.solve_matrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{c64, ComplexVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn det(m: &ComplexMatrix) -> C64 {
        // Independent of the LU used in production: cofactor-free Gaussian elimination.
        let mut a = m.clone();
        let n = a.nrows();
        let mut d = c64(1.0, 0.0);
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm())).unwrap();
            if p != k {
                a.swap_rows(p, k);
                d = -d;
            }
            let piv = a[(k, k)];
            d *= piv;
            for i in (k + 1)..n {
                let l = a[(i, k)] / piv;
                for j in k..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= l * t;
                }
            }
        }
        d
    }

    /// Roots of det(M - lambda N) from interpolated polynomial coefficients and Aberth iteration.
    fn characteristic_roots(m: &ComplexMatrix, n: &ComplexMatrix) -> Vec<C64> {
        let deg = m.nrows();
        let pts = deg + 1;
        let radius = 1.0;
        let samples: Vec<C64> = (0..pts)
            .map(|k| {
                let w = C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / pts as f64);
                det(&(m - n * w))
            })
            .collect();
        // inverse DFT gives monomial coefficients
        let coeffs: Vec<C64> = (0..pts)
            .map(|j| {
                let mut s = c64(0.0, 0.0);
                for (k, v) in samples.iter().enumerate() {
                    s += v * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / pts as f64);
                }
                s / (pts as f64 * radius.powi(j as i32))
            })
            .collect();
        let eval = |z: C64| coeffs.iter().rev().fold(c64(0.0, 0.0), |acc, c| acc * z + c);
        let deriv = |z: C64| {
            coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(c64(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64)
        };
        let mut roots: Vec<C64> = (0..deg)
            .map(|k| C64::from_polar(1.0 + 0.1 * k as f64, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64))
            .collect();
        for _ in 0..500 {
            let mut max_step: f64 = 0.0;
            for i in 0..deg {
                let ratio = eval(roots[i]) / deriv(roots[i]);
                let repulsion: C64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (roots[i] - roots[j])).sum();
                let step = ratio / (1.0 - ratio * repulsion);
                roots[i] -= step;
                max_step = max_step.max(step.norm());
            }
            if max_step < 1e-15 {
                break;
            }
        }
        roots
    }

    #[test]
    fn diagonal_and_scaled_identity() {
        let m = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c64(1.0, 0.0), c64(2.0, 0.0)]));
        let mut ev = generalized_eig(&m, &ComplexMatrix::identity(2, 2)).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c64(1.0, 0.0)).norm() < 1e-14 && (ev[1] - c64(2.0, 0.0)).norm() < 1e-14);
        let ev = generalized_eig(&ComplexMatrix::identity(2, 2), &(ComplexMatrix::identity(2, 2) * c64(2.0, 0.0))).unwrap();
        assert!(ev.iter().all(|v| (v - c64(0.5, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn random_pencil_matches_characteristic_polynomial_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let m = ComplexMatrix::from_fn(5, 5, |_, _| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let n = ComplexMatrix::identity(5, 5)
                + ComplexMatrix::from_fn(5, 5, |_, _| c64(0.3 * (rng.random::<f64>() - 0.5), 0.0));
            let ev = generalized_eig(&m, &n).unwrap();
            let oracle = characteristic_roots(&m, &n);
            for r in &oracle {
                let closest = ev.iter().map(|e| (e - r).norm()).fold(f64::INFINITY, f64::min);
                assert!(closest <= 1e-8, "root {r} unmatched by {closest:e}");
            }
            let trace = (n.clone().try_inverse().unwrap() * &m).trace();
            let sum: C64 = ev.iter().sum();
            assert!((sum - trace).norm() <= 1e-8 * trace.norm().max(1.0));
        }
    }

    #[test]
    fn singular_mass_is_rejected() {
        let n = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0)]));
        assert_eq!(generalized_eig(&ComplexMatrix::identity(2, 2), &n), Err(Error::SingularMass));
    }
}
