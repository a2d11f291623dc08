use crate::error::Result;
use crate::krylov::{LanczosFactorization, ShiftSet};
use crate::model::StateSpaceSystem;
use crate::numkernel::{c64, eigenvalues, ComplexMatrix, ComplexVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of comparing `w^H P(K) u` with `m0 * e_1^H P(T) e_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureReport {
    pub degree: usize,
    pub trials: usize,
    /// Worst relative discrepancy over the random polynomials of `degree`.
    pub max_discrepancy: f64,
    /// Relative discrepancy for the bare power `x^{2l}` of the scaled variable, where
    /// exactness is not expected.
    pub control_discrepancy: f64,
}

/// `(phi(K)^{-1} E^{-1} b, psi(K)^{-H} c)`: the weighted starting pair whose Lanczos
/// process turns the projected pencil into a Gauss-type quadrature rule.
pub fn weighted_start_vectors(sys: &StateSpaceSystem, shifts: &ShiftSet) -> Result<(ComplexVector, ComplexVector)> {
    let solver = sys.solver();
    let mut u = solver.mass_solve(sys.b());
    for &s in &shifts.right {
        u = solver.shifted_solve(s, &(sys.e() * &u))?;
    }
    let mut w = sys.c().clone();
    for &t in &shifts.left {
        w = sys.e().ad_mul(&solver.shifted_solve_adjoint(t, &w)?);
    }
    Ok((u, w))
}

/// Checks that the Lanczos tridiagonal reproduces the weighted moments
/// `c^H psi(K)^{-1} P(K) phi(K)^{-1} E^{-1} b` for random polynomials `P` of the
/// given degree. The factorization must come from [`weighted_start_vectors`].
///
/// Polynomials are expressed in the variable `(x - gamma) / rho`, where `gamma` is the
/// mean Ritz value and `rho` the largest Ritz distance from it, so that no single power
/// dominates; discrepancies are relative to `sum |a_k| |mu_k|`.
pub fn quadrature_exactness_check(
    sys: &StateSpaceSystem,
    lanczos: &LanczosFactorization,
    shifts: &ShiftSet,
    degree: usize,
    trials: usize,
    seed: u64,
) -> Result<QuadratureReport> {
    let l = lanczos.steps();
    let t = &lanczos.t;
    let ritz = eigenvalues(t)?;
    let gamma = ritz.iter().sum::<C64>() / l as f64;
    let mut rho = ritz.iter().map(|z| (z - gamma).norm()).fold(0.0, f64::max);
    if rho == 0.0 {
        rho = gamma.norm().max(1.0);
    }
    let top = degree.max(2 * l);
    let (u, w) = weighted_start_vectors(sys, shifts)?;
    let solver = sys.solver();

    let mut full = Vec::with_capacity(top + 1);
    let mut x = u;
    for k in 0..=top {
        if k > 0 {
            x = (solver.apply_operator(&x) - &x * gamma) / C64::from(rho);
        }
        full.push(w.dotc(&x));
    }
    let mut reduced = Vec::with_capacity(top + 1);
    let ts = (t - ComplexMatrix::identity(l, l) * gamma) / C64::from(rho);
    let mut y = ComplexVector::zeros(l);
    y[0] = C64::from(1.0);
    for k in 0..=top {
        if k > 0 {
            y = &ts * y;
        }
        reduced.push(lanczos.m0 * y[0]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut discrepancy = |d: usize| {
        let coeffs: Vec<C64> = (0..=d)
            .map(|k| {
                let a = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                // keep the leading coefficient away from zero
                if k == d {
                    a + a / a.norm()
                } else {
                    a
                }
            })
            .collect();
        let diff: C64 = coeffs.iter().zip(full.iter().zip(&reduced)).map(|(a, (m, r))| a * (m - r)).sum();
        let scale: f64 = coeffs.iter().zip(&full).map(|(a, m)| a.norm() * m.norm()).sum();
        diff.norm() / scale.max(f64::MIN_POSITIVE)
    };
    let max_discrepancy = (0..trials).map(|_| discrepancy(degree)).fold(0.0, f64::max);
    // control: the bare top power, so exactly integrated low-order terms cannot mask its error
    let control_discrepancy = (full[2 * l] - reduced[2 * l]).norm() / full[2 * l].norm().max(f64::MIN_POSITIVE);
    Ok(QuadratureReport {
        degree,
        trials,
        max_discrepancy,
        control_discrepancy,
    })
}

/// Dense `w^H M^k u` for `k = 0..=top`; used by tests as an independent route.
#[cfg(test)]
fn dense_moments(m: &ComplexMatrix, u: &ComplexVector, w: &ComplexVector, top: usize) -> Vec<C64> {
    let mut out = Vec::new();
    let mut x = u.clone();
    for _ in 0..=top {
        out.push(w.dotc(&x));
        x = m * x;
    }
    out
}
