use super::{Algorithm, GreedyRun};
use crate::error::{Error, Result};
use crate::krylov::{project, BasisHalf, ProjectionBasis, ReducedModel, Side};
use crate::model::{logspace, StateSpaceSystem};
use crate::numkernel::{real, C64};

pub const IRKA_MAX_ITER: usize = 100;
pub const IRKA_TOL: f64 = 1e-6;

/// `l` real shifts log-spaced between `lo` and `hi` (magnitudes of the extreme shifts).
pub fn log_spaced_real_shifts(lo: f64, hi: f64, l: usize) -> Vec<C64> {
    logspace(lo.log10(), hi.log10(), l).into_iter().map(real).collect()
}

fn sorted(mut s: Vec<C64>) -> Vec<C64> {
    s.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    s
}

fn closed_under_conjugation(s: &[C64]) -> bool {
    s.iter().all(|z| s.iter().any(|w| (w - z.conj()).norm() <= 1e-12 * z.norm().max(1.0)))
}

/// Hermite model at `shifts`: `V` from `(A - sigma E)^{-1} b`, `W` from `(A - sigma E)^{-H} c`.
/// The error carries the solves spent.
fn hermite_model(sys: &StateSpaceSystem, shifts: &[C64]) -> std::result::Result<ReducedModel, (Error, usize)> {
    let mut right = BasisHalf::new(Side::Right, sys.n());
    let mut left = BasisHalf::new(Side::Left, sys.n());
    let built = shifts
        .iter()
        .try_for_each(|&s| right.push_shift(sys, s).and_then(|()| left.push_shift(sys, s)))
        .and_then(|()| project(sys, &ProjectionBasis::from_halves(right.clone(), Some(left.clone()))));
    built.map_err(|e| (e, right.solves() + left.solves()))
}

/// SISO iterative rational Krylov: interpolate at `sigma`, move `sigma` to the mirrored
/// Ritz values `-conj(lambda)`, and stop when the sorted shift vector moves less than
/// `tol` relative to its norm or after `max_iter` iterations. Mirrored values in the
/// closed left half-plane are reflected and noted.
pub fn irka_baseline(sys: &StateSpaceSystem, initial: &[C64], max_iter: usize, tol: f64) -> Result<GreedyRun> {
    if initial.is_empty() || max_iter == 0 {
        return Err(Error::InvalidArgument("IRKA needs at least one shift and one iteration".into()));
    }
    if !closed_under_conjugation(initial) {
        return Err(Error::InvalidArgument("IRKA initial shifts must be closed under conjugation".into()));
    }
    let mut run = GreedyRun::new(Algorithm::Irka);
    run.converged = false;
    let mut sigma = sorted(initial.to_vec());
    let mut model = None;

    for iter in 1..=max_iter {
        let rm = match hermite_model(sys, &sigma) {
            Ok(rm) => {
                run.solve_count += 2 * sigma.len();
                rm
            }
            Err((Error::SingularShift { shift }, spent)) => {
                run.wasted_solves += spent;
                for s in sigma.iter_mut().filter(|s| **s == shift || **s == shift.conj()) {
                    *s *= 1.0 + 1e-8;
                }
                run.note(format!("iteration {iter}: shift {shift} singular, perturbed and retried"));
                let rm = hermite_model(sys, &sigma).map_err(|(e, _)| e)?;
                run.solve_count += 2 * sigma.len();
                rm
            }
            Err((e, _)) => return Err(e),
        };
        run.iterations = iter;

        let mut next: Vec<C64> = rm.ritz().iter().map(|l| -l.conj()).collect();
        let reflected = next.iter().filter(|s| s.re <= 0.0).count();
        if reflected > 0 {
            run.note(format!("iteration {iter}: {reflected} unstable shifts reflected"));
            for s in next.iter_mut().filter(|s| s.re <= 0.0) {
                *s = -s.conj();
            }
        }
        let next = sorted(next);
        let step: f64 = next.iter().zip(&sigma).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let size: f64 = next.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        run.right_shifts = sigma.clone();
        run.left_shifts = sigma.clone();
        model = Some(rm);
        if step < tol * size {
            run.converged = true;
            break;
        }
        sigma = next;
    }
    run.models.push(model.expect("at least one iteration ran"));
    if !run.converged {
        run.note(format!("no shift convergence after {max_iter} iterations"));
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{diagonal_system, gen_test_system, TestSystemKind};

    #[test]
    fn scalar_fixed_point() {
        let sys = diagonal_system(&[-2.0]);
        let run = irka_baseline(&sys, &[real(1.0)], IRKA_MAX_ITER, IRKA_TOL).unwrap();
        assert!(run.converged);
        assert!(run.iterations <= 2);
        assert!((run.right_shifts[0] - real(2.0)).norm() < 1e-12);
        assert_eq!(run.solve_count, 2 * run.iterations);
    }

    #[test]
    fn converged_shifts_are_a_fixed_point() {
        let sys = gen_test_system(TestSystemKind::RandomStable, 40, 3);
        let start = log_spaced_real_shifts(1.0, 100.0, 4);
        let first = irka_baseline(&sys, &start, IRKA_MAX_ITER, IRKA_TOL).unwrap();
        assert!(first.converged, "{:?}", first.notes);
        let fixed: Vec<C64> = first.final_model().ritz().iter().map(|l| -l.conj()).collect();
        let again = irka_baseline(&sys, &fixed, IRKA_MAX_ITER, IRKA_TOL).unwrap();
        assert!(again.converged);
        assert_eq!(again.iterations, 1);
        assert_eq!(again.solve_count, 8);
    }

    #[test]
    fn iteration_cap_is_respected() {
        let sys = gen_test_system(TestSystemKind::RandomStable, 30, 5);
        let run = irka_baseline(&sys, &log_spaced_real_shifts(1.0, 1e3, 6), 3, 0.0).unwrap();
        assert!(!run.converged);
        assert_eq!(run.iterations, 3);
        assert_eq!(run.solve_count, 2 * 3 * 6);
    }

    #[test]
    fn rejects_unpaired_complex_shifts() {
        let sys = diagonal_system(&[-1.0, -2.0]);
        let r = irka_baseline(&sys, &[C64::new(1.0, 1.0)], 10, IRKA_TOL);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn log_spacing_hits_both_ends() {
        let s = log_spaced_real_shifts(2.0, 200.0, 3);
        assert!((s[0].re - 2.0).abs() < 1e-12 && (s[1].re - 20.0).abs() < 1e-11 && (s[2].re - 200.0).abs() < 1e-10);
    }
}
