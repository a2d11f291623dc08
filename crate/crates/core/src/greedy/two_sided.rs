use super::{extreme_shift_bounds, is_candidate_failure, near_any, ranked, Algorithm, GreedyRun};
use crate::error::{Error, Result};
use crate::krylov::{project, BasisHalf, ProjectionBasis, ReducedModel, Side};
use crate::model::{make_grid, SampleGrid, StateSpaceSystem};
use crate::numkernel::C64;
use crate::remainder::{error_estimate_batch, EstimateOption};

fn petrov_galerkin(sys: &StateSpaceSystem, right: &BasisHalf, left: &BasisHalf) -> Result<ReducedModel> {
    project(sys, &ProjectionBasis::from_halves(right.clone(), Some(left.clone())))
}

/// Extends both halves by `(s, conj(s))`; on failure the halves are left untouched and
/// the number of solves spent is returned with the error.
fn extend(
    sys: &StateSpaceSystem,
    right: &mut BasisHalf,
    left: &mut BasisHalf,
    s: C64,
) -> std::result::Result<ReducedModel, (Error, usize)> {
    let mut r = right.clone();
    let mut l = left.clone();
    let spent = |r: &BasisHalf, l: &BasisHalf| r.solves() + l.solves() - right.solves() - left.solves();
    let outcome = r
        .push_shift(sys, s)
        .and_then(|()| l.push_shift(sys, s.conj()))
        .and_then(|()| petrov_galerkin(sys, &r, &l));
    match outcome {
        Ok(model) => {
            *right = r;
            *left = l;
            Ok(model)
        }
        Err(e) => Err((e, spent(&r, &l))),
    }
}

/// Two-sided greedy selection over `Z(alpha, beta, k)`; computes `|s_max|` first.
pub fn two_sided_greedy(
    sys: &StateSpaceSystem,
    alpha: f64,
    beta: f64,
    k: usize,
    l_max: usize,
    option: EstimateOption,
) -> Result<GreedyRun> {
    let grid = make_grid(alpha, beta, k)?;
    let (_, s_max) = extreme_shift_bounds(sys)?;
    two_sided_greedy_on_grid(sys, s_max.norm(), &grid, l_max, option)
}

/// Seeds `s_1 = i |s_max| / 10`, `t_1 = conj(s_1)`; each further `s` maximizes the
/// chosen error estimate over the grid minus existing shifts and Ritz values, and
/// `t = conj(s)`. Candidates whose solve or projection fails are skipped.
pub fn two_sided_greedy_on_grid(
    sys: &StateSpaceSystem,
    s_max_abs: f64,
    grid: &SampleGrid,
    l_max: usize,
    option: EstimateOption,
) -> Result<GreedyRun> {
    if l_max < 1 {
        return Err(Error::InvalidArgument("two-sided greedy needs l_max >= 1".into()));
    }
    let mut run = GreedyRun::new(Algorithm::TwoSided(option));
    let mut right = BasisHalf::new(Side::Right, sys.n());
    let mut left = BasisHalf::new(Side::Left, sys.n());
    let seed = C64::new(0.0, s_max_abs / 10.0);
    let model = extend(sys, &mut right, &mut left, seed).map_err(|(e, _)| e)?;
    run.models.push(model);

    while right.dim() < l_max {
        if right.dim() == sys.n() {
            run.note(format!("bases span the full space at order {}", right.dim()));
            break;
        }
        let rm = run.final_model().clone();
        let candidates: Vec<C64> = grid
            .points
            .iter()
            .copied()
            .filter(|&z| !near_any(z, right.shifts()) && !near_any(z, left.shifts()) && !near_any(z, rm.ritz()))
            .collect();
        if candidates.is_empty() {
            return Err(Error::DeadlockNoCandidate);
        }
        let values: Vec<Option<f64>> = error_estimate_batch(&rm, &candidates, option)?
            .into_iter()
            .map(|v| v.ok())
            .collect();

        let mut accepted = false;
        let mut saturated = false;
        for i in ranked(&values) {
            let s = candidates[i];
            match extend(sys, &mut right, &mut left, s) {
                Ok(model) => {
                    run.models.push(model);
                    accepted = true;
                    break;
                }
                Err((e @ Error::RankDeficient { .. }, spent)) => {
                    // the best remaining direction is already spanned: numerically converged
                    run.wasted_solves += spent;
                    run.note(format!("order {}: saturated, candidate {s} rejected ({e})", rm.order()));
                    saturated = true;
                    break;
                }
                Err((e, spent)) if is_candidate_failure(&e) => {
                    run.wasted_solves += spent;
                    run.note(format!("order {}: candidate {s} skipped ({e})", rm.order()));
                }
                Err((e, _)) => return Err(e),
            }
        }
        if saturated {
            break;
        }
        if !accepted {
            return Err(Error::DeadlockNoCandidate);
        }
    }
    run.solve_count += right.solves() + left.solves();
    run.right_shifts = right.shifts().to_vec();
    run.left_shifts = left.shifts().to_vec();
    run.iterations = right.dim();
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gen_test_system, TestSystemKind};
    use crate::remainder::error_direct;

    fn grid() -> SampleGrid {
        make_grid(-2.0, 4.0, 80).unwrap()
    }

    #[test]
    fn left_shifts_are_conjugates_and_lie_on_grid() {
        let sys = gen_test_system(TestSystemKind::RandomStable, 50, 1);
        let g = grid();
        for option in [EstimateOption::O1, EstimateOption::O2, EstimateOption::O3] {
            let run = two_sided_greedy_on_grid(&sys, 1e3, &g, 8, option).unwrap();
            assert_eq!(run.order(), 8);
            assert_eq!(run.solve_count, 16);
            for (s, t) in run.right_shifts.iter().zip(&run.left_shifts) {
                assert_eq!(*t, s.conj());
            }
            for s in &run.right_shifts[1..] {
                assert!(g.points.contains(s));
            }
        }
    }

    #[test]
    fn error_vanishes_at_every_shift() {
        let sys = gen_test_system(TestSystemKind::RandomDescriptor, 40, 4);
        let run = two_sided_greedy_on_grid(&sys, 1e3, &grid(), 6, EstimateOption::O2).unwrap();
        let rm = run.final_model();
        let mut nodes = run.right_shifts.clone();
        nodes.extend(&run.left_shifts);
        let g = SampleGrid {
            alpha: 0.0,
            beta: 0.0,
            k: 0,
            points: nodes,
        };
        let curve = error_direct(&sys, rm, &g).unwrap();
        for i in 0..curve.len() {
            let h = curve.h[i].unwrap().norm();
            assert!(curve.e_direct[i].unwrap().norm() <= 1e-7 * (1.0 + h));
        }
    }

    #[test]
    fn identical_inputs_give_identical_histories() {
        let sys = gen_test_system(TestSystemKind::RandomStable, 40, 7);
        let a = two_sided_greedy(&sys, -2.0, 4.0, 60, 7, EstimateOption::O3).unwrap();
        let b = two_sided_greedy(&sys, -2.0, 4.0, 60, 7, EstimateOption::O3).unwrap();
        assert_eq!(a.right_shifts, b.right_shifts);
        assert_eq!(a.left_shifts, b.left_shifts);
    }

    #[test]
    fn empty_grid_deadlocks() {
        let sys = gen_test_system(TestSystemKind::RandomStable, 10, 0);
        let seed_only = SampleGrid {
            alpha: 0.0,
            beta: 0.0,
            k: 0,
            points: vec![C64::new(0.0, 100.0)],
        };
        let r = two_sided_greedy_on_grid(&sys, 1e3, &seed_only, 3, EstimateOption::O1);
        assert_eq!(r.unwrap_err(), Error::DeadlockNoCandidate);
    }
}
