use super::{extreme_shift_bounds, is_candidate_failure, near_any, ranked, Algorithm, GreedyRun};
use crate::error::{Error, Result};
use crate::krylov::{project, BasisHalf, ProjectionBasis, ReducedModel, ShiftSet, Side};
use crate::model::StateSpaceSystem;
use crate::numkernel::{complex_convex_hull, C64};
use crate::remainder::{error_estimate_batch, EstimateOption};

/// Boundary samples per hull edge.
pub const DEFAULT_EDGE_SAMPLES: usize = 50;

fn galerkin(sys: &StateSpaceSystem, half: &BasisHalf) -> Result<ReducedModel> {
    let shifts = ShiftSet::one_sided(half.shifts().to_vec(), 0);
    project(sys, &ProjectionBasis::one_sided(half.basis().clone(), shifts))
}

/// Adaptive rational Krylov with one-sided projection; computes the extreme shifts first.
pub fn arksm(sys: &StateSpaceSystem, l_max: usize, edge_samples: usize) -> Result<GreedyRun> {
    let bounds = extreme_shift_bounds(sys)?;
    arksm_with_bounds(sys, bounds, l_max, edge_samples)
}

/// ARKSM seeded with `s_1 = s_min`, `s_2 = s_max`. Each further shift maximizes
/// `|phi(z) / Lambda(z)|` over samples of the boundary of the convex hull of the
/// mirrored Ritz values and the two extreme shifts. Stops early if the space
/// becomes invariant.
pub fn arksm_with_bounds(
    sys: &StateSpaceSystem,
    (s_min, s_max): (C64, C64),
    l_max: usize,
    edge_samples: usize,
) -> Result<GreedyRun> {
    if l_max < 2 {
        return Err(Error::InvalidArgument(format!("ARKSM needs l_max >= 2, got {l_max}")));
    }
    let mut run = GreedyRun::new(Algorithm::Arksm);
    let mut half = BasisHalf::new(Side::Right, sys.n());
    half.push_shift(sys, s_min)?;
    run.models.push(galerkin(sys, &half)?);
    if s_max == s_min {
        run.note(format!("s_max equals s_min = {s_min}; second seed skipped"));
    } else {
        match half.push_shift(sys, s_max) {
            Ok(()) => run.models.push(galerkin(sys, &half)?),
            Err(Error::RankDeficient { .. }) => run.note("second seed already spanned".into()),
            Err(e) => return Err(e),
        }
    }

    while half.dim() < l_max {
        if half.dim() == sys.n() {
            run.note(format!("basis spans the full space at order {}", half.dim()));
            break;
        }
        let rm = run.final_model().clone();
        let mirrored: Vec<C64> = rm.ritz().iter().map(|&l| -l).collect();
        let unstable = mirrored.iter().filter(|z| z.re < 0.0).count();
        if unstable > 0 {
            run.note(format!("order {}: {unstable} unstable Ritz values mirrored into the hull", rm.order()));
        }
        let mut hull_points = mirrored;
        hull_points.push(s_min);
        hull_points.push(s_max);
        // edges are split at hull points lying on them, so a nearly real spectrum
        // spanning decades is sampled between consecutive mirrored Ritz values
        let samples = complex_convex_hull(&hull_points).boundary_samples_through(&hull_points, edge_samples);
        let candidates: Vec<C64> = samples
            .into_iter()
            .filter(|&z| !near_any(z, half.shifts()) && !near_any(z, rm.ritz()))
            .collect();
        let values: Vec<Option<f64>> = error_estimate_batch(&rm, &candidates, EstimateOption::O1)?
            .into_iter()
            .map(|v| v.ok())
            .collect();

        let mut accepted = false;
        let mut saturated = false;
        for i in ranked(&values) {
            let s = candidates[i];
            let mut trial = half.clone();
            match trial.push_shift(sys, s).and_then(|()| galerkin(sys, &trial)) {
                Ok(model) => {
                    half = trial;
                    run.models.push(model);
                    accepted = true;
                    break;
                }
                Err(e @ Error::RankDeficient { .. }) => {
                    // the best remaining direction is already spanned: numerically converged
                    run.wasted_solves += trial.solves() - half.solves();
                    run.note(format!("order {}: saturated, candidate {s} rejected ({e})", rm.order()));
                    saturated = true;
                    break;
                }
                Err(e) if is_candidate_failure(&e) => {
                    run.wasted_solves += trial.solves() - half.solves();
                    run.note(format!("order {}: candidate {s} skipped ({e})", rm.order()));
                }
                Err(e) => return Err(e),
            }
        }
        if saturated {
            break;
        }
        if !accepted {
            return Err(Error::DeadlockNoCandidate);
        }
    }
    run.solve_count += half.solves();
    run.right_shifts = half.shifts().to_vec();
    run.iterations = half.dim();
    Ok(run)
}
