//! Shift selection: ARKSM, the two-sided greedy method with its three error
//! surrogates, a SISO IRKA baseline, and the max-error sweep used to compare them.

mod arksm;
mod bounds;
mod irka;
mod two_sided;

pub use arksm::{arksm, arksm_with_bounds, DEFAULT_EDGE_SAMPLES};
pub use bounds::{extreme_shift_bounds, DENSE_BOUNDS_LIMIT, DENSE_FALLBACK_LIMIT};
pub use irka::{irka_baseline, log_spaced_real_shifts, IRKA_MAX_ITER, IRKA_TOL};
pub use two_sided::{two_sided_greedy, two_sided_greedy_on_grid};

use crate::error::{Error, Result};
use crate::krylov::ReducedModel;
use crate::model::{SampleGrid, StateSpaceSystem};
use crate::numkernel::C64;
use crate::remainder::{error_direct, error_direct_with_samples, EstimateOption, ErrorCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Arksm,
    TwoSided(EstimateOption),
    Irka,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Arksm => "arksm",
            Self::TwoSided(EstimateOption::O1) => "two_sided_o1",
            Self::TwoSided(EstimateOption::O2) => "two_sided_o2",
            Self::TwoSided(EstimateOption::O3) => "two_sided_o3",
            Self::Irka => "irka",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "arksm" => Ok(Self::Arksm),
            "two_sided_o1" => Ok(Self::TwoSided(EstimateOption::O1)),
            "two_sided_o2" => Ok(Self::TwoSided(EstimateOption::O2)),
            "two_sided_o3" => Ok(Self::TwoSided(EstimateOption::O3)),
            "irka" => Ok(Self::Irka),
            other => Err(format!("unknown algorithm '{other}'")),
        }
    }
}

/// Result of one shift-selection run.
#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub algorithm: Algorithm,
    /// Accepted right shifts in order of acceptance.
    pub right_shifts: Vec<C64>,
    /// Accepted left shifts (two-sided and IRKA; empty for ARKSM).
    pub left_shifts: Vec<C64>,
    /// Model after each accepted order; IRKA keeps its final model only.
    pub models: Vec<ReducedModel>,
    /// Shifted solves with the full-order pencil that built the accepted bases.
    pub solve_count: usize,
    /// Solves spent on candidates or iterates that were then discarded.
    pub wasted_solves: usize,
    /// Outer iterations (IRKA); equals the final order for the greedy methods.
    pub iterations: usize,
    /// IRKA shift convergence; always true for the greedy methods.
    pub converged: bool,
    /// Events worth reporting: skipped candidates, reflected shifts, unstable Ritz values.
    pub notes: Vec<String>,
}

impl GreedyRun {
    fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            right_shifts: Vec::new(),
            left_shifts: Vec::new(),
            models: Vec::new(),
            solve_count: 0,
            wasted_solves: 0,
            iterations: 0,
            converged: true,
            notes: Vec::new(),
        }
    }

    pub fn final_model(&self) -> &ReducedModel {
        self.models.last().expect("a run holds at least one model")
    }

    pub fn order(&self) -> usize {
        self.final_model().order()
    }

    fn note(&mut self, msg: String) {
        log::debug!("{}: {msg}", self.algorithm.name());
        self.notes.push(msg);
    }

    /// `(order, max |e|)` for every retained model, reusing samples of `h` on `grid`.
    pub fn error_history(&self, grid: &SampleGrid, h: &[Option<C64>]) -> Result<Vec<(usize, f64)>> {
        self.models
            .iter()
            .map(|rm| Ok((rm.order(), error_direct_with_samples(rm, grid, h)?.max_abs_error)))
            .collect()
    }
}

/// `|e|` over the grid for one model; `max_abs_error` is the sweep's sup-norm estimate.
pub fn hinf_sweep(sys: &StateSpaceSystem, rm: &ReducedModel, grid: &SampleGrid) -> Result<ErrorCurve> {
    error_direct(sys, rm, grid)
}

/// `z` lies within `1e-12 |z|` of one of `points`.
fn near_any(z: C64, points: &[C64]) -> bool {
    let tol = 1e-12 * z.norm();
    points.iter().any(|&p| (z - p).norm() <= tol)
}

/// Candidate indices by decreasing value; ties keep the lower index first.
fn ranked(values: &[Option<f64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_some_and(|v| !v.is_nan())).collect();
    idx.sort_by(|&a, &b| values[b].unwrap().total_cmp(&values[a].unwrap()));
    idx
}

/// Errors that reject a single candidate rather than the whole run.
fn is_candidate_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularShift { .. } | Error::RankDeficient { .. } | Error::PoleAtZ { .. } | Error::SingularReducedMass
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_breaks_ties_by_index() {
        let v = [Some(1.0), None, Some(3.0), Some(3.0), Some(f64::NAN), Some(2.0)];
        assert_eq!(ranked(&v), vec![2, 3, 5, 0]);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [
            Algorithm::Arksm,
            Algorithm::TwoSided(EstimateOption::O1),
            Algorithm::TwoSided(EstimateOption::O2),
            Algorithm::TwoSided(EstimateOption::O3),
            Algorithm::Irka,
        ] {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert!("bogus".parse::<Algorithm>().is_err());
    }

    #[test]
    fn exclusion_is_relative() {
        let z = C64::new(0.0, 1e6);
        assert!(near_any(z, &[C64::new(0.0, 1e6 + 1e-7)]));
        assert!(!near_any(z, &[C64::new(0.0, 1e6 + 1e-5)]));
        assert!(near_any(C64::new(0.0, 0.0), &[C64::new(0.0, 0.0)]));
    }
}
