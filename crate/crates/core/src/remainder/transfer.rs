use crate::error::{Error, Result};
use crate::krylov::ReducedModel;
use crate::model::{SampleGrid, StateSpaceSystem};
use crate::numkernel::{reduced_resolve_batch, C64};
use rayon::prelude::*;

/// `h(z) = c^H (zE - A)^{-1} b`.
pub fn transfer_eval(sys: &StateSpaceSystem, z: C64) -> Result<C64> {
    let x = sys.solver().resolvent(z, sys.b())?;
    Ok(sys.c().dotc(&x))
}

/// `h` at every point, in order, with per-point failures.
pub fn transfer_eval_batch(sys: &StateSpaceSystem, zs: &[C64]) -> Vec<Result<C64>> {
    zs.par_iter().map(|&z| transfer_eval(sys, z)).collect()
}

/// `h~(z) = cr^H (z Er - Ar)^{-1} br`.
pub fn reduced_transfer_eval(rm: &ReducedModel, z: C64) -> Result<C64> {
    let mut out = reduced_transfer_eval_batch(rm, &[z])?;
    out.pop().expect("one point in, one value out")
}

/// `h~` at every point, sharing one condensation of the reduced pencil.
pub fn reduced_transfer_eval_batch(rm: &ReducedModel, zs: &[C64]) -> Result<Vec<Result<C64>>> {
    let xs = reduced_resolve_batch(rm.ar(), rm.er(), rm.br(), zs)?;
    Ok(xs.into_iter().map(|x| x.map(|x| rm.cr().dotc(&x))).collect())
}

/// Samples of `h`, `h~` and `e = h - h~` on a grid; `None` marks a pole hit.
#[derive(Debug, Clone)]
pub struct ErrorCurve {
    pub points: Vec<C64>,
    pub h: Vec<Option<C64>>,
    pub h_tilde: Vec<Option<C64>>,
    pub e_direct: Vec<Option<C64>>,
    pub e_formula: Vec<Option<C64>>,
    /// Largest `|e_direct|` over the populated samples (0 when there are none).
    pub max_abs_error: f64,
}

impl ErrorCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Samples where `h`, `h~` and `e_direct` are all available.
    pub fn populated(&self) -> usize {
        self.e_direct.iter().filter(|e| e.is_some()).count()
    }

    /// Index of the sample attaining `max_abs_error`.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in self.e_direct.iter().enumerate() {
            if let Some(e) = e {
                if best.is_none_or(|(_, m)| e.norm() > m) {
                    best = Some((i, e.norm()));
                }
            }
        }
        best.map(|(i, _)| i)
    }
}

/// `h(z)` over a grid; shared by every model of the same system.
pub fn sample_transfer(sys: &StateSpaceSystem, grid: &SampleGrid) -> Vec<Option<C64>> {
    transfer_eval_batch(sys, &grid.points).into_iter().map(Result::ok).collect()
}

/// Pointwise `h - h~` with `h` computed here.
pub fn error_direct(sys: &StateSpaceSystem, rm: &ReducedModel, grid: &SampleGrid) -> Result<ErrorCurve> {
    let h = sample_transfer(sys, grid);
    error_direct_with_samples(rm, grid, &h)
}

/// Pointwise `h - h~` reusing precomputed samples of `h` on the same grid.
pub fn error_direct_with_samples(rm: &ReducedModel, grid: &SampleGrid, h: &[Option<C64>]) -> Result<ErrorCurve> {
    if h.len() != grid.points.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} samples of h for {} grid points",
            h.len(),
            grid.points.len()
        )));
    }
    let h_tilde: Vec<Option<C64>> = reduced_transfer_eval_batch(rm, &grid.points)?
        .into_iter()
        .map(Result::ok)
        .collect();
    let e_direct: Vec<Option<C64>> = h
        .iter()
        .zip(&h_tilde)
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        })
        .collect();
    let max_abs_error = e_direct.iter().flatten().map(|e| e.norm()).fold(0.0, f64::max);
    Ok(ErrorCurve {
        points: grid.points.clone(),
        h: h.to_vec(),
        h_tilde,
        e_formula: vec![None; e_direct.len()],
        e_direct,
        max_abs_error,
    })
}
