use super::poly::RootPoly;
use crate::error::{Error, Result};
use crate::krylov::{ReducedModel, Sidedness};
use crate::numkernel::{reduced_resolve_batch, C64};
use serde::{Deserialize, Serialize};

/// Cheap surrogates for `|e(z)|`, up to constants that do not affect an argmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimateOption {
    /// `1 / |G(z)|`
    O1,
    /// `1 / |G(z)| * ||(z Er - Ar)^{-1} br||`
    O2,
    /// `1 / |G(z)| * |h~(z)|`
    O3,
}

impl EstimateOption {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Self::O1),
            2 => Some(Self::O2),
            3 => Some(Self::O3),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::O1 => 1,
            Self::O2 => 2,
            Self::O3 => 3,
        }
    }
}

/// `ln (1/|G(z)|)`: `ln|phi psi / Lambda^2|` for two-sided models and
/// `ln|phi / Lambda|` for one-sided models.
pub fn log_inverse_g(rm: &ReducedModel, z: C64) -> f64 {
    let shifts = rm.shifts();
    let lambda = RootPoly::new(rm.ritz().to_vec()).log_abs(z);
    let phi = RootPoly::new(shifts.right.clone()).log_abs(z);
    match rm.sidedness() {
        Sidedness::TwoSided => phi + RootPoly::new(shifts.left.clone()).log_abs(z) - 2.0 * lambda,
        Sidedness::OneSided => phi - lambda,
    }
}

fn finish(rm: &ReducedModel, z: C64, log_g: f64, reduced: Option<f64>) -> Result<f64> {
    if rm.ritz().contains(&z) || log_g.is_nan() || log_g == f64::INFINITY {
        return Err(Error::PoleAtZ { z });
    }
    let value = match reduced {
        None => log_g.exp(),
        Some(r) => (log_g + r.ln()).exp(),
    };
    if value.is_nan() {
        return Err(Error::PoleAtZ { z });
    }
    Ok(value)
}

/// Unscaled error estimate at `z`; `PoleAtZ` at a Ritz value.
pub fn error_estimate(rm: &ReducedModel, z: C64, option: EstimateOption) -> Result<f64> {
    let mut out = error_estimate_batch(rm, &[z], option)?;
    out.pop().expect("one point in, one value out")
}

/// Estimates for every candidate, sharing one reduced condensation across points.
pub fn error_estimate_batch(rm: &ReducedModel, zs: &[C64], option: EstimateOption) -> Result<Vec<Result<f64>>> {
    let reduced: Vec<Option<Result<f64>>> = match option {
        EstimateOption::O1 => vec![None; zs.len()],
        EstimateOption::O2 | EstimateOption::O3 => reduced_resolve_batch(rm.ar(), rm.er(), rm.br(), zs)?
            .into_iter()
            .map(|x| {
                Some(x.map(|x| match option {
                    EstimateOption::O2 => x.norm(),
                    _ => rm.cr().dotc(&x).norm(),
                }))
            })
            .collect(),
    };
    Ok(zs
        .iter()
        .zip(reduced)
        .map(|(&z, r)| {
            let log_g = log_inverse_g(rm, z);
            match r {
                None => finish(rm, z, log_g, None),
                Some(Ok(r)) => finish(rm, z, log_g, Some(r)),
                Some(Err(_)) => Err(Error::PoleAtZ { z }),
            }
        })
        .collect())
}
