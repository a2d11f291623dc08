//! Transfer-function evaluation and the interpolation remainder: the explicit error
//! formulas, residual closed forms, divided differences, quadrature exactness and
//! the cheap error estimates used for shift selection.

mod divided;
mod estimate;
mod formula;
mod poly;
mod quadrature;
mod transfer;

pub use divided::{divided_difference, resolvent_divided_difference, weighted_resolvent_divided_difference};
pub use estimate::{error_estimate, error_estimate_batch, log_inverse_g, EstimateOption};
pub use formula::{error_formula, residual_pair, ErrorMode, RemainderFormula, ResidualPair};
pub use poly::{RootPoly, RootRatio};
pub use quadrature::{quadrature_exactness_check, weighted_start_vectors, QuadratureReport};
pub use transfer::{
    error_direct, error_direct_with_samples, reduced_transfer_eval, reduced_transfer_eval_batch, sample_transfer,
    transfer_eval, transfer_eval_batch, ErrorCurve,
};
