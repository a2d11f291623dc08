//! Shifted solves with the pencil `(A, E)`.
//!
//! `PencilSolver` condenses `E^{-1}A = Q H Q^H` to upper Hessenberg form once,
//! after which every shift costs an O(n^2) Hessenberg LU. Descriptor systems
//! larger than `CONDENSE_LIMIT` skip the condensation (it would form `E^{-1}A`
//! densely) and factor `A - sE` per call instead.

use super::{ComplexMatrix, ComplexVector, HessenbergLu, LuFactor, C64, SINGULAR_RCOND};
use crate::error::{Error, Result};
use rayon::prelude::*;

const CONDENSE_LIMIT: usize = 500;

/// Solves `(A - sigma E) x = rhs` by a dense LU of the shifted matrix.
pub fn solve_shifted(a: &ComplexMatrix, e: &ComplexMatrix, sigma: C64, rhs: &ComplexVector) -> Result<ComplexVector> {
    check_pencil(a, e)?;
    if rhs.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} for order {}",
            rhs.len(),
            a.nrows()
        )));
    }
    let lu = LuFactor::new(&(a - e * sigma));
    if lu.rcond() < SINGULAR_RCOND {
        return Err(Error::SingularShift { shift: sigma });
    }
    Ok(lu.solve(rhs))
}

fn check_pencil(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.shape() != e.shape() {
        return Err(Error::DimensionMismatch(format!(
            "pencil shapes {:?} and {:?}",
            a.shape(),
            e.shape()
        )));
    }
    Ok(())
}

fn is_identity(e: &ComplexMatrix) -> bool {
    e.iter().enumerate().all(|(k, v)| {
        let (i, j) = (k % e.nrows(), k / e.nrows());
        if i == j {
            *v == C64::new(1.0, 0.0)
        } else {
            *v == C64::new(0.0, 0.0)
        }
    })
}

#[derive(Debug, Clone)]
enum Strategy {
    /// `E^{-1}A = Q H Q^H`.
    Condensed { q: ComplexMatrix, h: ComplexMatrix },
    Dense,
}

#[derive(Debug, Clone)]
pub struct PencilSolver {
    a: ComplexMatrix,
    e: ComplexMatrix,
    mass: Option<LuFactor>,
    strategy: Strategy,
}

impl PencilSolver {
    pub fn new(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<Self> {
        check_pencil(a, e)?;
        let n = a.nrows();
        let mass = if is_identity(e) {
            None
        } else {
            let lu = LuFactor::new(e);
            if lu.rcond() < SINGULAR_RCOND {
                return Err(Error::SingularMass);
            }
            Some(lu)
        };
        let strategy = if mass.is_none() || n <= CONDENSE_LIMIT {
            let k = match &mass {
                None => a.clone(),
                Some(lu) => lu.solve_matrix(a),
            };
            if n == 0 {
                Strategy::Condensed { q: k.clone(), h: k }
            } else {
                let (q, h) = k.hessenberg().unpack();
                Strategy::Condensed { q, h }
            }
        } else {
            Strategy::Dense
        };
        Ok(Self {
            a: a.clone(),
            e: e.clone(),
            mass,
            strategy,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn e(&self) -> &ComplexMatrix {
        &self.e
    }

    pub fn has_identity_mass(&self) -> bool {
        self.mass.is_none()
    }

    /// `E^{-1} v`.
    pub fn mass_solve(&self, v: &ComplexVector) -> ComplexVector {
        match &self.mass {
            None => v.clone(),
            Some(lu) => lu.solve(v),
        }
    }

    /// `E^{-H} v`.
    pub fn mass_solve_adjoint(&self, v: &ComplexVector) -> ComplexVector {
        match &self.mass {
            None => v.clone(),
            Some(lu) => lu.solve_adjoint(v),
        }
    }

    /// `E^{-1} A v`.
    pub fn apply_operator(&self, v: &ComplexVector) -> ComplexVector {
        self.mass_solve(&(&self.a * v))
    }

    /// `(E^{-1} A)^H v = A^H E^{-H} v`.
    pub fn apply_operator_adjoint(&self, v: &ComplexVector) -> ComplexVector {
        self.a.ad_mul(&self.mass_solve_adjoint(v))
    }

    /// `(A - sigma E)^{-1} rhs`.
    pub fn shifted_solve(&self, sigma: C64, rhs: &ComplexVector) -> Result<ComplexVector> {
        match &self.strategy {
            Strategy::Condensed { q, h } => {
                let lu = HessenbergLu::new_shifted(h, sigma);
                if lu.rcond() < SINGULAR_RCOND {
                    return Err(Error::SingularShift { shift: sigma });
                }
                let y = q.ad_mul(&self.mass_solve(rhs));
                Ok(q * lu.solve(&y))
            }
            Strategy::Dense => solve_shifted(&self.a, &self.e, sigma, rhs),
        }
    }

    /// `(A - sigma E)^{-H} rhs`.
    pub fn shifted_solve_adjoint(&self, sigma: C64, rhs: &ComplexVector) -> Result<ComplexVector> {
        match &self.strategy {
            Strategy::Condensed { q, h } => {
                let lu = HessenbergLu::new_shifted(h, sigma);
                if lu.rcond() < SINGULAR_RCOND {
                    return Err(Error::SingularShift { shift: sigma });
                }
                let y = lu.solve_adjoint(&q.ad_mul(rhs));
                Ok(self.mass_solve_adjoint(&(q * y)))
            }
            Strategy::Dense => {
                let lu = LuFactor::new(&(&self.a - &self.e * sigma));
                if lu.rcond() < SINGULAR_RCOND {
                    return Err(Error::SingularShift { shift: sigma });
                }
                Ok(lu.solve_adjoint(rhs))
            }
        }
    }

    /// `(zE - A)^{-1} rhs`.
    pub fn resolvent(&self, z: C64, rhs: &ComplexVector) -> Result<ComplexVector> {
        self.shifted_solve(z, rhs).map(|x| -x)
    }

    /// `(zE - A)^{-1} rhs` for every `z`, in input order; failures are per point.
    pub fn resolvent_batch(&self, zs: &[C64], rhs: &ComplexVector) -> Vec<Result<ComplexVector>> {
        zs.par_iter().map(|&z| self.resolvent(z, rhs)).collect()
    }
}

/// `(z_k Er - Ar)^{-1} rhs` for each `z_k`, sharing one Hessenberg condensation of
/// `Er^{-1} Ar`. The outer error is `SingularMass` for a singular `Er`.
pub fn reduced_resolve_batch(
    ar: &ComplexMatrix,
    er: &ComplexMatrix,
    rhs: &ComplexVector,
    zs: &[C64],
) -> Result<Vec<Result<ComplexVector>>> {
    if zs.is_empty() {
        return Ok(Vec::new());
    }
    let solver = PencilSolver::new(ar, er)?;
    if rhs.len() != solver.dim() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} for order {}",
            rhs.len(),
            solver.dim()
        )));
    }
    Ok(solver.resolvent_batch(zs, rhs))
}
