use super::poly::RootRatio;
use super::transfer::ErrorCurve;
use crate::error::{Error, Result};
use crate::krylov::{ProjectionBasis, ReducedModel, Sidedness};
use crate::model::StateSpaceSystem;
use crate::numkernel::{ComplexVector, LuFactor, C64, SINGULAR_RCOND};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorMode {
    /// `e(z) = c^H g_c(K) (zI - K)^{-1} g_b(K) E^{-1} b / (g_b(z) g_c(z))`.
    TwoSided,
    /// `e(z) = c^H (zI - K)^{-1} G(K) E^{-1} b / G(z)` with `G = Lambda / phi`.
    OneSided,
}

/// `g(K) E^{-1} b` for `g = prod (z - num_i) / prod (z - den_j)`, interleaving one
/// multiply with one shifted solve to keep the intermediate vectors balanced.
fn apply_right(sys: &StateSpaceSystem, g: &RootRatio, start: &ComplexVector) -> Result<ComplexVector> {
    let solver = sys.solver();
    let mut x = solver.mass_solve(start);
    let (num, den) = (&g.num.roots, &g.den.roots);
    for i in 0..num.len().max(den.len()) {
        if let Some(&lam) = num.get(i) {
            x = solver.apply_operator(&x) - &x * lam;
        }
        if let Some(&s) = den.get(i) {
            // (K - s)^{-1} x = (A - sE)^{-1} E x
            x = solver.shifted_solve(s, &(sys.e() * &x))?;
        }
    }
    Ok(x)
}

/// `g(K)^H c`, the adjoint counterpart of [`apply_right`].
fn apply_left(sys: &StateSpaceSystem, g: &RootRatio, start: &ComplexVector) -> Result<ComplexVector> {
    let solver = sys.solver();
    let mut x = start.clone();
    let (num, den) = (&g.num.roots, &g.den.roots);
    for i in 0..num.len().max(den.len()) {
        if let Some(&lam) = num.get(i) {
            x = solver.apply_operator_adjoint(&x) - &x * lam.conj();
        }
        if let Some(&t) = den.get(i) {
            // (K - t)^{-H} x = E^H (A - tE)^{-H} x
            x = sys.e().ad_mul(&solver.shifted_solve_adjoint(t, &x)?);
        }
    }
    Ok(x)
}

/// The remainder formula for one model with its vector factors precomputed, so that
/// each evaluation point costs a single large resolvent solve.
#[derive(Debug, Clone)]
pub struct RemainderFormula {
    mode: ErrorMode,
    g_b: RootRatio,
    g_c: Option<RootRatio>,
    /// `E g_b(K) E^{-1} b`
    right: ComplexVector,
    /// `g_c(K)^H c` (two-sided) or `c` (one-sided)
    left: ComplexVector,
    ritz: Vec<C64>,
    sign: f64,
}

impl RemainderFormula {
    /// The two-sided mode needs a left space built from `c`; one-sided models are rejected.
    pub fn new(sys: &StateSpaceSystem, rm: &ReducedModel, mode: ErrorMode) -> Result<Self> {
        let ritz = rm.ritz().to_vec();
        let shifts = rm.shifts();
        let g_b = RootRatio::new(ritz.clone(), shifts.right.clone());
        let y = apply_right(sys, &g_b, sys.b())?;
        let right = sys.e() * y;
        let (g_c, left) = match mode {
            ErrorMode::TwoSided => {
                if rm.sidedness() != Sidedness::TwoSided {
                    return Err(Error::InvalidArgument(
                        "two-sided remainder formula requires a Petrov-Galerkin model".into(),
                    ));
                }
                let g_c = RootRatio::new(ritz.clone(), shifts.left.clone());
                let x = apply_left(sys, &g_c, sys.c())?;
                (Some(g_c), x)
            }
            ErrorMode::OneSided => (None, sys.c().clone()),
        };
        Ok(Self {
            mode,
            g_b,
            g_c,
            right,
            left,
            ritz,
            sign: 1.0,
        })
    }

    /// Deliberately wrong sign in the scalar prefactor; used to check that the
    /// verification battery notices a broken formula.
    #[doc(hidden)]
    pub fn with_sign_fault(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    pub fn mode(&self) -> ErrorMode {
        self.mode
    }

    /// The scalar factor `G(z)` that divides the bilinear form.
    pub fn denominator(&self) -> RootRatio {
        match &self.g_c {
            Some(g_c) => self.g_b.times(g_c),
            None => self.g_b.clone(),
        }
    }

    fn check_pole(&self, z: C64) -> Result<()> {
        if self.ritz.iter().any(|&l| l == z) {
            return Err(Error::PoleAtZ { z });
        }
        Ok(())
    }

    pub fn eval(&self, sys: &StateSpaceSystem, z: C64) -> Result<C64> {
        self.check_pole(z)?;
        let u = sys.solver().resolvent(z, &self.right)?;
        let bilinear = self.left.dotc(&u);
        let inv_g = self.denominator();
        // 1/G(z) as a root ratio with numerator and denominator swapped
        let inv_g = RootRatio {
            num: inv_g.den,
            den: inv_g.num,
        };
        let factor = inv_g.eval(z);
        if !factor.re.is_finite() || !factor.im.is_finite() {
            return Err(Error::PoleAtZ { z });
        }
        if factor == C64::from(0.0) {
            // at an interpolation node the bilinear form is finite and the error vanishes
            return Ok(C64::from(0.0));
        }
        Ok(bilinear * factor * self.sign)
    }

    /// Evaluates at every curve point where `e_direct` is populated.
    pub fn fill_curve(&self, sys: &StateSpaceSystem, curve: &mut ErrorCurve) {
        curve.e_formula = curve
            .points
            .par_iter()
            .zip(&curve.e_direct)
            .map(|(&z, e)| e.and_then(|_| self.eval(sys, z).ok()))
            .collect();
    }

    /// Closed-form right residual `E g_b(K) E^{-1} b / g_b(z)`.
    pub fn right_residual(&self, z: C64) -> Result<ComplexVector> {
        self.check_pole(z)?;
        let g = self.g_b.eval(z);
        if g == C64::from(0.0) || !g.re.is_finite() {
            return Err(Error::PoleAtZ { z });
        }
        Ok(&self.right / g)
    }

    /// Closed-form left residual `g_c(K)^H c / conj(g_c(z))`; two-sided only.
    pub fn left_residual(&self, z: C64) -> Result<Option<ComplexVector>> {
        self.check_pole(z)?;
        match &self.g_c {
            None => Ok(None),
            Some(g_c) => {
                let g = g_c.eval(z);
                if g == C64::from(0.0) || !g.re.is_finite() {
                    return Err(Error::PoleAtZ { z });
                }
                Ok(Some(&self.left / g.conj()))
            }
        }
    }
}

/// One-shot evaluation of the remainder formula at `z`.
pub fn error_formula(sys: &StateSpaceSystem, rm: &ReducedModel, z: C64, mode: ErrorMode) -> Result<C64> {
    RemainderFormula::new(sys, rm, mode)?.eval(sys, z)
}

/// Right and left residuals of the projected linear systems at `z`, in defining form:
/// `r_b = b - (zE - A) x_b`, `r_c = c - (zE - A)^H x_c` with `x_b = V (z Er - Ar)^{-1} br`
/// and `x_c = W (z Er - Ar)^{-H} cr`.
#[derive(Debug, Clone)]
pub struct ResidualPair {
    pub r_b: ComplexVector,
    pub r_c: ComplexVector,
    pub at_z: C64,
}

pub fn residual_pair(sys: &StateSpaceSystem, basis: &ProjectionBasis, rm: &ReducedModel, z: C64) -> Result<ResidualPair> {
    let v = &basis.v;
    let w = basis.w.as_ref().unwrap_or(v);
    let pencil_lu = LuFactor::new(&(rm.er() * z - rm.ar()));
    if pencil_lu.rcond() < SINGULAR_RCOND {
        return Err(Error::PoleAtZ { z });
    }
    let x_b = v * pencil_lu.solve(rm.br());
    let x_c = w * pencil_lu.solve_adjoint(rm.cr());
    let pencil = sys.e() * z - sys.a();
    let r_b = sys.b() - &pencil * x_b;
    let r_c = sys.c() - pencil.ad_mul(&x_c);
    Ok(ResidualPair { r_b, r_c, at_z: z })
}
