use super::{rational_basis, BasisHalf, ShiftSet, Side, Sidedness};
use crate::error::{Error, Result};
use crate::model::StateSpaceSystem;
use crate::numkernel::{generalized_eig, orthonormality_defect, ComplexMatrix, ComplexVector, C64};

/// Right basis `V` and, for Petrov-Galerkin projection, left basis `W`.
#[derive(Debug, Clone)]
pub struct ProjectionBasis {
    pub v: ComplexMatrix,
    pub w: Option<ComplexMatrix>,
    pub shifts: ShiftSet,
}

impl ProjectionBasis {
    pub fn one_sided(v: ComplexMatrix, shifts: ShiftSet) -> Self {
        Self { v, w: None, shifts }
    }

    pub fn two_sided(v: ComplexMatrix, w: ComplexMatrix, shifts: ShiftSet) -> Self {
        Self { v, w: Some(w), shifts }
    }

    pub fn from_halves(right: BasisHalf, left: Option<BasisHalf>) -> Self {
        match left {
            None => {
                let shifts = ShiftSet::one_sided(right.shifts().to_vec(), right.infinite());
                Self::one_sided(right.into_basis(), shifts)
            }
            Some(left) => {
                let shifts = ShiftSet::two_sided(
                    right.shifts().to_vec(),
                    right.infinite(),
                    left.shifts().to_vec(),
                    left.infinite(),
                );
                Self::two_sided(right.into_basis(), left.into_basis(), shifts)
            }
        }
    }

    pub fn order(&self) -> usize {
        self.v.ncols()
    }

    /// Whether `V` (and `W`) have orthonormal columns to within `1e-10`.
    pub fn is_orthonormal(&self) -> bool {
        orthonormality_defect(&self.v) <= 1e-10 && self.w.as_ref().is_none_or(|w| orthonormality_defect(w) <= 1e-10)
    }
}

/// Projected pencil `(Er, Ar) = (W^H E V, W^H A V)` with `br = W^H b`, `cr = V^H c`
/// and the Ritz values `eig(Er^{-1} Ar)`.
#[derive(Debug, Clone)]
pub struct ReducedModel {
    ar: ComplexMatrix,
    er: ComplexMatrix,
    br: ComplexVector,
    cr: ComplexVector,
    ritz: Vec<C64>,
    shifts: ShiftSet,
    sidedness: Sidedness,
}

impl ReducedModel {
    /// Assembles a model from projected quantities; computes the Ritz values.
    pub fn from_parts(
        ar: ComplexMatrix,
        er: ComplexMatrix,
        br: ComplexVector,
        cr: ComplexVector,
        shifts: ShiftSet,
        sidedness: Sidedness,
    ) -> Result<Self> {
        let l = ar.nrows();
        if !ar.is_square() || er.shape() != (l, l) || br.len() != l || cr.len() != l {
            return Err(Error::DimensionMismatch(format!(
                "reduced quantities: Ar {:?}, Er {:?}, br {}, cr {}",
                ar.shape(),
                er.shape(),
                br.len(),
                cr.len()
            )));
        }
        let ritz = generalized_eig(&ar, &er).map_err(|e| match e {
            Error::SingularMass => Error::SingularReducedMass,
            other => other,
        })?;
        Ok(Self {
            ar,
            er,
            br,
            cr,
            ritz,
            shifts,
            sidedness,
        })
    }

    pub fn order(&self) -> usize {
        self.ar.nrows()
    }

    pub fn ar(&self) -> &ComplexMatrix {
        &self.ar
    }

    pub fn er(&self) -> &ComplexMatrix {
        &self.er
    }

    pub fn br(&self) -> &ComplexVector {
        &self.br
    }

    pub fn cr(&self) -> &ComplexVector {
        &self.cr
    }

    pub fn ritz(&self) -> &[C64] {
        &self.ritz
    }

    pub fn shifts(&self) -> &ShiftSet {
        &self.shifts
    }

    pub fn sidedness(&self) -> Sidedness {
        self.sidedness
    }
}

/// Petrov-Galerkin projection of `sys` onto `basis` (`W = V` when no left basis).
pub fn project(sys: &StateSpaceSystem, basis: &ProjectionBasis) -> Result<ReducedModel> {
    let v = &basis.v;
    let w = basis.w.as_ref().unwrap_or(v);
    if v.nrows() != sys.n() || w.nrows() != sys.n() {
        return Err(Error::DimensionMismatch(format!("basis rows must equal n = {}", sys.n())));
    }
    if w.ncols() != v.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "left basis has {} columns, right basis {}",
            w.ncols(),
            v.ncols()
        )));
    }
    if v.ncols() == 0 {
        return Err(Error::InvalidArgument("empty projection basis".into()));
    }
    let ar = w.ad_mul(&(sys.a() * v));
    let er = w.ad_mul(&(sys.e() * v));
    let br = w.ad_mul(sys.b());
    let cr = v.ad_mul(sys.c());
    let sidedness = if basis.w.is_some() {
        Sidedness::TwoSided
    } else {
        Sidedness::OneSided
    };
    ReducedModel::from_parts(ar, er, br, cr, basis.shifts.clone(), sidedness)
}

/// Galerkin model from `shifts` plus `m_std` shifts at infinity.
pub fn one_sided_model(sys: &StateSpaceSystem, shifts: &[C64], m_std: usize) -> Result<ReducedModel> {
    let right = rational_basis(sys, shifts, m_std, Side::Right)?;
    project(sys, &ProjectionBasis::from_halves(right, None))
}

/// Petrov-Galerkin model from the combined spaces of both sides. Fails with
/// `DimensionMismatch` if truncation leaves the two sides with different dimensions.
pub fn two_sided_model(sys: &StateSpaceSystem, shifts: &ShiftSet) -> Result<ReducedModel> {
    let right = rational_basis(sys, &shifts.right, shifts.right_infinite, Side::Right)?;
    let left = rational_basis(sys, &shifts.left, shifts.left_infinite, Side::Left)?;
    project(sys, &ProjectionBasis::from_halves(right, Some(left)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::{lanczos_biorth, DEFAULT_BREAKDOWN_TOL};
    use crate::model::{gen_test_system, make_grid, TestSystemKind};
    use crate::numkernel::{c64, real};

    fn h(sys: &StateSpaceSystem, z: C64) -> C64 {
        let x = (sys.e() * z - sys.a()).lu().solve(sys.b()).unwrap();
        sys.c().dotc(&x)
    }

    fn h_tilde(rm: &ReducedModel, z: C64) -> C64 {
        let x = (rm.er() * z - rm.ar()).lu().solve(rm.br()).unwrap();
        rm.cr().dotc(&x)
    }

    #[test]
    fn full_order_projection_is_exact() {
        let sys = gen_test_system(TestSystemKind::RandomDescriptor, 8, 5);
        let shifts = ShiftSet::two_sided(vec![c64(1.0, 1.0), c64(3.0, 0.0)], 6, vec![c64(0.5, -2.0)], 7);
        let rm = two_sided_model(&sys, &shifts).unwrap();
        assert_eq!(rm.order(), 8);
        assert_eq!(rm.ritz().len(), 8);
        for z in make_grid(-1.0, 1.0, 5).unwrap().points {
            assert!((h(&sys, z) - h_tilde(&rm, z)).norm() <= 1e-8 * (1.0 + h(&sys, z).norm()));
        }
    }

    #[test]
    fn galerkin_on_hermitian_operator_has_real_ritz_values() {
        let sys = gen_test_system(TestSystemKind::Laplacian1d, 40, 0);
        let rm = one_sided_model(&sys, &[real(10.0), real(1000.0)], 3).unwrap();
        assert_eq!(rm.sidedness(), Sidedness::OneSided);
        let scale = rm.ritz().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(rm.ritz().iter().all(|z| z.im.abs() <= 1e-10 * scale));
    }

    #[test]
    fn transfer_function_is_basis_invariant() {
        // Lanczos vectors and orthonormal vectors span the same standard Krylov spaces.
        let sys = gen_test_system(TestSystemKind::RandomStable, 30, 11);
        let l = 5;
        let shifts = ShiftSet::two_sided(vec![], l, vec![], l);
        let orth = two_sided_model(&sys, &shifts).unwrap();
        let e_inv_b = sys.solver().mass_solve(sys.b());
        let f = lanczos_biorth(&sys, &e_inv_b, sys.c(), l, DEFAULT_BREAKDOWN_TOL).unwrap();
        let lan = project(&sys, &ProjectionBasis::two_sided(f.v.clone(), f.w.clone(), shifts)).unwrap();
        for z in make_grid(-2.0, 3.0, 50).unwrap().points {
            let (a, b) = (h_tilde(&orth, z), h_tilde(&lan, z));
            assert!((a - b).norm() <= 1e-8 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn oblique_projection_with_orthogonal_spaces_fails() {
        let sys = crate::model::diagonal_system(&[-1.0, -2.0]);
        let v = ComplexMatrix::from_column_slice(2, 1, &[real(1.0), real(0.0)]);
        let w = ComplexMatrix::from_column_slice(2, 1, &[real(0.0), real(1.0)]);
        let basis = ProjectionBasis::two_sided(v, w, ShiftSet::default());
        assert_eq!(project(&sys, &basis).unwrap_err(), Error::SingularReducedMass);
    }
}
