use super::Side;
use crate::error::{Error, Result};
use crate::model::StateSpaceSystem;
use crate::numkernel::{orthonormalize_append, ComplexMatrix, ComplexVector, C64};

/// Relative residual below which a new direction counts as already spanned.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// One side of a projection: orthonormal columns grown one direction at a time.
///
/// A shift seen for the first time contributes `(A - sE)^{-1} b` (right) or
/// `(A - tE)^{-H} c` (left). A repeated shift applies the shifted inverse again to the
/// column it produced last time, which spans the higher-order pole terms. Shifts at
/// infinity continue a standard Krylov sequence by applying the operator to the
/// previous standard column.
#[derive(Debug, Clone)]
pub struct BasisHalf {
    side: Side,
    basis: ComplexMatrix,
    shifts: Vec<C64>,
    infinite: usize,
    /// column produced by the latest occurrence of each distinct shift
    chain: Vec<(C64, usize)>,
    std_last: Option<usize>,
    rejected: usize,
    solves: usize,
    rank_tol: f64,
}

impl BasisHalf {
    pub fn new(side: Side, n: usize) -> Self {
        Self {
            side,
            basis: ComplexMatrix::zeros(n, 0),
            shifts: Vec::new(),
            infinite: 0,
            chain: Vec::new(),
            std_last: None,
            rejected: 0,
            solves: 0,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }

    pub fn with_rank_tol(mut self, tol: f64) -> Self {
        self.rank_tol = tol;
        self
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> ComplexMatrix {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Finite shifts whose directions were accepted, in order.
    pub fn shifts(&self) -> &[C64] {
        &self.shifts
    }

    /// Accepted shifts at infinity.
    pub fn infinite(&self) -> usize {
        self.infinite
    }

    /// Directions dropped because they were already in the span.
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    /// Large shifted solves performed so far, including rejected directions.
    pub fn solves(&self) -> usize {
        self.solves
    }

    /// Adds the direction for `shift`. On `RankDeficient` the basis is unchanged.
    pub fn push_shift(&mut self, sys: &StateSpaceSystem, shift: C64) -> Result<()> {
        let solver = sys.solver();
        let previous = self.chain.iter().find(|(s, _)| *s == shift).map(|&(_, col)| col);
        let raw = match (self.side, previous) {
            (Side::Right, None) => solver.shifted_solve(shift, sys.b()),
            (Side::Left, None) => solver.shifted_solve_adjoint(shift, sys.c()),
            (Side::Right, Some(col)) => {
                let u = self.basis.column(col).into_owned();
                solver.shifted_solve(shift, &(sys.e() * u))
            }
            (Side::Left, Some(col)) => {
                let u = self.basis.column(col).into_owned();
                solver.shifted_solve_adjoint(shift, &sys.e().ad_mul(&u))
            }
        }?;
        self.solves += 1;
        self.append(&raw)?;
        let col = self.dim() - 1;
        match self.chain.iter_mut().find(|(s, _)| *s == shift) {
            Some(entry) => entry.1 = col,
            None => self.chain.push((shift, col)),
        }
        self.shifts.push(shift);
        Ok(())
    }

    /// Adds the next standard Krylov direction. On `RankDeficient` the basis is unchanged.
    pub fn push_infinite(&mut self, sys: &StateSpaceSystem) -> Result<()> {
        let solver = sys.solver();
        let raw = match (self.side, self.std_last) {
            (Side::Right, None) => solver.mass_solve(sys.b()),
            (Side::Left, None) => solver.mass_solve_adjoint(sys.c()),
            (Side::Right, Some(col)) => solver.apply_operator(&self.basis.column(col).into_owned()),
            (Side::Left, Some(col)) => {
                // (A E^{-1})^H u = E^{-H} A^H u
                solver.mass_solve_adjoint(&sys.a().ad_mul(&self.basis.column(col).into_owned()))
            }
        };
        self.append(&raw)?;
        self.std_last = Some(self.dim() - 1);
        self.infinite += 1;
        Ok(())
    }

    fn append(&mut self, raw: &ComplexVector) -> Result<()> {
        if self.dim() == self.basis.nrows() {
            self.rejected += 1;
            return Err(Error::RankDeficient { residual: 0.0 });
        }
        match orthonormalize_append(&self.basis, raw, self.rank_tol) {
            Ok(b) => {
                self.basis = b;
                Ok(())
            }
            Err(e) => {
                self.rejected += 1;
                Err(e)
            }
        }
    }
}

/// Orthonormal basis for one side: the given finite shifts in order, then `m_std`
/// standard Krylov directions. Directions already in the span are dropped and
/// counted in [`BasisHalf::rejected`], so `dim()` can fall short of the request.
pub fn rational_basis(sys: &StateSpaceSystem, shifts: &[C64], m_std: usize, side: Side) -> Result<BasisHalf> {
    let mut half = BasisHalf::new(side, sys.n());
    for &s in shifts {
        match half.push_shift(sys, s) {
            Ok(()) | Err(Error::RankDeficient { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    for _ in 0..m_std {
        match half.push_infinite(sys) {
            Ok(()) => {}
            // the standard sequence has reached an invariant subspace
            Err(Error::RankDeficient { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    if half.rejected() > 0 {
        log::debug!(
            "{:?} basis truncated to dimension {} ({} directions rejected)",
            side,
            half.dim(),
            half.rejected()
        );
    }
    Ok(half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{diagonal_system, gen_test_system, TestSystemKind};
    use crate::numkernel::{c64, orthonormality_defect, real, subspace_residual};

    fn columns(vs: &[ComplexVector]) -> ComplexMatrix {
        ComplexMatrix::from_columns(vs)
    }

    #[test]
    fn single_shift_on_diagonal_system() {
        let sys = diagonal_system(&[-1.0, -2.0]);
        let half = rational_basis(&sys, &[real(1.0)], 0, Side::Right).unwrap();
        assert_eq!(half.dim(), 1);
        // (A - I)^{-1} [1, 1] = [-1/2, -1/3]
        let expected = ComplexVector::from_vec(vec![real(-0.5), real(-1.0 / 3.0)]).normalize();
        let got = half.basis().column(0);
        let phase = got.dotc(&expected);
        assert!((phase.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn standard_krylov_with_descriptor_mass() {
        let sys = gen_test_system(TestSystemKind::RandomDescriptor, 12, 4);
        let half = rational_basis(&sys, &[], 2, Side::Right).unwrap();
        let e_inv_b = sys.e().clone().lu().solve(sys.b()).unwrap();
        let k = sys.e().clone().lu().solve(sys.a()).unwrap();
        let oracle = columns(&[e_inv_b.clone(), &k * &e_inv_b]);
        assert!(subspace_residual(half.basis(), &oracle) < 1e-10);
        assert_eq!(half.solves(), 0);
    }

    #[test]
    fn left_side_spans_adjoint_shift_vectors() {
        let sys = gen_test_system(TestSystemKind::RandomDescriptor, 10, 2);
        let t = [c64(0.5, 1.0), c64(2.0, -0.3)];
        let half = rational_basis(&sys, &t, 2, Side::Left).unwrap();
        let e_inv_h_c = sys.e().adjoint().lu().solve(sys.c()).unwrap();
        let kl = sys.e().adjoint().lu().solve(&sys.a().adjoint()).unwrap();
        let mut oracle: Vec<ComplexVector> = t
            .iter()
            .map(|&s| (sys.a() - sys.e() * s).adjoint().lu().solve(sys.c()).unwrap())
            .collect();
        oracle.push(e_inv_h_c.clone());
        oracle.push(&kl * &e_inv_h_c);
        assert_eq!(half.dim(), 4);
        assert!(subspace_residual(half.basis(), &columns(&oracle)) < 1e-10);
        assert!(orthonormality_defect(half.basis()) < 1e-12);
    }

    #[test]
    fn repeated_shift_spans_second_order_pole() {
        let sys = gen_test_system(TestSystemKind::RandomStable, 9, 1);
        let s = c64(0.7, 0.2);
        let half = rational_basis(&sys, &[s, s], 0, Side::Right).unwrap();
        let lu = (sys.a() - sys.e() * s).lu();
        let x1 = lu.solve(sys.b()).unwrap();
        let x2 = lu.solve(&(sys.e() * &x1)).unwrap();
        assert_eq!(half.dim(), 2);
        assert!(subspace_residual(half.basis(), &columns(&[x1, x2])) < 1e-10);
    }

    #[test]
    fn eigenvalue_shift_is_singular() {
        let sys = diagonal_system(&[-1.0, -2.0]);
        assert!(matches!(
            rational_basis(&sys, &[real(-2.0)], 0, Side::Right),
            Err(Error::SingularShift { .. })
        ));
    }

    #[test]
    fn saturated_span_truncates() {
        let sys = diagonal_system(&[-1.0, -2.0]);
        let half = rational_basis(&sys, &[real(1.0), real(2.0), real(3.0)], 2, Side::Right).unwrap();
        assert_eq!(half.dim(), 2);
        assert_eq!(half.rejected(), 2);
        assert_eq!(half.solves(), 3);
    }

    #[test]
    fn standard_part_is_nested() {
        let sys = gen_test_system(TestSystemKind::RandomStable, 30, 6);
        let shifts = [c64(1.0, 5.0), c64(30.0, -2.0), c64(0.5, 0.0)];
        for m in 0..4 {
            let small = rational_basis(&sys, &shifts, m, Side::Right).unwrap();
            let big = rational_basis(&sys, &shifts, m + 1, Side::Right).unwrap();
            assert_eq!(big.dim(), small.dim() + 1);
            assert!(subspace_residual(big.basis(), small.basis()) < 1e-10);
        }
    }

    #[test]
    fn interleaved_pushes_span_the_same_space() {
        let sys = gen_test_system(TestSystemKind::RandomStable, 20, 3);
        let (s1, s2) = (c64(2.0, 1.0), c64(10.0, -4.0));
        let ordered = rational_basis(&sys, &[s1, s2], 2, Side::Right).unwrap();
        let mut mixed = BasisHalf::new(Side::Right, sys.n());
        mixed.push_infinite(&sys).unwrap();
        mixed.push_shift(&sys, s1).unwrap();
        mixed.push_infinite(&sys).unwrap();
        mixed.push_shift(&sys, s2).unwrap();
        assert!(subspace_residual(ordered.basis(), mixed.basis()) < 1e-10);
        assert!(subspace_residual(mixed.basis(), ordered.basis()) < 1e-10);
    }
}
