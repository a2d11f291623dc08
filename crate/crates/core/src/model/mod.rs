//! SISO state-space systems, Matrix Market ingestion, synthetic test problems
//! and the imaginary-axis sample grids used for shift selection and error sweeps.

mod generate;
mod grid;
mod io;

pub use generate::{diagonal_system, gen_test_system, TestSystemKind};
pub use grid::{logspace, make_grid, SampleGrid};
pub use io::{load_system, read_matrix_market, write_matrix_market_array, SystemFiles};

use crate::error::{Error, Result};
use crate::numkernel::{is_finite_matrix, is_finite_vector, ComplexMatrix, ComplexVector, PencilSolver};

/// The system `E x' = A x + b u`, `y = c^H x`.
///
/// Construction validates shapes and finiteness, checks that E is nonsingular
/// and condenses the pencil once for all later shifted solves.
#[derive(Debug, Clone)]
pub struct StateSpaceSystem {
    b: ComplexVector,
    c: ComplexVector,
    solver: PencilSolver,
}

impl StateSpaceSystem {
    /// `e = None` means E = I.
    pub fn new(a: ComplexMatrix, e: Option<ComplexMatrix>, b: ComplexVector, c: ComplexVector) -> Result<Self> {
        let n = a.nrows();
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!("A is {}x{}", a.nrows(), a.ncols())));
        }
        let e = e.unwrap_or_else(|| ComplexMatrix::identity(n, n));
        if e.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!("E is {}x{}, A is {n}x{n}", e.nrows(), e.ncols())));
        }
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!("b has length {}, expected {n}", b.len())));
        }
        if c.len() != n {
            return Err(Error::DimensionMismatch(format!("c has length {}, expected {n}", c.len())));
        }
        if !is_finite_matrix(&a) {
            return Err(Error::NonFinite("A".into()));
        }
        if !is_finite_matrix(&e) {
            return Err(Error::NonFinite("E".into()));
        }
        if !is_finite_vector(&b) {
            return Err(Error::NonFinite("b".into()));
        }
        if !is_finite_vector(&c) {
            return Err(Error::NonFinite("c".into()));
        }
        let solver = PencilSolver::new(&a, &e)?;
        Ok(Self { b, c, solver })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &ComplexMatrix {
        self.solver.a()
    }

    pub fn e(&self) -> &ComplexMatrix {
        self.solver.e()
    }

    pub fn b(&self) -> &ComplexVector {
        &self.b
    }

    pub fn c(&self) -> &ComplexVector {
        &self.c
    }

    pub fn has_identity_mass(&self) -> bool {
        self.solver.has_identity_mass()
    }

    /// Shared shifted-solve machinery for this pencil.
    pub fn solver(&self) -> &PencilSolver {
        &self.solver
    }
}
