//! Combined rational Krylov bases, nonsymmetric Lanczos and Petrov-Galerkin projection.
//!
//! Throughout, `K = E^{-1}A`. The right space is spanned by `(A - s E)^{-1} b` for the
//! finite shifts plus `E^{-1}b, K E^{-1}b, ...` for shifts at infinity; the left space
//! is the analogous space of `(AE^{-1})^H` started from `E^{-H}c`, whose shift vectors
//! are `(A - tE)^{-H} c`.

mod basis;
mod lanczos;
mod project;

pub use basis::{rational_basis, BasisHalf, DEFAULT_RANK_TOL};
pub use lanczos::{lanczos_biorth, LanczosFactorization, DEFAULT_BREAKDOWN_TOL};
pub use project::{one_sided_model, project, two_sided_model, ProjectionBasis, ReducedModel};

use crate::numkernel::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sidedness {
    /// Galerkin projection, `W = V`.
    OneSided,
    /// Petrov-Galerkin projection with an independent left space.
    TwoSided,
}

/// Finite interpolation shifts on both sides plus the number of shifts at infinity.
///
/// The right shifts `s_j` give `phi(z) = prod (z - s_j)`, the left shifts `t_j`
/// give `psi(z) = prod (z - t_j)`. A one-sided model leaves the left side empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShiftSet {
    pub right: Vec<C64>,
    pub left: Vec<C64>,
    pub right_infinite: usize,
    pub left_infinite: usize,
}

impl ShiftSet {
    pub fn one_sided(right: Vec<C64>, right_infinite: usize) -> Self {
        Self {
            right,
            left: Vec::new(),
            right_infinite,
            left_infinite: 0,
        }
    }

    pub fn two_sided(right: Vec<C64>, right_infinite: usize, left: Vec<C64>, left_infinite: usize) -> Self {
        Self {
            right,
            left,
            right_infinite,
            left_infinite,
        }
    }

    pub fn right_order(&self) -> usize {
        self.right.len() + self.right_infinite
    }

    pub fn left_order(&self) -> usize {
        self.left.len() + self.left_infinite
    }

    /// Every finite shift on either side, right shifts first.
    pub fn all_finite(&self) -> impl Iterator<Item = C64> + '_ {
        self.right.iter().chain(self.left.iter()).copied()
    }
}
