//! LU factorizations with partial pivoting: general dense and upper Hessenberg.
//!
//! Both expose plain and adjoint solves so a single factorization serves
//! `(A - sE)^{-1}` and `(A - sE)^{-H}`, plus a Hager/Higham estimate of the
//! reciprocal 1-norm condition number.

use super::{norm1, ComplexMatrix, ComplexVector, C64};
use num_complex::ComplexFloat;

trait Factored {
    fn dim(&self) -> usize;
    fn solve_in_place(&self, b: &mut ComplexVector);
    fn solve_adjoint_in_place(&self, b: &mut ComplexVector);
    fn has_zero_pivot(&self) -> bool;
}

/// Estimate `1 / (||M||_1 ||M^{-1}||_1)` given `||M||_1` and a factorization of M.
fn rcond_estimate<F: Factored>(f: &F, anorm: f64) -> f64 {
    let n = f.dim();
    if n == 0 {
        return 1.0;
    }
    if f.has_zero_pivot() || anorm == 0.0 {
        return 0.0;
    }
    let mut x = ComplexVector::from_element(n, C64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0_f64;
    for iter in 0..5 {
        let mut y = x.clone();
        f.solve_in_place(&mut y);
        let ynorm: f64 = y.iter().map(|v| v.abs()).sum();
        if !ynorm.is_finite() {
            return 0.0;
        }
        if iter > 0 && ynorm <= est {
            est = est.max(ynorm);
            break;
        }
        est = ynorm;
        let mut xi = y.map(|v| {
            let a = v.abs();
            if a == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                v / a
            }
        });
        f.solve_adjoint_in_place(&mut xi);
        let (j, zmax) = xi
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.abs()))
            .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let ztx = xi.dotc(&x).re;
        if iter > 0 && zmax <= ztx {
            break;
        }
        x.fill(C64::new(0.0, 0.0));
        x[j] = C64::new(1.0, 0.0);
    }
    // Alternating-sign probe guards against the iteration stalling.
    let mut alt = ComplexVector::from_fn(n, |i, _| {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let ramp = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
        C64::new(sign * (1.0 + ramp), 0.0)
    });
    f.solve_in_place(&mut alt);
    let alt_est = 2.0 * alt.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
    if !alt_est.is_finite() {
        return 0.0;
    }
    let inv_norm = est.max(alt_est);
    1.0 / (anorm * inv_norm)
}

/// Dense `PM = LU` with row partial pivoting.
#[derive(Debug, Clone)]
pub struct LuFactor {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    anorm: f64,
    zero_pivot: bool,
}

impl LuFactor {
    pub fn new(m: &ComplexMatrix) -> Self {
        assert!(m.is_square(), "LU requires a square matrix");
        let n = m.nrows();
        let anorm = norm1(m);
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut zero_pivot = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if pmax == 0.0 {
                zero_pivot = true;
                continue;
            }
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l != C64::new(0.0, 0.0) {
                    for j in (k + 1)..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= l * u;
                    }
                }
            }
        }
        Self {
            lu,
            perm,
            anorm,
            zero_pivot,
        }
    }

    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    pub fn rcond(&self) -> f64 {
        rcond_estimate(self, self.anorm)
    }

    pub fn solve(&self, b: &ComplexVector) -> ComplexVector {
        let mut x = b.clone();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_adjoint(&self, b: &ComplexVector) -> ComplexVector {
        let mut x = b.clone();
        self.solve_adjoint_in_place(&mut x);
        x
    }

    /// Solves with every column of `b`.
    pub fn solve_matrix(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let mut out = b.clone();
        for j in 0..b.ncols() {
            let mut col = ComplexVector::from_column_slice(b.column(j).as_slice());
            self.solve_in_place(&mut col);
            out.set_column(j, &col);
        }
        out
    }
}

impl Factored for LuFactor {
    fn dim(&self) -> usize {
        self.lu.nrows()
    }

    fn has_zero_pivot(&self) -> bool {
        self.zero_pivot
    }

    fn solve_in_place(&self, b: &mut ComplexVector) {
        let n = self.lu.nrows();
        let pb: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for (i, v) in pb.into_iter().enumerate() {
            b[i] = v;
        }
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in (i + 1)..n {
                s -= self.lu[(i, j)] * b[j];
            }
            b[i] = s / self.lu[(i, i)];
        }
    }

    fn solve_adjoint_in_place(&self, b: &mut ComplexVector) {
        let n = self.lu.nrows();
        // U^H y = b
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.lu[(j, i)].conj() * b[j];
            }
            b[i] = s / self.lu[(i, i)].conj();
        }
        // L^H z = y
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in (i + 1)..n {
                s -= self.lu[(j, i)].conj() * b[j];
            }
            b[i] = s;
        }
        let mut x = vec![C64::new(0.0, 0.0); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = b[i];
        }
        for (i, v) in x.into_iter().enumerate() {
            b[i] = v;
        }
    }
}

/// LU of an upper Hessenberg matrix in O(n^2); pivoting only swaps adjacent rows.
#[derive(Debug, Clone)]
pub struct HessenbergLu {
    u: ComplexMatrix,
    swapped: Vec<bool>,
    mult: Vec<C64>,
    anorm: f64,
    zero_pivot: bool,
}

impl HessenbergLu {
    /// Factors `H - shift * I`. Entries below the first subdiagonal of `h` are ignored.
    pub fn new_shifted(h: &ComplexMatrix, shift: C64) -> Self {
        let n = h.nrows();
        let mut u = h.clone();
        for i in 0..n {
            u[(i, i)] -= shift;
        }
        // Hessenberg 1-norm only touches the upper part plus one subdiagonal.
        let anorm = (0..n)
            .map(|j| (0..n.min(j + 2)).map(|i| u[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut swapped = vec![false; n.saturating_sub(1)];
        let mut mult = vec![C64::new(0.0, 0.0); n.saturating_sub(1)];
        let mut zero_pivot = false;
        for k in 0..n.saturating_sub(1) {
            if u[(k + 1, k)].abs() > u[(k, k)].abs() {
                for j in k..n {
                    let tmp = u[(k, j)];
                    u[(k, j)] = u[(k + 1, j)];
                    u[(k + 1, j)] = tmp;
                }
                swapped[k] = true;
            }
            let pivot = u[(k, k)];
            if pivot == C64::new(0.0, 0.0) {
                zero_pivot = true;
                continue;
            }
            let l = u[(k + 1, k)] / pivot;
            mult[k] = l;
            u[(k + 1, k)] = C64::new(0.0, 0.0);
            if l != C64::new(0.0, 0.0) {
                for j in (k + 1)..n {
                    let t = u[(k, j)];
                    u[(k + 1, j)] -= l * t;
                }
            }
        }
        if n > 0 && u[(n - 1, n - 1)] == C64::new(0.0, 0.0) {
            zero_pivot = true;
        }
        Self {
            u,
            swapped,
            mult,
            anorm,
            zero_pivot,
        }
    }

    pub fn rcond(&self) -> f64 {
        rcond_estimate(self, self.anorm)
    }

    pub fn solve(&self, b: &ComplexVector) -> ComplexVector {
        let mut x = b.clone();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_adjoint(&self, b: &ComplexVector) -> ComplexVector {
        let mut x = b.clone();
        self.solve_adjoint_in_place(&mut x);
        x
    }
}

impl Factored for HessenbergLu {
    fn dim(&self) -> usize {
        self.u.nrows()
    }

    fn has_zero_pivot(&self) -> bool {
        self.zero_pivot
    }

    fn solve_in_place(&self, b: &mut ComplexVector) {
        let n = self.u.nrows();
        for k in 0..n.saturating_sub(1) {
            if self.swapped[k] {
                b.swap_rows(k, k + 1);
            }
            let t = b[k];
            b[k + 1] -= self.mult[k] * t;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in (i + 1)..n {
                s -= self.u[(i, j)] * b[j];
            }
            b[i] = s / self.u[(i, i)];
        }
    }

    fn solve_adjoint_in_place(&self, b: &mut ComplexVector) {
        let n = self.u.nrows();
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.u[(j, i)].conj() * b[j];
            }
            b[i] = s / self.u[(i, i)].conj();
        }
        for k in (0..n.saturating_sub(1)).rev() {
            let t = b[k + 1];
            b[k] -= self.mult[k].conj() * t;
            if self.swapped[k] {
                b.swap_rows(k, k + 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::c64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexMatrix::from_fn(n, n, |_, _| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    #[test]
    fn dense_solve_and_adjoint_solve() {
        let m = random_matrix(12, 3);
        let b = ComplexVector::from_fn(12, |i, _| c64(i as f64, 1.0));
        let lu = LuFactor::new(&m);
        let x = lu.solve(&b);
        assert!((&m * &x - &b).norm() < 1e-12 * b.norm() * 100.0);
        let y = lu.solve_adjoint(&b);
        assert!((m.adjoint() * &y - &b).norm() < 1e-11 * b.norm());
        assert!(lu.rcond() > 1e-6);
    }

    #[test]
    fn hessenberg_matches_dense() {
        let mut h = random_matrix(15, 9);
        for j in 0..15 {
            for i in (j + 2)..15 {
                h[(i, j)] = c64(0.0, 0.0);
            }
        }
        let shift = c64(0.3, -0.7);
        let shifted = &h - ComplexMatrix::identity(15, 15) * shift;
        let b = ComplexVector::from_fn(15, |i, _| c64(1.0, -(i as f64)));
        let hl = HessenbergLu::new_shifted(&h, shift);
        let x = hl.solve(&b);
        assert!((&shifted * &x - &b).norm() < 1e-11 * b.norm());
        let y = hl.solve_adjoint(&b);
        assert!((shifted.adjoint() * &y - &b).norm() < 1e-11 * b.norm());
        let dense = LuFactor::new(&shifted);
        let ratio = hl.rcond() / dense.rcond();
        assert!(ratio > 0.1 && ratio < 10.0, "ratio {ratio}");
    }

    #[test]
    fn singular_matrices_have_zero_rcond() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(2.0, 0.0), c64(2.0, 0.0), c64(4.0, 0.0)]);
        assert!(LuFactor::new(&m).rcond() < f64::EPSILON);
        let d = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c64(-1.0, 0.0), c64(-2.0, 0.0)]));
        assert_eq!(HessenbergLu::new_shifted(&d, c64(-2.0, 0.0)).rcond(), 0.0);
    }

    #[test]
    fn rcond_tracks_condition_number() {
        let d = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c64(1.0, 0.0), c64(1e-8, 0.0)]));
        let r = LuFactor::new(&d).rcond();
        assert!((r - 1e-8).abs() < 1e-12);
    }
}
