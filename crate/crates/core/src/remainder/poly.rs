use crate::numkernel::C64;

/// Monic polynomial `prod (z - r_i)` stored by its roots; no roots means the constant 1.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootPoly {
    pub roots: Vec<C64>,
}

impl RootPoly {
    pub fn new(roots: Vec<C64>) -> Self {
        Self { roots }
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Ordered product, no balancing.
    pub fn eval(&self, z: C64) -> C64 {
        self.roots.iter().fold(C64::from(1.0), |acc, &r| acc * (z - r))
    }

    /// `sum ln|z - r_i|`; `-inf` at a root.
    pub fn log_abs(&self, z: C64) -> f64 {
        self.roots.iter().map(|&r| (z - r).norm().ln()).sum()
    }

    fn phase(&self, z: C64) -> C64 {
        self.roots.iter().fold(C64::from(1.0), |acc, &r| {
            let d = z - r;
            let m = d.norm();
            if m == 0.0 {
                acc
            } else {
                acc * (d / m)
            }
        })
    }
}

/// Ratio of two root polynomials, `num(z) / den(z)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootRatio {
    pub num: RootPoly,
    pub den: RootPoly,
}

impl RootRatio {
    pub fn new(num: Vec<C64>, den: Vec<C64>) -> Self {
        Self {
            num: RootPoly::new(num),
            den: RootPoly::new(den),
        }
    }

    /// `ln|num(z)| - ln|den(z)|`; NaN when `z` is a root of both.
    pub fn log_abs(&self, z: C64) -> f64 {
        self.num.log_abs(z) - self.den.log_abs(z)
    }

    /// Evaluated as magnitude times phase so long products neither overflow nor
    /// underflow before the ratio is formed.
    pub fn eval(&self, z: C64) -> C64 {
        let mag = self.log_abs(z).exp();
        if mag == 0.0 || mag.is_infinite() {
            return C64::new(mag, 0.0);
        }
        mag * self.num.phase(z) * self.den.phase(z).conj()
    }

    /// Product of two ratios (roots are concatenated, no cancellation).
    pub fn times(&self, other: &RootRatio) -> RootRatio {
        let mut num = self.num.roots.clone();
        num.extend_from_slice(&other.num.roots);
        let mut den = self.den.roots.clone();
        den.extend_from_slice(&other.den.roots);
        RootRatio::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::c64;
    use proptest::prelude::*;

    #[test]
    fn empty_polynomial_is_one() {
        assert_eq!(RootPoly::default().eval(c64(3.0, 4.0)), c64(1.0, 0.0));
        assert_eq!(RootPoly::default().log_abs(c64(3.0, 4.0)), 0.0);
    }

    #[test]
    fn ratio_zero_and_pole() {
        let g = RootRatio::new(vec![c64(1.0, 0.0)], vec![c64(2.0, 0.0)]);
        assert_eq!(g.eval(c64(1.0, 0.0)), c64(0.0, 0.0));
        assert!(g.eval(c64(2.0, 0.0)).re.is_infinite());
        assert!((g.eval(c64(0.0, 0.0)) - c64(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn huge_degree_ratio_stays_finite() {
        let num: Vec<C64> = (0..400).map(|k| c64(-1e3 - k as f64, 0.0)).collect();
        let den: Vec<C64> = (0..400).map(|k| c64(1e3 + k as f64, 1.0)).collect();
        let g = RootRatio::new(num, den);
        let z = c64(0.0, 5e3);
        let paired = g.num.roots.iter().zip(&g.den.roots).fold(C64::from(1.0), |acc, (n, d)| acc * (z - n) / (z - d));
        assert!(!RootPoly::new(g.num.roots.clone()).eval(z).norm().is_finite());
        assert!((g.eval(z) - paired).norm() <= 1e-11 * paired.norm());
    }

    proptest! {
        #[test]
        fn phase_magnitude_matches_direct_ratio(
            roots in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 0..8),
            poles in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 0..8),
            zr in -5.0f64..5.0, zi in 6.0f64..9.0,
        ) {
            let num: Vec<C64> = roots.iter().map(|&(a, b)| c64(a, b)).collect();
            let den: Vec<C64> = poles.iter().map(|&(a, b)| c64(a, b)).collect();
            let z = c64(zr, zi);
            let g = RootRatio::new(num.clone(), den.clone());
            let direct = RootPoly::new(num).eval(z) / RootPoly::new(den).eval(z);
            prop_assert!((g.eval(z) - direct).norm() <= 1e-12 * direct.norm());
        }
    }
}
