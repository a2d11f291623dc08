use crate::error::{Error, Result};
use crate::numkernel::{c64, C64};

/// `[-i logspace(alpha, beta, k), 0, i logspace(alpha, beta, k)]`, sorted by imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub alpha: f64,
    pub beta: f64,
    pub k: usize,
    pub points: Vec<C64>,
}

/// `k` values `10^x` with x evenly spaced from `alpha` to `beta`; a single value is `10^beta`.
pub fn logspace(alpha: f64, beta: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![10f64.powf(beta)],
        _ => (0..k)
            .map(|j| 10f64.powf(alpha + (beta - alpha) * j as f64 / (k - 1) as f64))
            .collect(),
    }
}

pub fn make_grid(alpha: f64, beta: f64, k: usize) -> Result<SampleGrid> {
    if k == 0 {
        return Err(Error::InvalidArgument("grid needs k >= 1".into()));
    }
    if !(alpha.is_finite() && beta.is_finite()) || alpha > beta {
        return Err(Error::InvalidArgument(format!("grid exponents must satisfy alpha <= beta, got {alpha}, {beta}")));
    }
    let mags = logspace(alpha, beta, k);
    let mut points = Vec::with_capacity(2 * k + 1);
    points.extend(mags.iter().rev().map(|&m| c64(0.0, -m)));
    points.push(c64(0.0, 0.0));
    points.extend(mags.iter().map(|&m| c64(0.0, m)));
    Ok(SampleGrid { alpha, beta, k, points })
}

impl SampleGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_grid() {
        let g = make_grid(0.0, 0.0, 1).unwrap();
        assert_eq!(g.points, vec![c64(0.0, -1.0), c64(0.0, 0.0), c64(0.0, 1.0)]);
    }

    #[test]
    fn three_decades() {
        let g = make_grid(-1.0, 1.0, 3).unwrap();
        let ims: Vec<f64> = g.points.iter().map(|z| z.im).collect();
        let expected = [-10.0, -1.0, -0.1, 0.0, 0.1, 1.0, 10.0];
        for (a, b) in ims.iter().zip(expected) {
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
        }
        assert!(g.points.iter().all(|z| z.re == 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_grid(1.0, 0.0, 3).is_err());
        assert!(make_grid(0.0, 1.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn conjugate_symmetric_with_zero(alpha in -5.0f64..3.0, span in 0.0f64..5.0, k in 1usize..60) {
            let g = make_grid(alpha, alpha + span, k).unwrap();
            prop_assert_eq!(g.len(), 2 * k + 1);
            prop_assert!(g.points.contains(&c64(0.0, 0.0)));
            for z in &g.points {
                prop_assert!(g.points.contains(&z.conj()));
            }
            prop_assert!(g.points.windows(2).all(|w| w[0].im <= w[1].im));
        }
    }
}
