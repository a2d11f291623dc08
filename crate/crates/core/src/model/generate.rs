use super::StateSpaceSystem;
use crate::numkernel::{eigenvalues, generalized_eig, real, ComplexMatrix, ComplexVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestSystemKind {
    /// Graded diagonal plus a scaled random coupling, E = I.
    RandomStable,
    /// Same state matrix as `RandomStable` with a random well-conditioned E.
    RandomDescriptor,
    /// Second-difference matrix on `n` interior points scaled by `(n+1)^2`.
    Laplacian1d,
    /// `A = diag(-1, ..., -n)`.
    Diagonal,
}

impl std::str::FromStr for TestSystemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random_stable" => Ok(Self::RandomStable),
            "random_descriptor" => Ok(Self::RandomDescriptor),
            "laplacian_1d" => Ok(Self::Laplacian1d),
            "diagonal" => Ok(Self::Diagonal),
            other => Err(format!("unknown system kind '{other}'")),
        }
    }
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        real(scale * x)
    })
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
    ComplexVector::from_fn(n, |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        real(x)
    })
}

/// Eigenvalues spread over three decades; the coupling is scaled by
/// `sqrt(d_i d_j)` so every mode is perturbed relative to its own size.
fn graded_state_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let d = super::grid::logspace(0.0, 3.0, n);
    let d = if n == 1 { vec![1.0] } else { d };
    let g = gaussian_matrix(rng, n, 0.5 / (n as f64).sqrt());
    ComplexMatrix::from_fn(n, n, |i, j| {
        let coupling = g[(i, j)] * (d[i] * d[j]).sqrt();
        if i == j {
            coupling - d[i]
        } else {
            coupling
        }
    })
}

/// Shifts the spectrum of `E^{-1}A` left so that it lies in the open left half-plane.
fn stabilize(a: &mut ComplexMatrix, e: &ComplexMatrix, spectrum: &[crate::numkernel::C64]) {
    let max_re = spectrum.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if max_re >= 0.0 {
        let shift = if max_re == 0.0 { 1.0 } else { 2.0 * max_re };
        *a -= e * real(shift);
    }
}

/// Deterministic synthetic test problem of dimension `n`.
///
/// `Laplacian1d` and `Diagonal` do not depend on `seed`.
pub fn gen_test_system(kind: TestSystemKind, n: usize, seed: u64) -> StateSpaceSystem {
    assert!(n >= 1, "test systems need n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ones = ComplexVector::from_element(n, real(1.0));
    let built = match kind {
        TestSystemKind::RandomStable => {
            let mut a = graded_state_matrix(&mut rng, n);
            let b = gaussian_vector(&mut rng, n);
            let c = gaussian_vector(&mut rng, n);
            let e = ComplexMatrix::identity(n, n);
            let spectrum = eigenvalues(&a).expect("eigenvalues of a generated matrix");
            stabilize(&mut a, &e, &spectrum);
            StateSpaceSystem::new(a, None, b, c)
        }
        TestSystemKind::RandomDescriptor => {
            let mut a = graded_state_matrix(&mut rng, n);
            let b = gaussian_vector(&mut rng, n);
            let c = gaussian_vector(&mut rng, n);
            let e = ComplexMatrix::identity(n, n) + gaussian_matrix(&mut rng, n, 0.3 / (n as f64).sqrt());
            let spectrum = generalized_eig(&a, &e).expect("generated mass matrix is nonsingular");
            stabilize(&mut a, &e, &spectrum);
            StateSpaceSystem::new(a, Some(e), b, c)
        }
        TestSystemKind::Laplacian1d => {
            let h2 = ((n + 1) as f64).powi(2);
            let a = ComplexMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
                0 => real(-2.0 * h2),
                1 => real(h2),
                _ => real(0.0),
            });
            StateSpaceSystem::new(a, None, ones.clone(), ones)
        }
        TestSystemKind::Diagonal => {
            let eig: Vec<f64> = (1..=n).map(|k| -(k as f64)).collect();
            return diagonal_system(&eig);
        }
    };
    built.expect("generated systems are well formed")
}

/// `A = diag(eigenvalues)`, `E = I`, `b = c = 1`.
pub fn diagonal_system(eigenvalues: &[f64]) -> StateSpaceSystem {
    let n = eigenvalues.len();
    let diag = ComplexVector::from_iterator(n, eigenvalues.iter().map(|&x| real(x)));
    let ones = ComplexVector::from_element(n, real(1.0));
    StateSpaceSystem::new(ComplexMatrix::from_diagonal(&diag), None, ones.clone(), ones)
        .expect("diagonal system is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{c64, C64};

    fn max_real_part(sys: &StateSpaceSystem) -> f64 {
        generalized_eig(sys.a(), sys.e())
            .unwrap()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn diagonal_transfer_function_is_partial_fraction_sum() {
        let sys = diagonal_system(&[-1.0, -2.0]);
        let z = c64(0.3, 1.7);
        let x = (ComplexMatrix::identity(2, 2) * z - sys.a()).lu().solve(sys.b()).unwrap();
        let h: C64 = sys.c().dotc(&x);
        let expected = C64::from(1.0) / (z + 1.0) + C64::from(1.0) / (z + 2.0);
        assert!((h - expected).norm() <= 1e-14);
    }

    #[test]
    fn random_stable_is_stable_for_twenty_seeds() {
        for seed in 0..20 {
            let sys = gen_test_system(TestSystemKind::RandomStable, 30, seed);
            assert!(max_real_part(&sys) < 0.0, "seed {seed}");
        }
    }

    #[test]
    fn random_descriptor_is_stable_with_nonidentity_mass() {
        for seed in 0..20 {
            let sys = gen_test_system(TestSystemKind::RandomDescriptor, 25, seed);
            assert!(!sys.has_identity_mass());
            assert!(max_real_part(&sys) < 0.0, "seed {seed}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in [TestSystemKind::RandomStable, TestSystemKind::RandomDescriptor] {
            let a = gen_test_system(kind, 12, 7);
            let b = gen_test_system(kind, 12, 7);
            let c = gen_test_system(kind, 12, 8);
            assert_eq!(a.a(), b.a());
            assert_eq!(a.e(), b.e());
            assert_eq!(a.b(), b.b());
            assert_eq!(a.c(), b.c());
            assert_ne!(a.a(), c.a());
        }
    }

    #[test]
    fn laplacian_spectrum_matches_closed_form() {
        let n = 8;
        let sys = gen_test_system(TestSystemKind::Laplacian1d, n, 0);
        let h2 = ((n + 1) as f64).powi(2);
        let mut got: Vec<f64> = generalized_eig(sys.a(), sys.e()).unwrap().iter().map(|z| z.re).collect();
        got.sort_by(f64::total_cmp);
        let mut expected: Vec<f64> = (1..=n)
            .map(|k| -4.0 * h2 * (k as f64 * std::f64::consts::PI / (2.0 * (n + 1) as f64)).sin().powi(2))
            .collect();
        expected.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() <= 1e-10 * e.abs());
        }
        assert_eq!(sys.b(), &ComplexVector::from_element(n, real(1.0)));
    }

    #[test]
    fn single_state_systems() {
        for kind in [
            TestSystemKind::RandomStable,
            TestSystemKind::RandomDescriptor,
            TestSystemKind::Laplacian1d,
            TestSystemKind::Diagonal,
        ] {
            let sys = gen_test_system(kind, 1, 3);
            assert_eq!(sys.n(), 1);
            assert!(max_real_part(&sys) < 0.0);
        }
    }

    #[test]
    fn kind_names_parse() {
        assert_eq!("laplacian_1d".parse::<TestSystemKind>(), Ok(TestSystemKind::Laplacian1d));
        assert!("bogus".parse::<TestSystemKind>().is_err());
    }
}
