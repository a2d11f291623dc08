use crate::error::Result;
use crate::krylov::{lanczos_biorth, one_sided_model, two_sided_model, ReducedModel, ShiftSet, DEFAULT_BREAKDOWN_TOL};
use crate::model::{gen_test_system, make_grid, SampleGrid, StateSpaceSystem, TestSystemKind};
use crate::numkernel::{c64, C64};
use crate::remainder::{
    divided_difference, error_direct, quadrature_exactness_check, resolvent_divided_difference,
    weighted_resolvent_divided_difference, weighted_start_vectors, ErrorMode, RemainderFormula,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;

const FORMULA_TOL: f64 = 1e-7;
const QUADRATURE_TOL: f64 = 1e-7;
const DIVIDED_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Flip the sign of the two-sided formula; every formula case should then fail.
    pub mutate: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            sizes: vec![20, 40],
            seeds: (0..5).collect(),
            mutate: false,
        }
    }
}

/// One tested combination.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub suite: &'static str,
    pub label: String,
    /// Worst discrepancy in the suite's own normalization; infinite when the case errored.
    pub worst: f64,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Projection {
    TwoSided,
    OneSided,
}

fn system(descriptor: bool, n: usize, seed: u64) -> StateSpaceSystem {
    let kind = if descriptor {
        TestSystemKind::RandomDescriptor
    } else {
        TestSystemKind::RandomStable
    };
    gen_test_system(kind, n, seed)
}

fn random_shift(rng: &mut ChaCha8Rng) -> C64 {
    let re = 10f64.powf(rng.random_range(0.0..2.5));
    c64(re, re * rng.random_range(-1.0..1.0))
}

/// Mixed finite and infinite shifts with different finite counts on the two sides.
fn random_shift_set(rng: &mut ChaCha8Rng, l: usize) -> ShiftSet {
    let k_b = rng.random_range(1..=l);
    let k_c = rng.random_range(0..=l);
    let right = (0..k_b).map(|_| random_shift(rng)).collect();
    let left = (0..k_c).map(|_| random_shift(rng)).collect();
    ShiftSet::two_sided(right, l - k_b, left, l - k_c)
}

fn case_rng(suite: u64, n: usize, seed: u64, mode: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((n as u64) << 20) ^ (suite << 8) ^ mode)
}

fn build_model(sys: &StateSpaceSystem, shifts: &ShiftSet, projection: Projection) -> Result<ReducedModel> {
    match projection {
        Projection::TwoSided => two_sided_model(sys, shifts),
        Projection::OneSided => one_sided_model(sys, &shifts.right, shifts.right_infinite),
    }
}

fn failed(suite: &'static str, label: String, e: impl std::fmt::Display) -> CaseResult {
    CaseResult {
        suite,
        label,
        worst: f64::INFINITY,
        pass: false,
        detail: Some(e.to_string()),
    }
}

fn formula_cases(opts: &VerifyOptions) -> Vec<CaseResult> {
    let grid = make_grid(-2.0, 3.0, 50).expect("valid grid");
    let mut out = Vec::new();
    for &n in &opts.sizes {
        for &seed in &opts.seeds {
            for (m, (descriptor, projection)) in [
                (false, Projection::TwoSided),
                (false, Projection::OneSided),
                (true, Projection::TwoSided),
                (true, Projection::OneSided),
            ]
            .into_iter()
            .enumerate()
            {
                let label = format!(
                    "n={n} seed={seed} mode={}/{}",
                    if descriptor { "descriptor" } else { "standard" },
                    if projection == Projection::TwoSided { "two_sided" } else { "one_sided" }
                );
                let mut rng = case_rng(1, n, seed, m as u64);
                let sys = system(descriptor, n, seed);
                let shifts = random_shift_set(&mut rng, (n / 2).clamp(1, 8));
                let (central, zeros) = match formula_case(&sys, &shifts, projection, &grid, opts.mutate) {
                    Ok(r) => r,
                    Err(e) => {
                        out.push(failed("central-equivalence", label.clone(), &e));
                        out.push(failed("interpolation-zero", label, e));
                        continue;
                    }
                };
                out.push(CaseResult {
                    suite: "central-equivalence",
                    label: label.clone(),
                    worst: central,
                    pass: central <= FORMULA_TOL,
                    detail: None,
                });
                out.push(CaseResult {
                    suite: "interpolation-zero",
                    label,
                    worst: zeros,
                    pass: zeros <= FORMULA_TOL,
                    detail: None,
                });
            }
        }
    }
    out
}

/// Worst `|e_formula - e_direct| / (1 + |h| + |h~|)` on the grid and worst
/// `|e(s)| / (1 + |h(s)|)` over the finite interpolation points.
fn formula_case(
    sys: &StateSpaceSystem,
    shifts: &ShiftSet,
    projection: Projection,
    grid: &SampleGrid,
    mutate: bool,
) -> Result<(f64, f64)> {
    let rm = build_model(sys, shifts, projection)?;
    let mode = match projection {
        Projection::TwoSided => ErrorMode::TwoSided,
        Projection::OneSided => ErrorMode::OneSided,
    };
    let mut formula = RemainderFormula::new(sys, &rm, mode)?;
    if mutate {
        formula = formula.with_sign_fault();
    }
    let mut curve = error_direct(sys, &rm, grid)?;
    formula.fill_curve(sys, &mut curve);
    let mut central: f64 = 0.0;
    for i in 0..curve.len() {
        let (Some(h), Some(ht), Some(ed)) = (curve.h[i], curve.h_tilde[i], curve.e_direct[i]) else {
            continue;
        };
        let gap = match curve.e_formula[i] {
            Some(ef) => (ef - ed).norm() / (1.0 + h.norm() + ht.norm()),
            None => f64::INFINITY,
        };
        central = central.max(gap);
    }

    let mut nodes = rm.shifts().right.clone();
    if projection == Projection::TwoSided {
        nodes.extend(&rm.shifts().left);
    }
    let node_grid = SampleGrid {
        alpha: 0.0,
        beta: 0.0,
        k: 0,
        points: nodes,
    };
    let at_nodes = error_direct(sys, &rm, &node_grid)?;
    let zeros = (0..at_nodes.len())
        .map(|i| match (at_nodes.h[i], at_nodes.e_direct[i]) {
            (Some(h), Some(e)) => e.norm() / (1.0 + h.norm()),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    Ok((central, zeros))
}

fn quadrature_cases(opts: &VerifyOptions) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for &n in &opts.sizes {
        for &seed in &opts.seeds {
            for (m, descriptor) in [false, true].into_iter().enumerate() {
                let label = format!("n={n} seed={seed} mode={}", if descriptor { "descriptor" } else { "standard" });
                let mut rng = case_rng(2, n, seed, m as u64);
                let sys = system(descriptor, n, seed);
                let l = (n / 2).clamp(1, 6);
                let mut shifts = random_shift_set(&mut rng, l);
                shifts.right_infinite = 0;
                shifts.left_infinite = 0;
                let report = weighted_start_vectors(&sys, &shifts)
                    .and_then(|(u, w)| lanczos_biorth(&sys, &u, &w, l, DEFAULT_BREAKDOWN_TOL))
                    .and_then(|f| quadrature_exactness_check(&sys, &f, &shifts, 2 * l - 1, 10, seed));
                match report {
                    Ok(r) => out.push(CaseResult {
                        suite: "quadrature",
                        label,
                        worst: r.max_discrepancy,
                        pass: r.max_discrepancy <= QUADRATURE_TOL,
                        detail: Some(format!("degree {} control {:.2e}", 2 * l, r.control_discrepancy)),
                    }),
                    Err(e) => out.push(failed("quadrature", label, e)),
                }
            }
        }
    }
    out
}

fn divided_cases(opts: &VerifyOptions) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for &seed in &opts.seeds {
        for m in 1..=6usize {
            let mut rng = case_rng(3, m, seed, 0);
            let mut point = || c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let nodes: Vec<C64> = (0..m).map(|_| point()).collect();
            let roots: Vec<C64> = (0..m - 1).map(|_| point()).collect();
            let z = point() + c64(6.0, 0.0);
            let rel = |a: C64, b: C64| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE);
            let result = (|| -> Result<f64> {
                let plain = divided_difference(|x| C64::from(1.0) / (z - x), &nodes)?;
                let weighted = divided_difference(
                    |x| roots.iter().fold(C64::from(1.0), |acc, &t| acc * (x - t)) / (z - x),
                    &nodes,
                )?;
                let closed = weighted_resolvent_divided_difference(z, &roots, &nodes)?;
                Ok(rel(resolvent_divided_difference(z, &nodes), plain).max(rel(closed, weighted)))
            })();
            let label = format!("nodes={m} seed={seed} mode=resolvent+weighted");
            match result {
                Ok(worst) => out.push(CaseResult {
                    suite: "divided-difference",
                    label,
                    worst,
                    pass: worst <= DIVIDED_TOL,
                    detail: None,
                }),
                Err(e) => out.push(failed("divided-difference", label, e)),
            }
        }
    }
    out
}

/// Runs every suite, prints one line per case and a verdict per suite; true iff all pass.
pub fn verify_suite(opts: &VerifyOptions, w: &mut impl Write) -> std::io::Result<bool> {
    let mut cases = formula_cases(opts);
    cases.extend(quadrature_cases(opts));
    cases.extend(divided_cases(opts));
    let mut all = true;
    for suite in ["central-equivalence", "interpolation-zero", "quadrature", "divided-difference"] {
        let mine: Vec<&CaseResult> = cases.iter().filter(|c| c.suite == suite).collect();
        for c in &mine {
            write!(w, "{} {suite} {} worst={:.3e}", if c.pass { "PASS" } else { "FAIL" }, c.label, c.worst)?;
            match &c.detail {
                Some(d) => writeln!(w, " ({d})")?,
                None => writeln!(w)?,
            }
        }
        let pass = mine.iter().all(|c| c.pass);
        let worst = mine.iter().map(|c| c.worst).fold(0.0, f64::max);
        writeln!(
            w,
            "suite {suite}: {} ({} cases, worst {worst:.3e})",
            if pass { "PASS" } else { "FAIL" },
            mine.len()
        )?;
        all &= pass;
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyOptions {
        VerifyOptions {
            sizes: vec![12],
            seeds: vec![0, 1],
            mutate: false,
        }
    }

    #[test]
    fn default_suites_pass_and_list_every_case() {
        let mut buf = Vec::new();
        let ok = verify_suite(&small(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(ok, "{text}");
        for seed in [0, 1] {
            for mode in ["standard/two_sided", "standard/one_sided", "descriptor/two_sided", "descriptor/one_sided"] {
                assert!(text.contains(&format!("central-equivalence n=12 seed={seed} mode={mode} ")), "{text}");
            }
            assert!(text.contains(&format!("quadrature n=12 seed={seed} mode=descriptor")));
        }
        assert_eq!(text.lines().filter(|l| l.starts_with("suite ")).count(), 4);
    }

    #[test]
    fn sign_fault_is_caught() {
        let opts = VerifyOptions { mutate: true, ..small() };
        let mut buf = Vec::new();
        assert!(!verify_suite(&opts, &mut buf).unwrap());
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("suite central-equivalence: FAIL"));
    }
}
