use super::config::{AlgorithmSpec, RunConfig};
use super::CliError;
use crate::greedy::{
    arksm_with_bounds, extreme_shift_bounds, irka_baseline, log_spaced_real_shifts, two_sided_greedy_on_grid,
    Algorithm, GreedyRun, DEFAULT_EDGE_SAMPLES, IRKA_MAX_ITER, IRKA_TOL,
};
use crate::krylov::Sidedness;
use crate::model::{make_grid, SampleGrid, StateSpaceSystem};
use crate::numkernel::C64;
use crate::remainder::{error_direct_with_samples, sample_transfer, ErrorCurve, ErrorMode, RemainderFormula};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// One algorithm's outcome inside a benchmark.
#[derive(Debug, Clone)]
pub struct AlgorithmReport {
    pub name: &'static str,
    pub run: GreedyRun,
    /// `(order, max |e|, solves)` for every retained model.
    pub history: Vec<(usize, f64, usize)>,
    pub curve: ErrorCurve,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub out_dir: PathBuf,
    pub algorithms: Vec<AlgorithmReport>,
    pub sample_seconds: f64,
}

/// 17 significant digits, enough to round-trip an `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn solves_at(run: &GreedyRun, order: usize) -> usize {
    match run.algorithm {
        Algorithm::Arksm => order,
        Algorithm::TwoSided(_) => 2 * order,
        Algorithm::Irka => run.solve_count,
    }
}

fn numerical(alg: &str, step: &str, e: impl std::fmt::Display) -> CliError {
    CliError::numerical(format!("{alg}: {step} failed: {e}"))
}

fn run_one(
    sys: &StateSpaceSystem,
    spec: &AlgorithmSpec,
    cfg: &RunConfig,
    bounds: (C64, C64),
) -> Result<GreedyRun, CliError> {
    let alg = spec.algorithm()?;
    let name = alg.name();
    let run = match alg {
        Algorithm::Arksm => {
            arksm_with_bounds(sys, bounds, spec.l_max, spec.edge_samples.unwrap_or(DEFAULT_EDGE_SAMPLES))
        }
        Algorithm::TwoSided(option) => {
            let grid = spec.candidate_grid(&cfg.grid)?;
            two_sided_greedy_on_grid(sys, bounds.1.norm(), &grid, spec.l_max, option)
        }
        Algorithm::Irka => {
            let start = log_spaced_real_shifts(bounds.0.norm(), bounds.1.norm(), spec.l_max);
            irka_baseline(sys, &start, spec.max_iter.unwrap_or(IRKA_MAX_ITER), spec.tol.unwrap_or(IRKA_TOL))
        }
    };
    run.map_err(|e| numerical(name, "shift selection", e))
}

fn curve_csv(curve: &ErrorCurve) -> String {
    let mut s = String::from("z_imag,abs_h,abs_h_tilde,abs_e_direct,abs_e_formula\n");
    for i in 0..curve.len() {
        // rows where any quantity hit a pole are left out
        if let (Some(h), Some(ht), Some(ed), Some(ef)) = (curve.h[i], curve.h_tilde[i], curve.e_direct[i], curve.e_formula[i]) {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                num(curve.points[i].im),
                num(h.norm()),
                num(ht.norm()),
                num(ed.norm()),
                num(ef.norm())
            );
        }
    }
    s
}

fn summary_csv(reports: &[AlgorithmReport], timing: bool) -> String {
    let mut s = String::from("algorithm,order,max_error,solves,seconds\n");
    for r in reports {
        for (i, &(order, err, solves)) in r.history.iter().enumerate() {
            let secs = if timing && i + 1 == r.history.len() { num(r.seconds) } else { String::new() };
            let _ = writeln!(s, "{},{order},{},{solves},{secs}", r.name, num(err));
        }
    }
    s
}

fn shifts_csv(reports: &[AlgorithmReport]) -> String {
    let mut s = String::from("algorithm,side,index,re,im\n");
    for r in reports {
        for (side, shifts) in [("right", &r.run.right_shifts), ("left", &r.run.left_shifts)] {
            for (j, z) in shifts.iter().enumerate() {
                let _ = writeln!(s, "{},{side},{},{},{}", r.name, j + 1, num(z.re), num(z.im));
            }
        }
    }
    s
}

#[derive(Serialize)]
struct ManifestRun<'a> {
    algorithm: &'a str,
    order: usize,
    solves: usize,
    wasted_solves: usize,
    iterations: usize,
    converged: bool,
    max_error: f64,
    notes: &'a [String],
}

#[derive(Serialize)]
struct Manifest<'a> {
    package: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    seconds: BTreeMap<String, f64>,
    runs: Vec<ManifestRun<'a>>,
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Runs every configured algorithm and writes `curve_<algorithm>.csv`, `summary.csv`,
/// `shifts.csv` and `manifest.toml` into `out`.
pub fn run_benchmark(cfg: &RunConfig, out: &Path) -> Result<BenchReport, CliError> {
    cfg.validate()?;
    let sys = cfg.build_system()?;
    let grid: SampleGrid =
        make_grid(cfg.grid.alpha_e, cfg.grid.beta_e, cfg.grid.k_e).map_err(|e| CliError::config(format!("grid: {e}")))?;
    std::fs::create_dir_all(out).map_err(|e| CliError::config(format!("{}: {e}", out.display())))?;

    let mut seconds = BTreeMap::new();
    let t = Instant::now();
    let h = sample_transfer(&sys, &grid);
    let sample_seconds = t.elapsed().as_secs_f64();
    seconds.insert("get_samples".to_string(), sample_seconds);

    let t = Instant::now();
    let bounds = extreme_shift_bounds(&sys).map_err(|e| numerical("setup", "extreme shift estimation", e))?;
    seconds.insert("shift_bounds".to_string(), t.elapsed().as_secs_f64());

    let mut reports = Vec::new();
    for spec in &cfg.algorithms {
        let t = Instant::now();
        let run = run_one(&sys, spec, cfg, bounds)?;
        let elapsed = t.elapsed().as_secs_f64();
        let name = run.algorithm.name();
        log::info!("{name}: order {} with {} solves in {elapsed:.3}s", run.order(), run.solve_count);

        let history = run
            .error_history(&grid, &h)
            .map_err(|e| numerical(name, "error sweep", e))?
            .into_iter()
            .map(|(order, err)| (order, err, solves_at(&run, order)))
            .collect();
        let rm = run.final_model();
        let mut curve = error_direct_with_samples(rm, &grid, &h).map_err(|e| numerical(name, "error sweep", e))?;
        let mode = match rm.sidedness() {
            Sidedness::TwoSided => ErrorMode::TwoSided,
            Sidedness::OneSided => ErrorMode::OneSided,
        };
        RemainderFormula::new(&sys, rm, mode)
            .map_err(|e| numerical(name, "error formula", e))?
            .fill_curve(&sys, &mut curve);
        write(&out.join(format!("curve_{name}.csv")), &curve_csv(&curve))?;
        seconds.insert(name.to_string(), elapsed);
        reports.push(AlgorithmReport {
            name,
            run,
            history,
            curve,
            seconds: elapsed,
        });
    }

    write(&out.join("summary.csv"), &summary_csv(&reports, cfg.report_timing))?;
    write(&out.join("shifts.csv"), &shifts_csv(&reports))?;
    let manifest = Manifest {
        package: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        seconds,
        runs: reports
            .iter()
            .map(|r| ManifestRun {
                algorithm: r.name,
                order: r.run.order(),
                solves: r.run.solve_count,
                wasted_solves: r.run.wasted_solves,
                iterations: r.run.iterations,
                converged: r.run.converged,
                max_error: r.curve.max_abs_error,
                notes: &r.run.notes,
            })
            .collect(),
    };
    let text = toml::to_string(&manifest).map_err(|e| CliError::config(format!("manifest: {e}")))?;
    write(&out.join("manifest.toml"), &text)?;
    Ok(BenchReport {
        out_dir: out.to_path_buf(),
        algorithms: reports,
        sample_seconds,
    })
}
