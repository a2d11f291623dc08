use super::CliError;
use crate::greedy::Algorithm;
use crate::model::{gen_test_system, SampleGrid, StateSpaceSystem, SystemFiles, TestSystemKind};
use crate::remainder::EstimateOption;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Benchmark configuration, read from a TOML file.
///
/// ```toml
/// seed = 7
/// out = "results"
///
/// [system]
/// source = "generate"
/// kind = "random_stable"
/// n = 200
///
/// [grid]
/// alpha_e = -3.0
/// beta_e = 5.0
/// k_e = 700
///
/// [[algorithm]]
/// name = "arksm"
/// l_max = 20
///
/// [[algorithm]]
/// name = "two_sided"
/// option = 2
/// l_max = 20
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Write wall-clock seconds into the summary (which then stops being reproducible).
    #[serde(default)]
    pub report_timing: bool,
    pub system: SystemSpec,
    pub grid: GridSpec,
    #[serde(rename = "algorithm")]
    pub algorithms: Vec<AlgorithmSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    /// Matrix Market files; relative paths resolve against the config file's directory.
    Files {
        a: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        e: Option<PathBuf>,
        b: PathBuf,
        c: PathBuf,
    },
    /// A generated test system; `seed` defaults to the run seed.
    Generate {
        kind: TestSystemKind,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

/// Evaluation grid `Z(alpha_e, beta_e, k_e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub alpha_e: f64,
    pub beta_e: f64,
    pub k_e: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    /// `arksm`, `two_sided` (with `option`), `two_sided_o1`..`two_sided_o3`, or `irka`.
    pub name: String,
    pub l_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub option: Option<u8>,
    /// Two-sided candidate grid; defaults to the evaluation grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// ARKSM hull samples per edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl AlgorithmSpec {
    pub fn algorithm(&self) -> Result<Algorithm, CliError> {
        let option = self
            .option
            .map(|i| EstimateOption::from_index(i).ok_or_else(|| CliError::config(format!("option must be 1, 2 or 3, got {i}"))))
            .transpose()?;
        let alg = match self.name.as_str() {
            "two_sided" => Algorithm::TwoSided(option.unwrap_or(EstimateOption::O2)),
            name => {
                let alg: Algorithm = name.parse().map_err(CliError::config)?;
                match (alg, option) {
                    (_, None) => alg,
                    (Algorithm::TwoSided(o), Some(p)) if o == p => alg,
                    _ => return Err(CliError::config(format!("option does not apply to '{name}'"))),
                }
            }
        };
        Ok(alg)
    }

    fn check_grid(&self) -> Result<(), CliError> {
        if let (Some(a), Some(b)) = (self.alpha, self.beta) {
            if a > b {
                return Err(CliError::config(format!("{}: alpha {a} exceeds beta {b}", self.name)));
            }
        }
        if self.k == Some(0) {
            return Err(CliError::config(format!("{}: k must be at least 1", self.name)));
        }
        Ok(())
    }

    /// Candidate grid for the two-sided method.
    pub fn candidate_grid(&self, eval: &GridSpec) -> Result<SampleGrid, CliError> {
        let alpha = self.alpha.unwrap_or(eval.alpha_e);
        let beta = self.beta.unwrap_or(eval.beta_e);
        let k = self.k.unwrap_or(eval.k_e);
        crate::model::make_grid(alpha, beta, k).map_err(|e| CliError::config(format!("{}: {e}", self.name)))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config; file-backed systems are resolved against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        if let SystemSpec::Files { a, e, b, c } = &mut cfg.system {
            let root = path.parent().unwrap_or(Path::new(""));
            for p in [Some(a), e.as_mut(), Some(b), Some(c)].into_iter().flatten() {
                if p.is_relative() {
                    *p = root.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.grid;
        if !(g.alpha_e <= g.beta_e) {
            return Err(CliError::config(format!("grid: alpha_e {} exceeds beta_e {}", g.alpha_e, g.beta_e)));
        }
        if g.k_e == 0 {
            return Err(CliError::config("grid: k_e must be at least 1"));
        }
        if let SystemSpec::Generate { n: 0, .. } = self.system {
            return Err(CliError::config("system: n must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::config("no [[algorithm]] entries"));
        }
        let mut seen = Vec::new();
        for spec in &self.algorithms {
            let alg = spec.algorithm()?;
            let min = if alg == Algorithm::Arksm { 2 } else { 1 };
            if spec.l_max < min {
                return Err(CliError::config(format!("{}: l_max must be at least {min}", spec.name)));
            }
            spec.check_grid()?;
            if seen.contains(&alg) {
                return Err(CliError::config(format!("algorithm '{}' listed twice", alg.name())));
            }
            seen.push(alg);
        }
        Ok(())
    }

    pub fn build_system(&self) -> Result<StateSpaceSystem, CliError> {
        match &self.system {
            SystemSpec::Files { a, e, b, c } => SystemFiles {
                root: None,
                a: a.clone(),
                e: e.clone(),
                b: b.clone(),
                c: c.clone(),
            }
            .load()
            .map_err(|e| CliError::config(format!("system: {e}"))),
            SystemSpec::Generate { kind, n, seed } => Ok(gen_test_system(*kind, *n, seed.unwrap_or(self.seed))),
        }
    }
}
