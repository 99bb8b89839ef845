//! Seeded multi-run experiments with CSV output.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{run, Algorithm, RunConfig, RunRecord, DEFAULT_BUDGET};
use crate::bitcore::stable_hash;
use crate::control::{ControllerSpec, DEFAULT_UPDATE_STRENGTH};
use crate::error::{Error, Result};
use crate::harness::stats::SummaryRow;
use crate::objectives::Benchmark;

pub const SUMMARY_HEADER: &str = "arm,n,runs,covered,mean_evals,stddev_evals,min_evals,max_evals";
pub const RUNS_HEADER: &str = "arm,n,run,seed,evals,iterations,status";

/// Base of the logarithm in `λ = a · log n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogBase {
    Natural,
    Base(f64),
}

impl LogBase {
    pub fn log(&self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Base(b) => x.ln() / b.ln(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "e" | "ln" | "natural" => Ok(LogBase::Natural),
            other => {
                let b: f64 = other
                    .parse()
                    .map_err(|_| Error::config(format!("invalid log base `{other}`")))?;
                if !(b > 1.0) {
                    return Err(Error::config(format!("log base must exceed 1, got {b}")));
                }
                Ok(LogBase::Base(b))
            }
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Natural => f.write_str("e"),
            LogBase::Base(b) => write!(f, "{b}"),
        }
    }
}

/// λ as a function of the problem size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaSchedule {
    Fixed(f64),
    /// `factor · log n`
    Log {
        factor: f64,
    },
    /// `factor · sqrt(ln n)`
    SqrtLog {
        factor: f64,
    },
}

impl LambdaSchedule {
    /// Value at size `n`, floored at 1.
    pub fn at(&self, n: usize, base: LogBase) -> f64 {
        let v = match *self {
            LambdaSchedule::Fixed(v) => v,
            LambdaSchedule::Log { factor } => factor * base.log(n as f64),
            LambdaSchedule::SqrtLog { factor } => factor * (n as f64).ln().sqrt(),
        };
        v.max(1.0)
    }
}

impl FromStr for LambdaSchedule {
    type Err = Error;

    /// `32.5`, `7log`, `log`, `sqrtlog`, `2sqrtlog`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let factor = |prefix: &str| -> Result<f64> {
            let prefix = prefix.trim_end_matches('*');
            if prefix.is_empty() {
                Ok(1.0)
            } else {
                prefix
                    .parse()
                    .map_err(|_| Error::config(format!("invalid lambda schedule `{s}`")))
            }
        };
        if let Some(prefix) = s.strip_suffix("sqrtlog") {
            return Ok(LambdaSchedule::SqrtLog {
                factor: factor(prefix)?,
            });
        }
        if let Some(prefix) = s.strip_suffix("log") {
            return Ok(LambdaSchedule::Log {
                factor: factor(prefix)?,
            });
        }
        s.parse()
            .map(LambdaSchedule::Fixed)
            .map_err(|_| Error::config(format!("invalid lambda `{s}`")))
    }
}

/// Controller description whose λ may depend on `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum ControllerTemplate {
    Static {
        lambda: LambdaSchedule,
        k: Option<f64>,
        c: Option<f64>,
    },
    FitnessDependent,
    StateDependent,
    OneFifth {
        update_strength: f64,
    },
}

impl ControllerTemplate {
    pub fn resolve(&self, n: usize, base: LogBase) -> ControllerSpec {
        match self {
            ControllerTemplate::Static { lambda, k, c } => ControllerSpec::Static {
                lambda: lambda.at(n, base),
                k: *k,
                c: *c,
            },
            ControllerTemplate::FitnessDependent => ControllerSpec::FitnessDependent,
            ControllerTemplate::StateDependent => ControllerSpec::StateDependent,
            ControllerTemplate::OneFifth { update_strength } => ControllerSpec::OneFifth {
                update_strength: *update_strength,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArmSpec {
    pub name: String,
    pub algorithm: Algorithm,
    pub benchmark: Benchmark,
    pub controller: Option<ControllerTemplate>,
}

impl ArmSpec {
    pub fn gsemo(name: &str) -> Self {
        Self {
            name: name.into(),
            algorithm: Algorithm::Gsemo,
            benchmark: Benchmark::OneMinMax,
            controller: None,
        }
    }

    pub fn opll_gsemo(name: &str, controller: ControllerTemplate) -> Self {
        Self {
            name: name.into(),
            algorithm: Algorithm::OpllGsemo,
            benchmark: Benchmark::OneMinMax,
            controller: Some(controller),
        }
    }

    pub fn opll_ga(name: &str, controller: ControllerTemplate) -> Self {
        Self {
            name: name.into(),
            algorithm: Algorithm::OpllGa,
            benchmark: Benchmark::OneMax,
            controller: Some(controller),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub sizes: Vec<usize>,
    pub runs: usize,
    pub arms: Vec<ArmSpec>,
    pub base_seed: u64,
    pub log_base: LogBase,
    pub budget: u64,
    /// Summary CSV path; per-run records go to the sibling `<stem>.runs.csv`.
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    /// GSEMO against the (1+(λ,λ)) GSEMO with static `λ = k = 1/c = 7 ln n`,
    /// n = 10, 20, ..., 140, ten runs each.
    pub fn comparison_protocol(base_seed: u64) -> Self {
        Self {
            sizes: (1..=14).map(|i| 10 * i).collect(),
            runs: 10,
            arms: vec![
                ArmSpec::gsemo("gsemo"),
                ArmSpec::opll_gsemo(
                    "opll-gsemo",
                    ControllerTemplate::Static {
                        lambda: LambdaSchedule::Log { factor: 7.0 },
                        k: None,
                        c: None,
                    },
                ),
            ],
            base_seed,
            log_base: LogBase::Natural,
            budget: DEFAULT_BUDGET,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::config("runs must be >= 1"));
        }
        if self.sizes.is_empty() {
            return Err(Error::config("at least one problem size is required"));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("sizes must be strictly increasing"));
        }
        if self.arms.is_empty() {
            return Err(Error::config("at least one arm is required"));
        }
        let mut names = HashSet::new();
        for arm in &self.arms {
            if arm.name.is_empty() || arm.name.contains([',', '"', '\n']) {
                return Err(Error::config(format!("invalid arm name `{}`", arm.name)));
            }
            if !names.insert(arm.name.as_str()) {
                return Err(Error::config(format!("duplicate arm name `{}`", arm.name)));
            }
        }
        for arm in &self.arms {
            for &n in &self.sizes {
                self.run_config(arm, n, 0).validate()?;
            }
        }
        Ok(())
    }

    fn run_config(&self, arm: &ArmSpec, n: usize, seed: u64) -> RunConfig {
        RunConfig {
            algorithm: arm.algorithm,
            benchmark: arm.benchmark,
            n,
            controller: arm.controller.as_ref().map(|t| t.resolve(n, self.log_base)),
            seed,
            budget: self.budget,
            milestones: Vec::new(),
            record_lambda: false,
        }
    }
}

/// `base_seed ⊕ hash(arm, n, run)`.
pub fn derive_seed(base_seed: u64, arm: &str, n: usize, run: usize) -> u64 {
    let key = format!("{arm}\u{1f}{n}\u{1f}{run}");
    base_seed ^ stable_hash(key.as_bytes())
}

/// One line of the per-run CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub arm: String,
    pub n: usize,
    pub run: usize,
    pub seed: u64,
    pub evals: u64,
    pub iterations: u64,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<SummaryRow>,
    pub runs: Vec<RunRow>,
    pub records: Vec<RunRecord>,
}

impl ExperimentResult {
    pub fn rows_for(&self, arm: &str) -> Vec<SummaryRow> {
        self.rows.iter().filter(|r| r.arm == arm).cloned().collect()
    }
}

/// Execute every `(arm, n, run)` triple in parallel and aggregate per
/// `(arm, n)`. Output order is independent of scheduling.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let mut jobs = Vec::new();
    let mut seen = HashSet::new();
    for arm in &spec.arms {
        for &n in &spec.sizes {
            for r in 0..spec.runs {
                let seed = derive_seed(spec.base_seed, &arm.name, n, r);
                if !seen.insert(seed) {
                    return Err(Error::Internal(format!(
                        "seed collision for arm {} n={n} run={r}",
                        arm.name
                    )));
                }
                jobs.push((arm, n, r, spec.run_config(arm, n, seed)));
            }
        }
    }
    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|(_, _, _, cfg)| run(cfg.clone()))
        .collect::<Result<_>>()?;

    let runs: Vec<RunRow> = jobs
        .iter()
        .zip(&records)
        .map(|((arm, n, r, _), rec)| RunRow {
            arm: arm.name.clone(),
            n: *n,
            run: *r,
            seed: rec.seed,
            evals: rec.evaluations,
            iterations: rec.iterations,
            status: rec.status.name().to_string(),
        })
        .collect();
    let rows = records
        .chunks(spec.runs)
        .zip(jobs.chunks(spec.runs))
        .map(|(recs, js)| SummaryRow::from_records(&js[0].0.name, js[0].1, recs))
        .collect::<Result<Vec<_>>>()?;

    let result = ExperimentResult {
        rows,
        runs,
        records,
    };
    if let Some(out) = &spec.out {
        write_csv(out, &result)?;
    }
    Ok(result)
}

/// `results.csv` → `results.runs.csv`.
pub fn runs_path(summary: &Path) -> PathBuf {
    let stem = summary
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".into());
    summary.with_file_name(format!("{stem}.runs.csv"))
}

pub fn write_csv(summary: &Path, result: &ExperimentResult) -> Result<()> {
    if let Some(dir) = summary.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    write_rows(File::create(summary)?, &result.rows)?;
    write_rows(File::create(runs_path(summary))?, &result.runs)?;
    Ok(())
}

pub fn write_rows<W: Write, T: Serialize>(w: W, rows: &[T]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn summary_to_csv_string(rows: &[SummaryRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// One-fifth arm with the default update strength.
pub fn one_fifth_template() -> ControllerTemplate {
    ControllerTemplate::OneFifth {
        update_strength: DEFAULT_UPDATE_STRENGTH,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_schedules() {
        assert_eq!(
            "7log".parse::<LambdaSchedule>().unwrap(),
            LambdaSchedule::Log { factor: 7.0 }
        );
        assert_eq!(
            "log".parse::<LambdaSchedule>().unwrap(),
            LambdaSchedule::Log { factor: 1.0 }
        );
        assert_eq!(
            "2*sqrtlog".parse::<LambdaSchedule>().unwrap(),
            LambdaSchedule::SqrtLog { factor: 2.0 }
        );
        assert_eq!(
            "3.5".parse::<LambdaSchedule>().unwrap(),
            LambdaSchedule::Fixed(3.5)
        );
        assert!("xlog".parse::<LambdaSchedule>().is_err());

        let l = LambdaSchedule::Log { factor: 7.0 };
        assert!((l.at(100, LogBase::Natural) - 7.0 * 100f64.ln()).abs() < 1e-12);
        assert!((l.at(128, LogBase::Base(2.0)) - 49.0).abs() < 1e-9);
        assert_eq!(LambdaSchedule::Fixed(0.2).at(10, LogBase::Natural), 1.0);
    }

    #[test]
    fn log_base_parsing() {
        assert_eq!("e".parse::<LogBase>().unwrap(), LogBase::Natural);
        assert_eq!("2".parse::<LogBase>().unwrap(), LogBase::Base(2.0));
        assert!("1".parse::<LogBase>().is_err());
        assert!("two".parse::<LogBase>().is_err());
    }

    #[test]
    fn spec_validation() {
        let mut spec = ExperimentSpec::comparison_protocol(1);
        assert!(spec.validate().is_ok());
        spec.sizes = vec![20, 10];
        assert!(spec.validate().is_err());
        spec.sizes = vec![10];
        spec.runs = 0;
        assert!(spec.validate().is_err());
        spec.runs = 1;
        spec.arms.push(ArmSpec::gsemo("gsemo"));
        assert!(spec.validate().is_err());
        spec.arms.clear();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn comparison_protocol_seeds_are_distinct() {
        let spec = ExperimentSpec::comparison_protocol(2022);
        let mut seen = HashSet::new();
        for arm in &spec.arms {
            for &n in &spec.sizes {
                for r in 0..spec.runs {
                    assert!(seen.insert(derive_seed(spec.base_seed, &arm.name, n, r)));
                }
            }
        }
        assert_eq!(seen.len(), 2 * 14 * 10);
    }

    #[test]
    fn runs_path_sibling() {
        assert_eq!(
            runs_path(Path::new("out/fig1.csv")),
            PathBuf::from("out/fig1.runs.csv")
        );
    }
}
