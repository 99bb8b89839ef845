//! Plain key-value experiment files.
//!
//! ```text
//! # comment
//! sizes = 10:140:10        # or a list: 10, 20, 40
//! runs = 10
//! seed = 2022
//! log_base = e
//! budget = 1000000000
//! out = results/fig1.csv
//! arm = gsemo algorithm=gsemo
//! arm = opll algorithm=opll-gsemo controller=static lambda=7log
//! arm = adaptive algorithm=opll-gsemo controller=one-fifth update_strength=1.5
//! ```
//!
//! Arm options: `algorithm`, `benchmark`, `controller`, `lambda`, `k`, `c`,
//! `update_strength` (alias `F`).

use std::path::{Path, PathBuf};

use crate::algorithms::{Algorithm, DEFAULT_BUDGET};
use crate::control::{ControllerMode, DEFAULT_UPDATE_STRENGTH};
use crate::error::{Error, Result};
use crate::harness::experiment::{
    ArmSpec, ControllerTemplate, ExperimentSpec, LambdaSchedule, LogBase,
};
use crate::objectives::Benchmark;

pub fn load_sweep(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_sweep(&text)
}

pub fn parse_sweep(text: &str) -> Result<ExperimentSpec> {
    let mut sizes = None;
    let mut runs = 1;
    let mut base_seed = 0;
    let mut log_base = LogBase::Natural;
    let mut budget = DEFAULT_BUDGET;
    let mut out = None;
    let mut arms = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::config(format!("line {}: {msg}", lineno + 1));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "sizes" => sizes = Some(parse_sizes(value).map_err(|e| err(e.to_string()))?),
            "runs" => runs = parse_num(value).map_err(&err)?,
            "seed" | "base_seed" => base_seed = parse_num(value).map_err(&err)?,
            "log_base" => log_base = value.parse().map_err(|e: Error| err(e.to_string()))?,
            "budget" => budget = parse_num(value).map_err(&err)?,
            "out" => out = Some(PathBuf::from(value)),
            "arm" => arms.push(parse_arm(value).map_err(|e| err(e.to_string()))?),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let spec = ExperimentSpec {
        sizes: sizes.ok_or_else(|| Error::config("missing `sizes`"))?,
        runs,
        arms,
        base_seed,
        log_base,
        budget,
        out,
    };
    spec.validate()?;
    Ok(spec)
}

fn parse_num<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.replace('_', "")
        .parse()
        .map_err(|_| format!("invalid number `{s}`"))
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(Error::config(format!(
                "range must be start:stop:step, got `{s}`"
            )));
        };
        let (start, stop, step): (usize, usize, usize) = (
            parse_num(start).map_err(Error::InvalidConfig)?,
            parse_num(stop).map_err(Error::InvalidConfig)?,
            parse_num(step).map_err(Error::InvalidConfig)?,
        );
        if step == 0 || start == 0 || stop < start {
            return Err(Error::config(format!("invalid size range `{s}`")));
        }
        return Ok((start..=stop).step_by(step).collect());
    }
    s.split(',')
        .map(|p| parse_num(p.trim()).map_err(Error::InvalidConfig))
        .collect()
}

fn parse_arm(s: &str) -> Result<ArmSpec> {
    let mut tokens = s.split_whitespace();
    let name = tokens
        .next()
        .ok_or_else(|| Error::config("arm needs a name"))?
        .to_string();
    let mut algorithm = None;
    let mut benchmark = None;
    let mut controller = None;
    let mut lambda = None;
    let mut k = None;
    let mut c = None;
    let mut update_strength = None;
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::config(format!("arm option must be key=value, got `{tok}`")))?;
        let num = |v: &str| -> Result<f64> { parse_num(v).map_err(Error::InvalidConfig) };
        match key {
            "algorithm" => algorithm = Some(value.parse::<Algorithm>()?),
            "benchmark" => benchmark = Some(value.parse::<Benchmark>()?),
            "controller" => controller = Some(value.parse::<ControllerMode>()?),
            "lambda" => lambda = Some(value.parse::<LambdaSchedule>()?),
            "k" => k = Some(num(value)?),
            "c" => c = Some(num(value)?),
            "update_strength" | "F" => update_strength = Some(num(value)?),
            other => return Err(Error::config(format!("unknown arm option `{other}`"))),
        }
    }
    let algorithm =
        algorithm.ok_or_else(|| Error::config(format!("arm `{name}` needs algorithm=")))?;
    let benchmark = benchmark.unwrap_or(match algorithm {
        Algorithm::OpllGa => Benchmark::OneMax,
        _ => Benchmark::OneMinMax,
    });
    let controller = if algorithm == Algorithm::Gsemo {
        None
    } else {
        Some(build_template(
            controller.unwrap_or(ControllerMode::Static),
            lambda,
            k,
            c,
            update_strength,
        )?)
    };
    Ok(ArmSpec {
        name,
        algorithm,
        benchmark,
        controller,
    })
}

/// Assemble a controller template from loose options, as given on the
/// command line or in a sweep file.
pub fn build_template(
    mode: ControllerMode,
    lambda: Option<LambdaSchedule>,
    k: Option<f64>,
    c: Option<f64>,
    update_strength: Option<f64>,
) -> Result<ControllerTemplate> {
    Ok(match mode {
        ControllerMode::Static => ControllerTemplate::Static {
            lambda: lambda.ok_or_else(|| Error::config("the static controller needs lambda"))?,
            k,
            c,
        },
        ControllerMode::FitnessDependent => ControllerTemplate::FitnessDependent,
        ControllerMode::StateDependent => ControllerTemplate::StateDependent,
        ControllerMode::OneFifth => ControllerTemplate::OneFifth {
            update_strength: update_strength.unwrap_or(DEFAULT_UPDATE_STRENGTH),
        },
    })
}
