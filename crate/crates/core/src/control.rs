//! Parameter control for the (1+(λ,λ)) operators.
//!
//! Every controller ends in an [`IterationParams`]: the integer offspring
//! count `lambda`, the mutation strength `k` (flip count is drawn from
//! `Bin(n, k/n)`) and the crossover bias `c`. The dynamic controllers follow
//! the standard setting `k = λ`, `c = 1/λ` on the real-valued `λ`, and round
//! only the offspring count.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::pareto::ParetoArchive;

pub const DEFAULT_UPDATE_STRENGTH: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationParams {
    pub lambda: usize,
    pub k: f64,
    pub c: f64,
}

impl IterationParams {
    /// Mutation rate `k / n`, capped at 1.
    pub fn mutation_rate(&self, n: usize) -> f64 {
        (self.k / n as f64).min(1.0)
    }
}

/// Round half up, never below 1.
pub fn round_lambda(lambda_real: f64) -> usize {
    ((lambda_real + 0.5).floor() as usize).max(1)
}

/// Constant parameters. `c` defaults to `1/k`.
pub fn static_params(k: f64, lambda: usize, c: Option<f64>) -> Result<IterationParams> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::config(format!(
            "mutation strength k must be >= 1, got {k}"
        )));
    }
    if lambda < 1 {
        return Err(Error::config("lambda must be >= 1"));
    }
    let c = c.unwrap_or(1.0 / k);
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::config(format!(
            "crossover bias c must be in (0, 1], got {c}"
        )));
    }
    Ok(IterationParams { lambda, k, c })
}

/// Standard-setting parameters for a real-valued `λ`.
pub fn realize_params(lambda_real: f64) -> Result<IterationParams> {
    if !(lambda_real >= 1.0) || !lambda_real.is_finite() {
        return Err(Error::config(format!(
            "lambda must be >= 1, got {lambda_real}"
        )));
    }
    Ok(IterationParams {
        lambda: round_lambda(lambda_real),
        k: lambda_real,
        c: 1.0 / lambda_real,
    })
}

/// `sqrt(n / (n - fx))`; the optimum itself maps to `n`.
pub fn fitness_dependent_lambda(n: usize, fx: usize) -> Result<f64> {
    if fx > n {
        return Err(Error::config(format!(
            "fitness {fx} exceeds problem length {n}"
        )));
    }
    if fx == n {
        return Ok(n as f64);
    }
    Ok((n as f64 / (n - fx) as f64).sqrt())
}

/// `sqrt(n / (n - m))` with `m` the smaller of the available gap values.
pub fn state_dependent_lambda(n: usize, o1: Option<i64>, o2: Option<i64>) -> Result<f64> {
    let m = match (o1, o2) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            return Err(Error::config(
                "both gap statistics are empty; the front is already covered",
            ))
        }
    };
    if m < 0 || m >= n as i64 {
        return Err(Error::config(format!(
            "gap value {m} outside [0, {}]",
            n - 1
        )));
    }
    Ok((n as f64 / (n as i64 - m) as f64).sqrt())
}

/// Strict coverage increase. A decrease means the archive lost a front point,
/// which the insertion rule forbids.
pub fn detect_success(coverage_before: usize, coverage_after: usize) -> Result<bool> {
    if coverage_after < coverage_before {
        return Err(Error::Internal(format!(
            "coverage dropped from {coverage_before} to {coverage_after}"
        )));
    }
    Ok(coverage_after > coverage_before)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControllerMode {
    Static,
    FitnessDependent,
    StateDependent,
    OneFifth,
}

impl ControllerMode {
    pub fn name(&self) -> &'static str {
        match self {
            ControllerMode::Static => "static",
            ControllerMode::FitnessDependent => "fitness-dependent",
            ControllerMode::StateDependent => "state-dependent",
            ControllerMode::OneFifth => "one-fifth",
        }
    }
}

impl FromStr for ControllerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "static" => Ok(ControllerMode::Static),
            "fitness-dependent" => Ok(ControllerMode::FitnessDependent),
            "state-dependent" => Ok(ControllerMode::StateDependent),
            "one-fifth" => Ok(ControllerMode::OneFifth),
            _ => Err(Error::config(format!("unknown controller `{s}`"))),
        }
    }
}

impl fmt::Display for ControllerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Real-valued λ with its clamp interval and update strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerState {
    pub lambda_real: f64,
    pub update_strength: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub mode: ControllerMode,
}

impl ControllerState {
    /// One-fifth state for length `n`, starting at `λ = 1`.
    pub fn one_fifth(n: usize, update_strength: f64) -> Result<Self> {
        if !(update_strength > 1.0) || !update_strength.is_finite() {
            return Err(Error::config(format!(
                "update strength F must be > 1, got {update_strength}"
            )));
        }
        if n == 0 {
            return Err(Error::config("problem length must be at least 1"));
        }
        Ok(Self {
            lambda_real: 1.0,
            update_strength,
            lambda_min: 1.0,
            lambda_max: n as f64,
            mode: ControllerMode::OneFifth,
        })
    }
}

/// Success: `λ / F`, floored at 1. Failure: `λ · F^(1/(5n-1))`, capped at `n`.
pub fn one_fifth_update(s: &ControllerState, success: bool, n: usize) -> ControllerState {
    debug_assert_eq!(s.mode, ControllerMode::OneFifth);
    let lambda_real = if success {
        (s.lambda_real / s.update_strength).max(s.lambda_min)
    } else {
        let exponent = 1.0 / (5 * n - 1) as f64;
        (s.lambda_real * s.update_strength.powf(exponent)).min(s.lambda_max)
    };
    ControllerState { lambda_real, ..*s }
}

/// How λ is chosen. Parsed from the CLI and sweep files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ControllerSpec {
    /// Fixed parameters. `k` defaults to `lambda`, `c` to `1/k`; the
    /// offspring count is `lambda` rounded half up.
    Static {
        lambda: f64,
        k: Option<f64>,
        c: Option<f64>,
    },
    FitnessDependent,
    StateDependent,
    OneFifth {
        update_strength: f64,
    },
}

impl ControllerSpec {
    pub fn mode(&self) -> ControllerMode {
        match self {
            ControllerSpec::Static { .. } => ControllerMode::Static,
            ControllerSpec::FitnessDependent => ControllerMode::FitnessDependent,
            ControllerSpec::StateDependent => ControllerMode::StateDependent,
            ControllerSpec::OneFifth { .. } => ControllerMode::OneFifth,
        }
    }

    pub fn static_lambda(lambda: f64) -> Self {
        ControllerSpec::Static {
            lambda,
            k: None,
            c: None,
        }
    }
}

/// Per-run controller. Produces the parameters for each iteration and absorbs
/// success feedback.
#[derive(Debug, Clone)]
pub struct Controller {
    n: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Static(IterationParams),
    FitnessDependent,
    StateDependent,
    OneFifth(ControllerState),
}

impl Controller {
    pub fn new(spec: &ControllerSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("problem length must be at least 1"));
        }
        let kind = match *spec {
            ControllerSpec::Static { lambda, k, c } => {
                if !(lambda >= 1.0) || !lambda.is_finite() {
                    return Err(Error::config(format!("lambda must be >= 1, got {lambda}")));
                }
                let k = k.unwrap_or(lambda);
                Kind::Static(static_params(k, round_lambda(lambda), c)?)
            }
            ControllerSpec::FitnessDependent => Kind::FitnessDependent,
            ControllerSpec::StateDependent => Kind::StateDependent,
            ControllerSpec::OneFifth { update_strength } => {
                Kind::OneFifth(ControllerState::one_fifth(n, update_strength)?)
            }
        };
        Ok(Self { n, kind })
    }

    pub fn mode(&self) -> ControllerMode {
        match self.kind {
            Kind::Static(_) => ControllerMode::Static,
            Kind::FitnessDependent => ControllerMode::FitnessDependent,
            Kind::StateDependent => ControllerMode::StateDependent,
            Kind::OneFifth(_) => ControllerMode::OneFifth,
        }
    }

    pub fn state(&self) -> Option<&ControllerState> {
        match &self.kind {
            Kind::OneFifth(s) => Some(s),
            _ => None,
        }
    }

    /// Parameters for the next iteration of an archive-based driver.
    pub fn params_for_archive(&self, archive: &ParetoArchive) -> Result<IterationParams> {
        match &self.kind {
            Kind::Static(p) => Ok(*p),
            Kind::StateDependent => {
                let o1 = archive.gap_statistic(Objective::First)?;
                let o2 = archive.gap_statistic(Objective::Second)?;
                if o1.is_none() && o2.is_none() {
                    return Err(Error::Internal(
                        "no gap on either objective while coverage is incomplete".into(),
                    ));
                }
                realize_params(state_dependent_lambda(self.n, o1, o2)?)
            }
            Kind::OneFifth(s) => realize_params(s.lambda_real),
            Kind::FitnessDependent => Err(Error::config(
                "the fitness-dependent controller applies to the single-objective GA only",
            )),
        }
    }

    /// Parameters for the next iteration of the single-objective GA at
    /// parent fitness `fx`.
    pub fn params_for_fitness(&self, fx: usize) -> Result<IterationParams> {
        match &self.kind {
            Kind::Static(p) => Ok(*p),
            Kind::FitnessDependent => realize_params(fitness_dependent_lambda(self.n, fx)?),
            _ => Err(Error::config(format!(
                "the {} controller is not available for the single-objective GA",
                self.mode()
            ))),
        }
    }

    /// Feed back whether the last iteration succeeded. Only the one-fifth
    /// controller reacts.
    pub fn observe(&mut self, success: bool) {
        if let Kind::OneFifth(s) = &mut self.kind {
            *s = one_fifth_update(s, success, self.n);
        }
    }

    /// Current real-valued λ where one exists independently of the archive.
    pub fn lambda_real(&self) -> Option<f64> {
        match &self.kind {
            Kind::Static(p) => Some(p.k),
            Kind::OneFifth(s) => Some(s.lambda_real),
            _ => None,
        }
    }
}
