//! Closed-form success-probability lower bounds for one (1+(λ,λ)) GSEMO
//! iteration on OneMinMax, and a Monte Carlo check that the simulated
//! operator clears them.
//!
//! Setting: the archive holds `x` with `f(x) = (n-d, d)` but nothing at
//! `(n-d+1, d-1)`. The mutation phase succeeds when `x` is the parent and the
//! f1-winner among the λ mutants has `f1 > n-d-ℓ`, i.e. at least one of its
//! `ℓ` flips turned a zero into a one. The crossover phase succeeds when some
//! offspring of `(x, x⁺)` has `f1 = n-d+1`.

use std::fmt;

use crate::algorithms::opll_gsemo_variation;
use crate::bitcore::{BitString, RandomSource};
use crate::control::IterationParams;
use crate::error::{Error, Result};
use crate::objectives::{ObjectivePair, OneMinMax};
use crate::pareto::{Individual, ParetoArchive};

pub const MIN_TRIALS: usize = 10_000;

/// `(1/n) (1 - (1 - d/n)^(λℓ))`: mutation phase, including the `1/n` chance
/// of picking `x` from an archive of at most `n + 1` members.
pub fn mutation_phase_bound(n: usize, d: usize, lambda: usize, ell: usize) -> Result<f64> {
    check_nd(n, d)?;
    if d == 0 {
        return Err(Error::config("d = 0 leaves no improving flip"));
    }
    if lambda == 0 {
        return Err(Error::config("lambda must be >= 1"));
    }
    Ok(mutation_success_given_parent(n, d, lambda, ell) / n as f64)
}

/// `1 - (1 - d/n)^(λℓ)`, the mutation-phase bound once `x` is the parent.
fn mutation_success_given_parent(n: usize, d: usize, lambda: usize, ell: usize) -> f64 {
    let miss = 1.0 - d as f64 / n as f64;
    1.0 - pow_u(miss, lambda as u64 * ell as u64)
}

/// `1 - (1 - c (1-c)^(ℓ-1))^λ`.
pub fn crossover_phase_bound(c: f64, ell: usize, lambda: usize) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::config(format!(
            "crossover bias must be in (0, 1], got {c}"
        )));
    }
    if ell == 0 {
        return Err(Error::config("ell = 0 leaves no differing bit to inherit"));
    }
    if lambda == 0 {
        return Err(Error::config("lambda must be >= 1"));
    }
    let single = c * pow_u(1.0 - c, ell as u64 - 1);
    Ok(1.0 - pow_u(1.0 - single, lambda as u64))
}

/// `(C/n) (1 - (d/n)^(λk/2)) (1 - e^(-λ/(8k)))`, the per-iteration bound for
/// covering the missing neighbour.
pub fn step_probability_bound(
    n: usize,
    d: usize,
    lambda: f64,
    k: f64,
    constant: f64,
) -> Result<f64> {
    check_nd(n, d)?;
    if !(lambda >= 2.0 && k >= 2.0) {
        return Err(Error::config(format!(
            "the step bound needs lambda, k >= 2, got lambda = {lambda}, k = {k}"
        )));
    }
    if !(constant > 0.0) {
        return Err(Error::config("the constant C must be positive"));
    }
    let ratio = d as f64 / n as f64;
    let mutation = 1.0 - ratio.powf(lambda * k / 2.0);
    let crossover = 1.0 - (-lambda / (8.0 * k)).exp();
    Ok(constant / n as f64 * mutation * crossover)
}

/// `1 / p⁺`, the expected waiting time (in iterations) implied by the step
/// bound.
pub fn expected_wait_bound(n: usize, d: usize, lambda: f64, k: f64, constant: f64) -> Result<f64> {
    Ok(1.0 / step_probability_bound(n, d, lambda, k, constant)?)
}

fn check_nd(n: usize, d: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::config("n must be >= 1"));
    }
    if d > n {
        return Err(Error::config(format!("d = {d} exceeds n = {n}")));
    }
    Ok(())
}

fn pow_u(base: f64, exp: u64) -> f64 {
    if exp <= i32::MAX as u64 {
        base.powi(exp as i32)
    } else {
        base.powf(exp as f64)
    }
}

/// `Pr[Bin(n, p) = i]` for `i = 0..=n`, computed in log space.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    if p >= 1.0 {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        return v;
    }
    let log_q = (1.0 - p).ln();
    let log_odds = p.ln() - log_q;
    let mut out = Vec::with_capacity(n + 1);
    let mut log_term = n as f64 * log_q;
    for i in 0..=n {
        out.push(log_term.exp());
        if i < n {
            log_term += ((n - i) as f64 / (i + 1) as f64).ln() + log_odds;
        }
    }
    out
}

/// Lower bound with its Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub bound: f64,
    pub estimate: f64,
    pub trials: usize,
    pub pass: bool,
}

impl BoundCheck {
    /// Pass iff `estimate >= bound - 3 sqrt(bound (1 - bound) / trials)`.
    /// With no trials the check is vacuous.
    pub fn new(bound: f64, successes: usize, trials: usize) -> Self {
        if trials == 0 {
            return Self {
                bound,
                estimate: f64::NAN,
                trials,
                pass: true,
            };
        }
        let estimate = successes as f64 / trials as f64;
        let pass = estimate >= bound - one_sided_slack(bound, trials);
        Self {
            bound,
            estimate,
            trials,
            pass,
        }
    }
}

pub fn one_sided_slack(bound: f64, trials: usize) -> f64 {
    let b = bound.clamp(0.0, 1.0);
    3.0 * (b * (1.0 - b) / trials as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub d: usize,
    pub lambda: usize,
    pub k: f64,
    pub c: f64,
    pub trials: usize,
    /// Probability of picking `x` as parent in the fixture.
    pub selection_probability: f64,
    /// Mutation-phase success vs its bound, marginalized over `ℓ`.
    pub mutation: BoundCheck,
    /// Crossover-phase success among trials whose mutation phase succeeded,
    /// against the average of the per-`ℓ` bound over those same trials.
    pub crossover: BoundCheck,
    /// Target covered after the iteration vs the product of both bounds,
    /// marginalized over `ℓ`.
    pub combined: BoundCheck,
    /// Step bound with `C = 1`, when `λ, k >= 2`.
    pub step_bound_unit: Option<f64>,
    /// Largest `C` for which the step bound stays below the estimate.
    pub largest_constant: Option<f64>,
    /// The literal mutation-phase bound with its `1/n` factor, marginalized.
    pub mutation_bound_literal: f64,
    pub pass: bool,
}

impl BoundReport {
    pub fn bound(&self) -> f64 {
        self.combined.bound
    }

    pub fn estimate(&self) -> f64 {
        self.combined.estimate
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |b: bool| if b { "pass" } else { "FAIL" };
        writeln!(
            f,
            "n={} d={} lambda={} k={:.4} c={:.4} trials={}",
            self.n, self.d, self.lambda, self.k, self.c, self.trials
        )?;
        writeln!(
            f,
            "  mutation   bound={:.6} estimate={:.6} [{}]",
            self.mutation.bound,
            self.mutation.estimate,
            verdict(self.mutation.pass)
        )?;
        writeln!(
            f,
            "  crossover  bound={:.6} estimate={:.6} over {} trials [{}]",
            self.crossover.bound,
            self.crossover.estimate,
            self.crossover.trials,
            verdict(self.crossover.pass)
        )?;
        writeln!(
            f,
            "  combined   bound={:.6} estimate={:.6} [{}]",
            self.combined.bound,
            self.combined.estimate,
            verdict(self.combined.pass)
        )?;
        match (self.step_bound_unit, self.largest_constant) {
            (Some(b), Some(cmax)) => {
                writeln!(f, "  step       bound(C=1)={b:.6} largest C={cmax:.4}")?
            }
            _ => writeln!(f, "  step       not applicable (needs lambda, k >= 2)")?,
        }
        write!(f, "  verdict: {}", verdict(self.pass))
    }
}

/// Archive holding only `x = 1^(n-d) 0^d`.
pub fn single_member_fixture(n: usize, d: usize) -> Result<ParetoArchive> {
    check_nd(n, d)?;
    let f = OneMinMax::new(n)?;
    let mut x = BitString::ones(n)?;
    for i in n - d..n {
        x.set(i, false);
    }
    let mut archive = ParetoArchive::for_function(&f);
    archive.insert(Individual::evaluate(x, &f))?;
    Ok(archive)
}

/// Simulate `trials` independent iterations from the single-member fixture.
pub fn validate_step_bounds(
    n: usize,
    d: usize,
    lambda: usize,
    k: f64,
    c: f64,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<BoundReport> {
    let fixture = single_member_fixture(n, d)?;
    validate_step_bounds_on(&fixture, d, lambda, k, c, trials, rng)
}

/// Simulate `trials` independent iterations starting from `fixture`, which
/// must contain a member at `(n-d, d)` and nothing at `(n-d+1, d-1)`.
pub fn validate_step_bounds_on(
    fixture: &ParetoArchive,
    d: usize,
    lambda: usize,
    k: f64,
    c: f64,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<BoundReport> {
    let n = fixture.n();
    check_nd(n, d)?;
    if d == 0 {
        return Err(Error::config("d must be >= 1"));
    }
    if trials < MIN_TRIALS {
        return Err(Error::config(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    if lambda == 0 || !(k > 0.0) || !(c > 0.0 && c <= 1.0) {
        return Err(Error::config("need lambda >= 1, k > 0 and c in (0, 1]"));
    }
    let source = ObjectivePair::new((n - d) as i64, d as i64);
    let target = ObjectivePair::new(source.f1 + 1, source.f2 - 1);
    if !fixture.contains_objectives(&source) {
        return Err(Error::config(format!("fixture has no member at {source}")));
    }
    if fixture.contains_objectives(&target) {
        return Err(Error::config(format!("fixture already covers {target}")));
    }
    let f = OneMinMax::new(n)?;
    let params = IterationParams { lambda, k, c };
    let selection = 1.0 / fixture.len() as f64;

    let mut mutation_hits = 0usize;
    let mut crossover_hits = 0usize;
    let mut crossover_bound_sum = 0.0;
    let mut target_hits = 0usize;
    for _ in 0..trials {
        let parent = fixture.select_uniform(rng)?.clone();
        let out = opll_gsemo_variation(&parent, &params, &f, rng)?;
        let from_x = parent.objectives == source;
        let ell = out.ell;
        if from_x && ell >= 1 && out.plus_winner.f1 > source.f1 - ell as i64 {
            mutation_hits += 1;
            crossover_bound_sum += crossover_phase_bound(c, ell, lambda)?;
            if out.offspring[..lambda]
                .iter()
                .any(|y| y.objectives == target)
            {
                crossover_hits += 1;
            }
        }
        let mut after = fixture.clone();
        for y in out.offspring {
            after.insert(y)?;
        }
        if after.contains_objectives(&target) {
            target_hits += 1;
        }
    }

    let pmf = binomial_pmf(n, params.mutation_rate(n));
    let mut mutation_bound = 0.0;
    let mut combined_bound = 0.0;
    for (ell, &mass) in pmf.iter().enumerate().skip(1) {
        let m = mutation_success_given_parent(n, d, lambda, ell);
        mutation_bound += mass * m;
        combined_bound += mass * m * crossover_phase_bound(c, ell, lambda)?;
    }
    let mutation_bound_literal = mutation_bound / n as f64;
    mutation_bound *= selection;
    combined_bound *= selection;

    let mutation = BoundCheck::new(mutation_bound, mutation_hits, trials);
    let crossover_bound = if mutation_hits > 0 {
        crossover_bound_sum / mutation_hits as f64
    } else {
        0.0
    };
    let crossover = BoundCheck::new(crossover_bound, crossover_hits, mutation_hits);
    let combined = BoundCheck::new(combined_bound, target_hits, trials);

    let (step_bound_unit, largest_constant) = if lambda >= 2 && k >= 2.0 {
        let unit = step_probability_bound(n, d, lambda as f64, k, 1.0)?;
        let cmax = if unit > 0.0 {
            combined.estimate / unit
        } else {
            f64::INFINITY
        };
        (Some(unit), Some(cmax))
    } else {
        (None, None)
    };
    let step_ok = largest_constant.is_none_or(|cmax| cmax > 0.0);
    let pass = mutation.pass && crossover.pass && combined.pass && step_ok;
    Ok(BoundReport {
        n,
        d,
        lambda,
        k,
        c,
        trials,
        selection_probability: selection,
        mutation,
        crossover,
        combined,
        step_bound_unit,
        largest_constant,
        mutation_bound_literal,
        pass,
    })
}
