//! The three drivers: GSEMO, the single-objective (1+(λ,λ)) GA and the
//! (1+(λ,λ)) GSEMO.
//!
//! Only newly generated bitstrings are charged as evaluations: the initial
//! individual once, then one per GSEMO offspring, `2λ` per GA iteration and
//! `3λ` per (1+(λ,λ)) GSEMO iteration (λ mutants plus `2λ` crossover
//! offspring). Mutants are charged even though they never enter the archive.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitcore::{
    crossover_one, flip_exact, random_bitstring, sample_binomial, BitString, RandomSource,
};
use crate::control::{detect_success, Controller, ControllerMode, ControllerSpec, IterationParams};
use crate::error::{Error, Result};
use crate::objectives::{
    one_max, pareto_front_size, Benchmark, BiObjectiveFunction, ObjectivePair,
};
use crate::pareto::{Individual, ParetoArchive};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Gsemo,
    OpllGa,
    OpllGsemo,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Gsemo => "gsemo",
            Algorithm::OpllGa => "opll-ga",
            Algorithm::OpllGsemo => "opll-gsemo",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "gsemo" => Ok(Algorithm::Gsemo),
            "opll-ga" => Ok(Algorithm::OpllGa),
            "opll-gsemo" => Ok(Algorithm::OpllGsemo),
            _ => Err(Error::config(format!("unknown algorithm `{s}`"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub benchmark: Benchmark,
    pub n: usize,
    /// Required for the (1+(λ,λ)) drivers, ignored by GSEMO.
    pub controller: Option<ControllerSpec>,
    pub seed: u64,
    /// Safety cap. The run stops once the counter reaches it.
    pub budget: u64,
    /// Coverage levels (fitness levels for the GA) whose first-hit evaluation
    /// count is recorded.
    pub milestones: Vec<usize>,
    /// Record the real-valued λ used in every iteration.
    pub record_lambda: bool,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, benchmark: Benchmark, n: usize, seed: u64) -> Self {
        Self {
            algorithm,
            benchmark,
            n,
            controller: None,
            seed,
            budget: DEFAULT_BUDGET,
            milestones: Vec::new(),
            record_lambda: false,
        }
    }

    pub fn gsemo(n: usize, seed: u64) -> Self {
        Self::new(Algorithm::Gsemo, Benchmark::OneMinMax, n, seed)
    }

    pub fn opll_gsemo(n: usize, controller: ControllerSpec, seed: u64) -> Self {
        Self::new(Algorithm::OpllGsemo, Benchmark::OneMinMax, n, seed).with_controller(controller)
    }

    pub fn opll_ga(n: usize, controller: ControllerSpec, seed: u64) -> Self {
        Self::new(Algorithm::OpllGa, Benchmark::OneMax, n, seed).with_controller(controller)
    }

    pub fn with_controller(mut self, controller: ControllerSpec) -> Self {
        self.controller = Some(controller);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_milestones(mut self, milestones: Vec<usize>) -> Self {
        self.milestones = milestones;
        self
    }

    pub fn with_lambda_trace(mut self) -> Self {
        self.record_lambda = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("problem length must be at least 1"));
        }
        if self.budget == 0 {
            return Err(Error::config("evaluation budget must be positive"));
        }
        match self.algorithm {
            Algorithm::Gsemo | Algorithm::OpllGsemo if !self.benchmark.is_bi_objective() => {
                return Err(Error::config(format!(
                    "{} needs a bi-objective benchmark, got {}",
                    self.algorithm, self.benchmark
                )))
            }
            Algorithm::OpllGa if self.benchmark != Benchmark::OneMax => {
                return Err(Error::config(format!(
                    "opll-ga needs a single-objective benchmark, got {}",
                    self.benchmark
                )))
            }
            _ => {}
        }
        if self.algorithm == Algorithm::Gsemo {
            return Ok(());
        }
        let spec = self
            .controller
            .as_ref()
            .ok_or_else(|| Error::config(format!("{} needs a controller", self.algorithm)))?;
        let mode = spec.mode();
        match self.algorithm {
            Algorithm::OpllGsemo if mode == ControllerMode::FitnessDependent => Err(Error::config(
                "the fitness-dependent controller applies to opll-ga only",
            )),
            Algorithm::OpllGa
                if !matches!(
                    mode,
                    ControllerMode::Static | ControllerMode::FitnessDependent
                ) =>
            {
                Err(Error::config(format!(
                    "opll-ga supports the static and fitness-dependent controllers, got {mode}"
                )))
            }
            _ => Controller::new(spec, self.n).map(|_| ()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Covered,
    BudgetExhausted,
}

impl RunStatus {
    pub fn name(&self) -> &'static str {
        match self {
            RunStatus::Covered => "covered",
            RunStatus::BudgetExhausted => "budget_exhausted",
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Milestone {
    pub level: usize,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    /// Evaluations until the stop condition; the optimization time when
    /// `status` is `Covered`.
    pub evaluations: u64,
    pub iterations: u64,
    pub status: RunStatus,
    /// Front points covered (GSEMO family) or best fitness (GA) at the end.
    pub final_level: usize,
    /// Sum over iterations of the integer offspring count λ_t.
    pub lambda_total: u64,
    pub lambda_trajectory: Option<Vec<f64>>,
    pub milestones: Vec<Milestone>,
}

struct MilestoneTracker {
    pending: Vec<usize>,
    hit: Vec<Milestone>,
}

impl MilestoneTracker {
    fn new(levels: &[usize]) -> Self {
        let mut pending = levels.to_vec();
        pending.sort_unstable();
        pending.dedup();
        pending.reverse();
        Self {
            pending,
            hit: Vec::new(),
        }
    }

    fn update(&mut self, level: usize, evaluations: u64) {
        while let Some(&next) = self.pending.last() {
            if next > level {
                break;
            }
            self.pending.pop();
            self.hit.push(Milestone {
                level: next,
                evaluations,
            });
        }
    }
}

/// Index of a maximal element of `values`, ties broken uniformly at random
/// (reservoir sampling over the tied candidates).
fn argmax_random_tie<I>(values: I, rng: &mut RandomSource) -> usize
where
    I: IntoIterator<Item = i64>,
{
    let mut best = 0;
    let mut best_value = i64::MIN;
    let mut ties = 0usize;
    for (i, v) in values.into_iter().enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
            ties = 1;
        } else if v == best_value {
            ties += 1;
            if rng.below(ties) == 0 {
                best = i;
            }
        }
    }
    best
}

/// Outcome of one (1+(λ,λ)) GSEMO variation step from a fixed parent.
#[derive(Debug, Clone)]
pub struct OpllOffspring {
    pub ell: usize,
    /// Objectives of the f1-maximal and f2-maximal mutants.
    pub plus_winner: ObjectivePair,
    pub minus_winner: ObjectivePair,
    /// λ offspring of `(x, x⁺)` followed by λ offspring of `(x, x⁻)`.
    pub offspring: Vec<Individual>,
}

/// Mutation and crossover phases of one (1+(λ,λ)) GSEMO iteration. Charges
/// `3λ` evaluations to the caller.
pub fn opll_gsemo_variation(
    parent: &Individual,
    params: &IterationParams,
    f: &dyn BiObjectiveFunction,
    rng: &mut RandomSource,
) -> Result<OpllOffspring> {
    let n = parent.genotype.len();
    let ell = sample_binomial(n, params.mutation_rate(n), rng)?;
    let mut mutants = Vec::with_capacity(params.lambda);
    for _ in 0..params.lambda {
        mutants.push(Individual::evaluate(
            flip_exact(&parent.genotype, ell, rng)?,
            f,
        ));
    }
    let plus = argmax_random_tie(mutants.iter().map(|m| m.objectives.f1), rng);
    let minus = argmax_random_tie(mutants.iter().map(|m| m.objectives.f2), rng);

    let mut offspring = Vec::with_capacity(2 * params.lambda);
    for winner in [plus, minus] {
        let diff = parent.genotype.diff_positions(&mutants[winner].genotype)?;
        for _ in 0..params.lambda {
            let y = crossover_one(&parent.genotype, &diff, params.c, rng);
            offspring.push(Individual::evaluate(y, f));
        }
    }
    Ok(OpllOffspring {
        ell,
        plus_winner: mutants[plus].objectives,
        minus_winner: mutants[minus].objectives,
        offspring,
    })
}

/// Standard bit mutation with rate `1/n`, realized as a `Bin(n, 1/n)` flip
/// count followed by a uniform subset of that size. Same distribution as one
/// independent coin per bit.
fn standard_bit_mutation(x: &BitString, rng: &mut RandomSource) -> Result<BitString> {
    let n = x.len();
    let ell = sample_binomial(n, 1.0 / n as f64, rng)?;
    flip_exact(x, ell, rng)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub params: Option<IterationParams>,
    pub coverage_before: usize,
    pub coverage_after: usize,
    pub success: bool,
}

/// A GSEMO or (1+(λ,λ)) GSEMO run that can be advanced one iteration at a
/// time.
pub struct ArchiveRun {
    config: RunConfig,
    f: Box<dyn BiObjectiveFunction>,
    target: usize,
    archive: ParetoArchive,
    controller: Option<Controller>,
    rng: RandomSource,
    evaluations: u64,
    iterations: u64,
    lambda_total: u64,
    trajectory: Option<Vec<f64>>,
    milestones: MilestoneTracker,
}

impl ArchiveRun {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        if config.algorithm == Algorithm::OpllGa {
            return Err(Error::config("opll-ga is not an archive-based driver"));
        }
        let f = config.benchmark.bi_objective(config.n)?;
        let target = pareto_front_size(f.as_ref())?;
        let controller = match config.algorithm {
            Algorithm::OpllGsemo => Some(Controller::new(
                config.controller.as_ref().expect("validated"),
                config.n,
            )?),
            _ => None,
        };
        let base = RandomSource::new(config.seed);
        let mut init_rng = base.derive("init");
        let rng = base.derive("search");

        let mut archive = ParetoArchive::for_function(f.as_ref());
        let x = random_bitstring(config.n, &mut init_rng)?;
        archive.insert(Individual::evaluate(x, f.as_ref()))?;

        let mut milestones = MilestoneTracker::new(&config.milestones);
        milestones.update(archive.coverage(), 1);
        let trajectory = config.record_lambda.then(Vec::new);
        Ok(Self {
            config,
            f,
            target,
            archive,
            controller,
            rng,
            evaluations: 1,
            iterations: 0,
            lambda_total: 0,
            trajectory,
            milestones,
        })
    }

    /// Start from a caller-supplied archive instead of a random individual.
    /// The counter starts at zero evaluations.
    pub fn from_archive(config: RunConfig, archive: ParetoArchive) -> Result<Self> {
        let mut run = Self::new(config)?;
        if archive.is_empty() || archive.n() != run.config.n {
            return Err(Error::config(
                "seed archive must be non-empty with matching length",
            ));
        }
        run.archive = archive;
        run.evaluations = 0;
        run.milestones = MilestoneTracker::new(&run.config.milestones);
        run.milestones.update(run.archive.coverage(), 0);
        Ok(run)
    }

    pub fn archive(&self) -> &ParetoArchive {
        &self.archive
    }

    pub fn controller(&self) -> Option<&Controller> {
        self.controller.as_ref()
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn is_covered(&self) -> bool {
        self.archive.coverage() >= self.target
    }

    pub fn is_done(&self) -> bool {
        self.is_covered() || self.evaluations >= self.config.budget
    }

    pub fn step(&mut self) -> Result<StepReport> {
        let before = self.archive.coverage();
        let params = match &self.controller {
            Some(ctl) => Some(ctl.params_for_archive(&self.archive)?),
            None => None,
        };
        let parent = self.archive.select_uniform(&mut self.rng)?.clone();
        match &params {
            None => {
                let y = standard_bit_mutation(&parent.genotype, &mut self.rng)?;
                self.evaluations += 1;
                self.archive
                    .insert(Individual::evaluate(y, self.f.as_ref()))?;
            }
            Some(p) => {
                let out = opll_gsemo_variation(&parent, p, self.f.as_ref(), &mut self.rng)?;
                self.evaluations += 3 * p.lambda as u64;
                self.lambda_total += p.lambda as u64;
                if let Some(t) = &mut self.trajectory {
                    t.push(p.k);
                }
                for y in out.offspring {
                    self.archive.insert(y)?;
                }
            }
        }
        self.iterations += 1;
        let after = self.archive.coverage();
        let success = detect_success(before, after)?;
        if let Some(ctl) = &mut self.controller {
            ctl.observe(success);
        }
        self.milestones.update(after, self.evaluations);
        Ok(StepReport {
            params,
            coverage_before: before,
            coverage_after: after,
            success,
        })
    }

    pub fn run(mut self) -> Result<RunRecord> {
        while !self.is_done() {
            self.step()?;
        }
        Ok(self.finish())
    }

    pub fn finish(self) -> RunRecord {
        let status = if self.is_covered() {
            RunStatus::Covered
        } else {
            RunStatus::BudgetExhausted
        };
        RunRecord {
            seed: self.config.seed,
            evaluations: self.evaluations,
            iterations: self.iterations,
            status,
            final_level: self.archive.coverage(),
            lambda_total: self.lambda_total,
            lambda_trajectory: self.trajectory,
            milestones: self.milestones.hit,
        }
    }
}

/// Single-objective (1+(λ,λ)) GA on OneMax.
pub struct GaRun {
    config: RunConfig,
    controller: Controller,
    x: BitString,
    fx: i64,
    rng: RandomSource,
    evaluations: u64,
    iterations: u64,
    lambda_total: u64,
    trajectory: Option<Vec<f64>>,
    milestones: MilestoneTracker,
}

impl GaRun {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        if config.algorithm != Algorithm::OpllGa {
            return Err(Error::config(format!(
                "{} is not the single-objective GA",
                config.algorithm
            )));
        }
        let controller = Controller::new(config.controller.as_ref().expect("validated"), config.n)?;
        let base = RandomSource::new(config.seed);
        let x = random_bitstring(config.n, &mut base.derive("init"))?;
        Self::with_start(config, controller, x, base.derive("search"))
    }

    /// Start from a given parent instead of a random one.
    pub fn from_parent(config: RunConfig, x: BitString) -> Result<Self> {
        config.validate()?;
        if x.len() != config.n {
            return Err(Error::LengthMismatch {
                expected: config.n,
                found: x.len(),
            });
        }
        let controller = Controller::new(config.controller.as_ref().expect("validated"), config.n)?;
        let rng = RandomSource::new(config.seed).derive("search");
        Self::with_start(config, controller, x, rng)
    }

    fn with_start(
        config: RunConfig,
        controller: Controller,
        x: BitString,
        rng: RandomSource,
    ) -> Result<Self> {
        let fx = one_max(&x);
        let mut milestones = MilestoneTracker::new(&config.milestones);
        milestones.update(fx as usize, 1);
        let trajectory = config.record_lambda.then(Vec::new);
        Ok(Self {
            config,
            controller,
            x,
            fx,
            rng,
            evaluations: 1,
            iterations: 0,
            lambda_total: 0,
            trajectory,
            milestones,
        })
    }

    pub fn parent(&self) -> &BitString {
        &self.x
    }

    pub fn fitness(&self) -> i64 {
        self.fx
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn is_optimal(&self) -> bool {
        self.fx as usize == self.config.n
    }

    pub fn is_done(&self) -> bool {
        self.is_optimal() || self.evaluations >= self.config.budget
    }

    pub fn step(&mut self) -> Result<IterationParams> {
        let n = self.config.n;
        let p = self.controller.params_for_fitness(self.fx as usize)?;
        let ell = sample_binomial(n, p.mutation_rate(n), &mut self.rng)?;

        let mutants = (0..p.lambda)
            .map(|_| flip_exact(&self.x, ell, &mut self.rng))
            .collect::<Result<Vec<_>>>()?;
        let best = argmax_random_tie(mutants.iter().map(one_max), &mut self.rng);
        let diff = self.x.diff_positions(&mutants[best])?;

        let offspring: Vec<BitString> = (0..p.lambda)
            .map(|_| crossover_one(&self.x, &diff, p.c, &mut self.rng))
            .collect();
        let y = argmax_random_tie(offspring.iter().map(one_max), &mut self.rng);
        self.evaluations += 2 * p.lambda as u64;
        self.lambda_total += p.lambda as u64;
        if let Some(t) = &mut self.trajectory {
            t.push(p.k);
        }

        let fy = one_max(&offspring[y]);
        if fy >= self.fx {
            self.x = offspring.into_iter().nth(y).expect("index in range");
            self.fx = fy;
        }
        self.iterations += 1;
        self.milestones.update(self.fx as usize, self.evaluations);
        Ok(p)
    }

    pub fn run(mut self) -> Result<RunRecord> {
        while !self.is_done() {
            self.step()?;
        }
        Ok(self.finish())
    }

    pub fn finish(self) -> RunRecord {
        let status = if self.is_optimal() {
            RunStatus::Covered
        } else {
            RunStatus::BudgetExhausted
        };
        RunRecord {
            seed: self.config.seed,
            evaluations: self.evaluations,
            iterations: self.iterations,
            status,
            final_level: self.fx as usize,
            lambda_total: self.lambda_total,
            lambda_trajectory: self.trajectory,
            milestones: self.milestones.hit,
        }
    }
}

pub fn run_gsemo(config: RunConfig) -> Result<RunRecord> {
    if config.algorithm != Algorithm::Gsemo {
        return Err(Error::config(format!(
            "expected gsemo, got {}",
            config.algorithm
        )));
    }
    ArchiveRun::new(config)?.run()
}

pub fn run_opll_gsemo(config: RunConfig) -> Result<RunRecord> {
    if config.algorithm != Algorithm::OpllGsemo {
        return Err(Error::config(format!(
            "expected opll-gsemo, got {}",
            config.algorithm
        )));
    }
    ArchiveRun::new(config)?.run()
}

pub fn run_opll_ga(config: RunConfig) -> Result<RunRecord> {
    GaRun::new(config)?.run()
}

/// Dispatch on `config.algorithm`.
pub fn run(config: RunConfig) -> Result<RunRecord> {
    match config.algorithm {
        Algorithm::Gsemo | Algorithm::OpllGsemo => ArchiveRun::new(config)?.run(),
        Algorithm::OpllGa => GaRun::new(config)?.run(),
    }
}
