//! Experiment orchestration, bound validation, statistics and CSV output.

pub mod bounds;
pub mod experiment;
pub mod stats;
pub mod sweep;

pub use bounds::{
    binomial_pmf, crossover_phase_bound, expected_wait_bound, mutation_phase_bound,
    single_member_fixture, step_probability_bound, validate_step_bounds, validate_step_bounds_on,
    BoundCheck, BoundReport,
};
pub use experiment::{
    derive_seed, read_runs_csv, read_summary_csv, run_experiment, runs_path, ArmSpec,
    ControllerTemplate, ExperimentResult, ExperimentSpec, LambdaSchedule, LogBase, RunRow,
    RUNS_HEADER, SUMMARY_HEADER,
};
pub use stats::{sample_stddev, speedup_table, Speedup, SummaryRow};
pub use sweep::{load_sweep, parse_sweep};
