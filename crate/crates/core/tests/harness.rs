use moea_lab::harness::experiment::{one_fifth_template, summary_to_csv_string, write_csv};
use moea_lab::harness::{
    derive_seed, parse_sweep, read_runs_csv, read_summary_csv, run_experiment, runs_path,
    sample_stddev, speedup_table, ArmSpec, ControllerTemplate, ExperimentSpec, LambdaSchedule,
    LogBase, RUNS_HEADER, SUMMARY_HEADER,
};

fn small_spec() -> ExperimentSpec {
    ExperimentSpec {
        sizes: vec![8, 16],
        runs: 3,
        arms: vec![
            ArmSpec::gsemo("gsemo"),
            ArmSpec::opll_gsemo(
                "opll",
                ControllerTemplate::Static {
                    lambda: LambdaSchedule::Log { factor: 2.0 },
                    k: None,
                    c: None,
                },
            ),
            ArmSpec::opll_gsemo("adaptive", one_fifth_template()),
        ],
        base_seed: 41,
        log_base: LogBase::Natural,
        budget: 10_000_000,
        out: None,
    }
}

#[test]
fn rows_follow_arm_then_size_order() {
    let result = run_experiment(&small_spec()).unwrap();
    let keys: Vec<(String, usize)> = result.rows.iter().map(|r| (r.arm.clone(), r.n)).collect();
    let expected: Vec<(String, usize)> = ["gsemo", "opll", "adaptive"]
        .iter()
        .flat_map(|a| [8, 16].map(|n| (a.to_string(), n)))
        .collect();
    assert_eq!(keys, expected);
    assert_eq!(result.runs.len(), 18);
    for row in &result.rows {
        let evals: Vec<f64> = result
            .runs
            .iter()
            .filter(|r| r.arm == row.arm && r.n == row.n)
            .map(|r| r.evals as f64)
            .collect();
        assert_eq!(evals.len(), row.runs);
        assert_eq!(row.covered, 3);
        assert!((row.mean_evals - evals.iter().sum::<f64>() / 3.0).abs() < 1e-9);
        assert!((row.stddev_evals - sample_stddev(&evals)).abs() < 1e-9);
        assert_eq!(
            row.min_evals as f64,
            evals.iter().cloned().fold(f64::MAX, f64::min)
        );
        assert_eq!(
            row.max_evals as f64,
            evals.iter().cloned().fold(f64::MIN, f64::max)
        );
    }
}

#[test]
fn run_seeds_are_derived_per_arm_size_and_index() {
    let spec = small_spec();
    let result = run_experiment(&spec).unwrap();
    for r in &result.runs {
        assert_eq!(r.seed, derive_seed(spec.base_seed, &r.arm, r.n, r.run));
    }
    let mut seeds: Vec<u64> = result.runs.iter().map(|r| r.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    assert_eq!(seeds.len(), result.runs.len());
}

#[test]
fn csv_round_trip_and_headers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/out.csv");
    let result = run_experiment(&small_spec()).unwrap();
    write_csv(&path, &result).unwrap();
    let summary = std::fs::read_to_string(&path).unwrap();
    let runs = std::fs::read_to_string(runs_path(&path)).unwrap();
    assert_eq!(summary.lines().next(), Some(SUMMARY_HEADER));
    assert_eq!(runs.lines().next(), Some(RUNS_HEADER));
    assert_eq!(read_summary_csv(&path).unwrap(), result.rows);
    assert_eq!(read_runs_csv(&runs_path(&path)).unwrap(), result.runs);
    assert_eq!(summary, summary_to_csv_string(&result.rows).unwrap());
    assert!(runs.lines().skip(1).all(|l| l.ends_with(",covered")));
}

#[test]
fn experiments_are_reproducible() {
    let a = run_experiment(&small_spec()).unwrap();
    let b = run_experiment(&small_spec()).unwrap();
    assert_eq!(a, b);
    let mut other = small_spec();
    other.base_seed += 1;
    assert_ne!(run_experiment(&other).unwrap().runs, a.runs);
}

#[test]
fn speedups_pair_rows_by_size() {
    let result = run_experiment(&small_spec()).unwrap();
    let table = speedup_table(&result.rows_for("gsemo"), &result.rows_for("opll")).unwrap();
    assert_eq!(table.len(), 2);
    assert!(speedup_table(&result.rows_for("gsemo"), &result.rows_for("opll")[..1]).is_err());
}

#[test]
fn protocol_resolves_lambda_from_log_n() {
    let spec = ExperimentSpec::comparison_protocol(0);
    assert_eq!(spec.sizes, (10..=140).step_by(10).collect::<Vec<_>>());
    let template = spec.arms[1].controller.clone().unwrap();
    match template.resolve(140, LogBase::Natural) {
        moea_lab::ControllerSpec::Static { lambda, .. } => {
            assert!((lambda - 7.0 * 140f64.ln()).abs() < 1e-12)
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn spec_validation() {
    let mut spec = small_spec();
    spec.sizes = vec![16, 8];
    assert!(run_experiment(&spec).is_err());
    let mut spec = small_spec();
    spec.arms.push(ArmSpec::gsemo("gsemo"));
    assert!(run_experiment(&spec).is_err());
    let mut spec = small_spec();
    spec.runs = 0;
    assert!(run_experiment(&spec).is_err());
    let mut spec = small_spec();
    spec.arms = vec![ArmSpec::opll_gsemo(
        "fd",
        ControllerTemplate::FitnessDependent,
    )];
    assert!(run_experiment(&spec).is_err());
}

#[test]
fn sweep_file_drives_an_experiment() {
    let spec = parse_sweep(
        "sizes = 6, 12\nruns = 2\nseed = 5\narm = g algorithm=gsemo\narm = s algorithm=opll-gsemo controller=state-dependent\n",
    )
    .unwrap();
    let result = run_experiment(&spec).unwrap();
    assert_eq!(result.rows.len(), 4);
    assert!(result.rows.iter().all(|r| r.covered == 2));
}
