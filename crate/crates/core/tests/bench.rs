//! Benchmark harness and cross-solver invariants on generated instances.

use std::fs;

use agvroute::baseline::greedy_round_robin;
use agvroute::fact_io::{emit_facts, parse_facts};
use agvroute::genbench::{generate, run_bench, to_csv, GenParams, Solver, CSV_HEADER};
use agvroute::instances::EXAMPLE1_LP;
use agvroute::optimizer::{solve, SolveStatus, SolverConfig};
use agvroute::validate;

#[test]
fn empty_directory_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let rows = run_bench(dir.path(), &SolverConfig::default(), &[Solver::Optimizer]).unwrap();
    assert!(rows.is_empty());
    assert_eq!(to_csv(&rows), format!("{CSV_HEADER}\n"));
}

#[test]
fn reference_rows() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("example1.lp"), EXAMPLE1_LP).unwrap();
    let rows = run_bench(
        dir.path(),
        &SolverConfig::default(),
        &[Solver::Optimizer, Solver::Baseline],
    )
    .unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(
        (rows[0].solver.as_str(), rows[0].status.as_str()),
        ("baseline", "deadlock")
    );
    let opt = &rows[1];
    assert_eq!(
        (opt.solver.as_str(), opt.status.as_str()),
        ("optimizer", "optimal")
    );
    assert_eq!(
        (opt.ms, opt.rl, opt.cn, opt.on),
        (Some(55), Some(104), Some(3), Some(14))
    );
    assert!(opt.proven_optimal);
}

#[test]
fn unparsable_instance_is_an_error_row() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("broken.lp"),
        "node(v(1)).\nedge(v(1),v(9),0).",
    )
    .unwrap();
    fs::write(dir.path().join("example1.lp"), EXAMPLE1_LP).unwrap();
    let rows = run_bench(dir.path(), &SolverConfig::default(), &[Solver::Optimizer]).unwrap();
    assert_eq!(rows[0].instance, "broken");
    assert_eq!(rows[0].status, "error");
    assert_eq!(rows[1].status, "optimal");
}

#[test]
fn optimizer_and_oracle_rows_agree() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..20 {
        let s = generate(&GenParams::small(seed)).unwrap();
        fs::write(
            dir.path().join(format!("small{seed:02}.lp")),
            emit_facts(&s),
        )
        .unwrap();
    }
    let rows = run_bench(
        dir.path(),
        &SolverConfig::default(),
        &[Solver::Optimizer, Solver::Oracle],
    )
    .unwrap();
    assert_eq!(rows.len(), 40);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].instance, pair[1].instance);
        assert_eq!(
            (pair[0].solver.as_str(), pair[1].solver.as_str()),
            ("optimizer", "oracle")
        );
        assert_eq!(
            (pair[0].ms, pair[0].rl, pair[0].cn, pair[0].on),
            (pair[1].ms, pair[1].rl, pair[1].cn, pair[1].on),
            "{}",
            pair[0].instance
        );
    }
}

#[test]
fn generated_instances_round_trip_and_solutions_validate() {
    let mut greedy_successes = 0;
    for seed in 0..30 {
        let s = generate(&GenParams::small(seed)).unwrap();
        assert_eq!(parse_facts(&emit_facts(&s)).unwrap(), s);
        let out = solve(&s, &SolverConfig::default());
        if let Some(sol) = &out.solution {
            assert!(validate(&s, sol).feasible);
        }
        if let Ok(sol) = greedy_round_robin(&s) {
            let greedy = validate(&s, &sol)
                .objectives
                .expect("baseline output validates");
            assert_eq!(out.status, SolveStatus::Optimal);
            assert!(out.objectives.unwrap() <= greedy, "seed {seed}");
            greedy_successes += 1;
        }
    }
    assert!(greedy_successes > 0);
}

#[test]
fn full_cycle_baseline_fails_where_optimizer_succeeds() {
    for seed in 1..4 {
        let s = generate(&GenParams::full_cycle(seed)).unwrap();
        assert!(greedy_round_robin(&s).is_err(), "seed {seed}");
        let cfg = SolverConfig {
            budget: Some(std::time::Duration::from_secs(20)),
            ..SolverConfig::default()
        };
        let sol = solve(&s, &cfg).solution.expect("optimizer solution");
        assert!(validate(&s, &sol).feasible);
    }
}
