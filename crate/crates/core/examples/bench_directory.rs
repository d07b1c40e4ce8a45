//! Writes a handful of generated instances plus the reference scenario to a
//! temporary directory and benchmarks all three solvers on them.
//!
//! Usage: cargo run --release --example bench_directory

use agvroute::fact_io::emit_facts;
use agvroute::genbench::{generate, run_bench, to_csv, GenParams, Solver};
use agvroute::instances::EXAMPLE1_LP;
use agvroute::optimizer::SolverConfig;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join(format!("agvroute-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("example1.lp"), EXAMPLE1_LP)?;
    for seed in 0..5 {
        let s = generate(&GenParams::small(seed)).expect("generator parameters");
        std::fs::write(dir.join(format!("small{seed:02}.lp")), emit_facts(&s))?;
    }
    let rows = run_bench(
        &dir,
        &SolverConfig::default(),
        &[Solver::Optimizer, Solver::Baseline, Solver::Oracle],
    )?;
    print!("{}", to_csv(&rows));
    std::fs::remove_dir_all(&dir)
}
