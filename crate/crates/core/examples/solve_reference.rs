//! Solves the bundled two-vehicle scenario to optimality and prints the
//! solution document.
//!
//! Usage: cargo run --release --example solve_reference

use agvroute::fact_io::{emit_solution, parse_facts, SolutionStatus};
use agvroute::instances::EXAMPLE1_LP;
use agvroute::optimizer::{solve, SolveStatus, SolverConfig};

fn main() {
    let s = parse_facts(EXAMPLE1_LP).expect("bundled scenario parses");
    let out = solve(&s, &SolverConfig::default());
    assert_eq!(out.status, SolveStatus::Optimal);
    let sol = out.solution.expect("optimal solution");
    print!(
        "{}",
        emit_solution(&sol, out.objectives, SolutionStatus::Optimal)
    );
    for r in &out.stats.incumbents {
        eprintln!(
            "incumbent {} after {} nodes",
            r.objectives, r.nodes_expanded
        );
    }
    eprintln!(
        "{} nodes in {} ms",
        out.stats.nodes_expanded, out.stats.elapsed_ms
    );
}
