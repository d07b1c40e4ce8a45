//! Solves a generated instance at factory scale under a time budget and
//! prints every incumbent as it is found.
//!
//! Usage: cargo run --release --example full_cycle -- [seed] [budget_secs]

use std::time::Duration;

use agvroute::genbench::{generate, GenParams};
use agvroute::optimizer::{solve_with_progress, SolverConfig};
use agvroute::validate;

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let secs = args.next().and_then(|a| a.parse().ok()).unwrap_or(60);
    let s = generate(&GenParams::full_cycle(seed)).expect("generator parameters");
    println!(
        "{} nodes, {} edges, {} tasks, {} subtasks, {} vehicles, horizon {}",
        s.nodes().len(),
        s.edges().len(),
        s.tasks().len(),
        s.total_subtasks(),
        s.vehicles().len(),
        s.horizon()
    );
    let cfg = SolverConfig {
        budget: Some(Duration::from_secs(secs)),
        ..SolverConfig::default()
    };
    let out = solve_with_progress(&s, &cfg, &|r| {
        println!(
            "{:>7} ms {:>10} nodes  {}",
            r.elapsed_ms, r.nodes_expanded, r.objectives
        );
    });
    println!("status {}", out.status.as_str());
    if let Some(sol) = &out.solution {
        println!("validated feasible: {}", validate(&s, sol).feasible);
    }
    println!("nodes expanded {}", out.stats.nodes_expanded);
}
