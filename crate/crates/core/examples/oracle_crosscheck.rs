//! Compares the branch-and-bound optimum with exhaustive enumeration on
//! small generated instances.
//!
//! Usage: cargo run --release --example oracle_crosscheck -- [count]

use std::time::Instant;

use agvroute::genbench::{generate, GenParams};
use agvroute::optimizer::{solve, SolverConfig};
use agvroute::oracle::{best_by_enumeration, Canonicalization};

fn main() {
    let count: u64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(20);
    let mut agree = 0;
    for seed in 0..count {
        let s = generate(&GenParams::small(seed)).expect("generator parameters");
        let t0 = Instant::now();
        let oracle = best_by_enumeration(&s, Canonicalization::default());
        let t1 = Instant::now();
        let bb = solve(&s, &SolverConfig::default());
        let t2 = Instant::now();
        let a = oracle.as_ref().ok().map(|o| o.objectives);
        let same = a == bb.objectives;
        agree += u64::from(same);
        println!(
            "seed {seed:>3} horizon {:>3} oracle {:<22} ({:>6} feasible, {:>5} ms) optimizer {:<22} ({:>4} ms) {}",
            s.horizon(),
            a.map_or("infeasible".into(), |v| v.to_string()),
            oracle.as_ref().map_or(0, |o| o.feasible_count),
            (t1 - t0).as_millis(),
            bb.objectives.map_or("infeasible".into(), |v| v.to_string()),
            (t2 - t1).as_millis(),
            if same { "ok" } else { "MISMATCH" }
        );
    }
    println!("{agree}/{count} agree");
}
