//! Runs the greedy round-robin scheduler on the bundled scenario, where it
//! deadlocks, and on a generated one.
//!
//! Usage: cargo run --example baseline_deadlock -- [seed]

use agvroute::baseline::greedy_round_robin;
use agvroute::genbench::{generate, GenParams};
use agvroute::instances::example1;
use agvroute::validate;

fn main() {
    match greedy_round_robin(&example1()) {
        Ok(_) => println!("reference: unexpectedly succeeded"),
        Err(f) => println!("reference: {f}"),
    }
    let seed = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);
    let s = generate(&GenParams::small(seed)).expect("generator parameters");
    match greedy_round_robin(&s) {
        Ok(sol) => println!("small seed {seed}: {:?}", validate(&s, &sol).objectives),
        Err(f) => println!("small seed {seed}: {f}"),
    }
}
