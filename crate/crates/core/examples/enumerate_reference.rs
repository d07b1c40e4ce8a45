//! Counts the feasible solutions of the bundled scenario under both
//! canonicalizations and reports the optimum and its multiplicity.
//!
//! Usage: cargo run --release --example enumerate_reference

use agvroute::instances::example1;
use agvroute::oracle::{enumerate_feasible, Canonicalization};

fn main() {
    let s = example1();
    for canon in [Canonicalization::default(), Canonicalization::timed_moves()] {
        let summary = enumerate_feasible(&s, canon, None, |_, _| {});
        println!("{canon}");
        println!("  feasible {}", summary.count);
        if let Some((v, n, _)) = &summary.best {
            println!("  optimum {v}, attained by {n}");
        }
    }
}
