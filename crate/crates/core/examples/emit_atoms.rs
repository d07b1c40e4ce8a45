//! Prints the assignment, order, position and move atoms of the reference
//! solution.
//!
//! Usage: cargo run --example emit_atoms

use agvroute::fact_io::emit_atoms;
use agvroute::instances::{example1, example1_optimal};

fn main() {
    let atoms =
        emit_atoms(&example1(), &example1_optimal()).expect("reference solution is feasible");
    print!("{atoms}");
}
