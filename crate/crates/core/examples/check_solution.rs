//! Validates the reference solution and a few broken variants of it and
//! prints the conflicts each one trips.
//!
//! Usage: cargo run --example check_solution

use agvroute::instances::{example1, example1_optimal, route};
use agvroute::{validate, Solution, VehicleId};

fn main() {
    let s = example1();
    let opt = example1_optimal();
    let c1 = "1-7 7 7-4 4-5 5 5-6 6-1 1-2 2-3 3-4 4 4-7 7-1 1-2 2";
    let variant = |r: &str| -> Solution {
        let mut sol = opt.clone();
        sol.routes.insert(VehicleId(1), route(r));
        sol
    };
    let cases = [
        ("reference", opt.clone()),
        ("gap in route", variant(&c1.replace("4-5 5 ", "5 "))),
        (
            "halt at node 5 removed",
            variant(&c1.replacen("5 5-6", "5-6", 1)),
        ),
        (
            "three extra park stops",
            variant(&c1.replacen("1-7 7 ", "1-7 7 7 7 7 ", 1)),
        ),
        (
            "park stop removed",
            variant(&c1.replacen("1-7 7 ", "1-7 ", 1)),
        ),
    ];
    for (name, sol) in cases {
        let report = validate(&s, &sol);
        match report.objectives {
            Some(v) => println!("{name}: feasible {v}"),
            None => {
                println!("{name}: infeasible");
                for c in &report.conflicts {
                    println!("  {:?}: {c}", c.class());
                }
            }
        }
    }
}
