//! Converts the bundled scenario from facts to JSON and back.
//!
//! Usage: cargo run --example convert_formats

use agvroute::fact_io::{emit_facts, parse_facts, scenario_from_json, scenario_to_json};
use agvroute::instances::EXAMPLE1_LP;

fn main() {
    let s = parse_facts(EXAMPLE1_LP).expect("bundled scenario parses");
    let json = scenario_to_json(&s);
    println!("{json}");
    let back = scenario_from_json(&json).expect("own JSON parses");
    assert_eq!(back, s);
    print!("{}", emit_facts(&back));
}
