//! Prints a generated scenario as a fact file.
//!
//! Usage: cargo run --example generate_instance -- [seed] [small]

use agvroute::fact_io::emit_facts;
use agvroute::genbench::{generate, GenParams};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let p = match args.next().as_deref() {
        Some("small") => GenParams::small(seed),
        _ => GenParams::full_cycle(seed),
    };
    let s = generate(&p).expect("generator parameters");
    print!("{}", emit_facts(&s));
}
