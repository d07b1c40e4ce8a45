//! Bundled instances.

use crate::model::{NodeId, RouteElement, Scenario, ScenarioParts, Solution, TaskId, VehicleId};

/// Fact file of the two-vehicle, two-task reference scenario.
pub const EXAMPLE1_LP: &str = include_str!("../data/example1.lp");

/// Declarations of the reference scenario: seven nodes, ten connections of
/// duration 4, halts {2,4,5,6} of duration 3, park 7 of duration 2, tasks
/// ⟨5,4,2⟩ and ⟨6,4,2⟩ due at 60, vehicles starting at 1 and 2.
pub fn example1_parts() -> ScenarioParts {
    let mut parts = Scenario::builder().node_range(1..=7);
    for (a, b) in [
        (1, 2),
        (1, 7),
        (2, 3),
        (3, 4),
        (4, 5),
        (4, 7),
        (5, 6),
        (6, 1),
        (7, 1),
        (7, 4),
    ] {
        parts = parts.edge(a, b, 4);
    }
    parts
        .halt(2, 3)
        .halt(4, 3)
        .halt(5, 3)
        .halt(6, 3)
        .park(7, 2)
        .task(1, 60, &[5, 4, 2])
        .task(2, 60, &[6, 4, 2])
        .vehicle(1, 1)
        .vehicle(2, 2)
}

pub fn example1() -> Scenario {
    example1_parts()
        .build()
        .expect("reference scenario is valid")
}

/// Parses a compact route notation: `"1-7"` is a move, `"7"` a stop.
pub fn route(text: &str) -> Vec<RouteElement> {
    text.split_whitespace()
        .map(|tok| match tok.split_once('-') {
            Some((a, b)) => RouteElement::Move(
                NodeId(a.parse().expect("node id")),
                NodeId(b.parse().expect("node id")),
            ),
            None => RouteElement::Stop(NodeId(tok.parse().expect("node id"))),
        })
        .collect()
}

/// The optimal solution of the reference scenario (objectives 55, 104, 3, 14).
pub fn example1_optimal() -> Solution {
    let s = example1();
    Solution::from_parts(
        &s,
        [
            (VehicleId(1), vec![TaskId(1)]),
            (VehicleId(2), vec![TaskId(2)]),
        ],
        [
            (
                VehicleId(1),
                route("1-7 7 7-4 4-5 5 5-6 6-1 1-2 2-3 3-4 4 4-7 7-1 1-2 2"),
            ),
            (
                VehicleId(2),
                route("2-3 3-4 4-5 5-6 6 6-1 1-7 7-4 4 4-7 7-1 1-2 2"),
            ),
        ],
    )
}
