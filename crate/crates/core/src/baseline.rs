//! Greedy round-robin scheduler with whole-leg node locking.
//!
//! Task `i` in id order goes to vehicle `i mod |C|` in id order. Each vehicle
//! serves its tasks serially. For every subtask it takes the shortest path to
//! the halt node (ties broken by smaller successor id), and before leaving it
//! locks every node of that path. The path nodes stay locked until arrival,
//! after which the vehicle only holds the node it stands on. A vehicle whose
//! path contains a node held by another vehicle waits: on a park node in
//! park-stop quanta, elsewhere until the next lock release. A vehicle that
//! has served all its tasks releases its node, as routes occupy nothing
//! after their last element. The simulation
//! fails when no vehicle can make progress or when a subtask completes after
//! its deadline.
//!
//! This is a reconstruction of a simple fleet-controller default and not a
//! model of any particular implementation's internals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{
    GraphIndex, NodeId, Route, RouteElement, Scenario, Solution, StopKind, TaskId, Time, VehicleId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// Every unfinished vehicle waits for a node that will never be released.
    Deadlock,
    /// A subtask completes after its task deadline, or cannot be reached.
    Deadline,
    /// The schedule succeeded but a vehicle waited somewhere a route cannot
    /// express waiting.
    UnrepresentableWait,
}

impl FailureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FailureKind::Deadlock => "deadlock",
            FailureKind::Deadline => "deadline",
            FailureKind::UnrepresentableWait => "unrepresentable_wait",
        }
    }
}

/// `waiter` needs `node`, which `holder` has locked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WaitEdge {
    pub waiter: VehicleId,
    pub node: NodeId,
    pub holder: VehicleId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub kind: FailureKind,
    pub time: Time,
    /// For a deadlock, a wait cycle if one exists, otherwise all waits.
    pub witness: Vec<WaitEdge>,
    pub detail: String,
}

impl Failure {
    pub fn witness_nodes(&self) -> BTreeSet<NodeId> {
        self.witness.iter().map(|w| w.node).collect()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at time {}: {}",
            self.kind.as_str(),
            self.time,
            self.detail
        )?;
        for w in &self.witness {
            write!(
                f,
                "; vehicle {} waits for node {} held by vehicle {}",
                w.waiter, w.node, w.holder
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    /// Decides again at the given time.
    Busy(Time),
    /// Blocked on a non-park node; retries at every event.
    Blocked,
    Finished,
}

struct Vehicle {
    id: VehicleId,
    at: usize,
    /// Remaining `(task, subtask node)` pairs.
    todo: Vec<(TaskId, usize)>,
    route: Route,
    locks: BTreeSet<usize>,
    release_at: Option<Time>,
    phase: Phase,
    waiting: bool,
}

/// Runs the greedy procedure on `s`.
pub fn greedy_round_robin(s: &Scenario) -> Result<Solution, Failure> {
    let g = GraphIndex::new(s);
    let ids: Vec<VehicleId> = s.vehicles().keys().copied().collect();
    let mut orders: BTreeMap<VehicleId, Vec<TaskId>> = ids.iter().map(|&c| (c, vec![])).collect();
    for (i, &t) in s.tasks().keys().enumerate() {
        orders
            .get_mut(&ids[i % ids.len()])
            .expect("vehicle")
            .push(t);
    }
    let mut fleet: Vec<Vehicle> = ids
        .iter()
        .map(|&c| {
            let at = g.idx(s.vehicles()[&c]);
            let todo = orders[&c]
                .iter()
                .flat_map(|&t| s.tasks()[&t].subtasks.iter().map(move |&v| (t, v)))
                .map(|(t, v)| (t, g.idx(v)))
                .collect();
            Vehicle {
                id: c,
                at,
                todo,
                route: Vec::new(),
                locks: BTreeSet::from([at]),
                release_at: None,
                phase: Phase::Busy(0),
                waiting: false,
            }
        })
        .collect();
    for v in &mut fleet {
        v.todo.reverse();
    }
    let horizon = s.horizon();
    let mut unrepresentable = None;
    let mut now = 0;

    loop {
        if fleet.iter().all(|v| v.phase == Phase::Finished) {
            break;
        }
        let next = fleet
            .iter()
            .flat_map(|v| {
                let busy = match v.phase {
                    Phase::Busy(t) => Some(t),
                    _ => None,
                };
                busy.into_iter().chain(v.release_at)
            })
            .min();
        let Some(t) = next else {
            return Err(deadlock(&fleet, &g, now));
        };
        now = t;
        if t > horizon {
            return Err(Failure {
                kind: FailureKind::Deadline,
                time: t,
                witness: Vec::new(),
                detail: "tasks remain after the last deadline".into(),
            });
        }
        for v in &mut fleet {
            if v.release_at == Some(t) {
                v.locks = BTreeSet::from([v.at]);
                v.release_at = None;
            }
        }
        for i in 0..fleet.len() {
            let ready = match fleet[i].phase {
                Phase::Busy(u) => u == t,
                Phase::Blocked => true,
                Phase::Finished => false,
            };
            if !ready {
                continue;
            }
            let Some(&(task, target)) = fleet[i].todo.last() else {
                fleet[i].phase = Phase::Finished;
                fleet[i].waiting = false;
                fleet[i].locks.clear();
                continue;
            };
            let Some(path) = g.shortest_path(fleet[i].at, target) else {
                return Err(Failure {
                    kind: FailureKind::Deadline,
                    time: t,
                    witness: Vec::new(),
                    detail: format!(
                        "vehicle {} cannot reach node {} of task {}",
                        fleet[i].id, g.node_ids[target], task
                    ),
                });
            };
            let blocked = path.iter().any(|n| {
                fleet
                    .iter()
                    .enumerate()
                    .any(|(j, o)| j != i && o.locks.contains(n))
            });
            let v = &mut fleet[i];
            if blocked {
                v.waiting = true;
                let here = g.node_ids[v.at];
                if s.stop_kind(here) == Some(StopKind::Park) {
                    let d = s.stop_duration(here).expect("park duration");
                    v.route.push(RouteElement::Stop(here));
                    v.phase = Phase::Busy(t + d);
                } else {
                    unrepresentable.get_or_insert((v.id, here, t));
                    v.phase = Phase::Blocked;
                }
                continue;
            }
            v.waiting = false;
            v.todo.pop();
            v.locks = path.iter().copied().collect();
            let mut clock = t;
            for w in path.windows(2) {
                let e = g.edge_between(w[0], w[1]).expect("path edge");
                clock += g.edges[e].duration;
                v.route
                    .push(RouteElement::Move(g.node_ids[w[0]], g.node_ids[w[1]]));
            }
            v.at = target;
            if clock == t {
                v.locks = BTreeSet::from([target]);
            } else {
                v.release_at = Some(clock);
            }
            let here = g.node_ids[target];
            clock += s.stop_duration(here).expect("halt duration");
            v.route.push(RouteElement::Stop(here));
            let deadline = s.tasks()[&task].deadline;
            if clock > deadline {
                return Err(Failure {
                    kind: FailureKind::Deadline,
                    time: clock,
                    witness: Vec::new(),
                    detail: format!(
                        "vehicle {} completes node {} of task {} at {} after deadline {}",
                        v.id, here, task, clock, deadline
                    ),
                });
            }
            v.phase = Phase::Busy(clock);
        }
        let stuck = fleet.iter().any(|v| v.phase != Phase::Finished)
            && fleet
                .iter()
                .all(|v| v.phase == Phase::Finished || (v.waiting && v.release_at.is_none()));
        if stuck {
            return Err(deadlock(&fleet, &g, t));
        }
    }

    if let Some((c, node, time)) = unrepresentable {
        return Err(Failure {
            kind: FailureKind::UnrepresentableWait,
            time,
            witness: Vec::new(),
            detail: format!("vehicle {c} waited on node {node}, which is not a park node"),
        });
    }
    let routes = fleet.into_iter().map(|v| (v.id, v.route));
    let sol = Solution::from_parts(s, orders, routes);
    debug_assert!(crate::validation::validate(s, &sol).feasible);
    Ok(sol)
}

fn deadlock(fleet: &[Vehicle], g: &GraphIndex, time: Time) -> Failure {
    let mut edges = Vec::new();
    for (i, v) in fleet.iter().enumerate() {
        if v.phase == Phase::Finished {
            continue;
        }
        let Some(&(_, target)) = v.todo.last() else {
            continue;
        };
        let path = g.shortest_path(v.at, target).unwrap_or_default();
        for n in path {
            for (j, o) in fleet.iter().enumerate() {
                if j != i && o.locks.contains(&n) {
                    edges.push((i, n, j));
                }
            }
        }
    }
    let to_edge = |&(i, n, j): &(usize, usize, usize)| WaitEdge {
        waiter: fleet[i].id,
        node: g.node_ids[n],
        holder: fleet[j].id,
    };
    let witness = match find_cycle(fleet.len(), &edges) {
        Some(cycle) => cycle.iter().map(to_edge).collect(),
        None => edges.iter().map(to_edge).collect(),
    };
    Failure {
        kind: FailureKind::Deadlock,
        time,
        witness,
        detail: "no vehicle can acquire its next route".into(),
    }
}

/// A cycle in the waits-for graph, as a list of its edges.
fn find_cycle(n: usize, edges: &[(usize, usize, usize)]) -> Option<Vec<(usize, usize, usize)>> {
    fn walk(
        cur: usize,
        edges: &[(usize, usize, usize)],
        on_path: &mut Vec<bool>,
        path: &mut Vec<(usize, usize, usize)>,
    ) -> Option<Vec<(usize, usize, usize)>> {
        on_path[cur] = true;
        for &e in edges.iter().filter(|e| e.0 == cur) {
            path.push(e);
            if on_path[e.2] {
                let from = path.iter().position(|p| p.0 == e.2).expect("cycle start");
                return Some(path[from..].to_vec());
            }
            if let Some(c) = walk(e.2, edges, on_path, path) {
                return Some(c);
            }
            path.pop();
        }
        on_path[cur] = false;
        None
    }
    (0..n).find_map(|start| walk(start, edges, &mut vec![false; n], &mut Vec::new()))
}
