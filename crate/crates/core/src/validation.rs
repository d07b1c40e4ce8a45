//! Feasibility conditions and objective functions.
//!
//! A solution is feasible when
//! 1. every route is connected, starting from the vehicle's initial location,
//! 2. every subtask of a task is completed by a halt of the assigned vehicle,
//!    in task order and subtask order, no later than the task deadline,
//! 3. every halt completes a subtask, and
//! 4. no two vehicles occupy a node at the same time or traverse the two
//!    directions of a bidirectional connection at the same time.
//!
//! [`validate`] checks the conditions in that order and stops at the first
//! stage that reports findings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{
    Edge, NodeId, ObjectiveVector, RouteElement, Scenario, Solution, StopKind, TaskId, Time,
    VehicleId,
};

/// A feasibility finding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Conflict {
    /// Two vehicles occupy `node` at `time`.
    NodeConflict {
        node: NodeId,
        time: Time,
        vehicles: (VehicleId, VehicleId),
    },
    /// `vehicles.0` traverses `edge` while `vehicles.1` traverses its reverse.
    SwapConflict {
        edge: Edge,
        time: Time,
        vehicles: (VehicleId, VehicleId),
    },
    /// Element `index` (1-based) does not start where the previous one ended.
    ConnectivityViolation { vehicle: VehicleId, index: usize },
    /// Element `index` is a move along a missing connection or a stop at a
    /// node that is neither halt nor park.
    InvalidElement { vehicle: VehicleId, index: usize },
    /// Element `index` halts without completing the pending subtask.
    IllegalHalt { vehicle: VehicleId, index: usize },
    /// Subtask `subtask` (1-based) of `task` completes late or never.
    DeadlineMiss { task: TaskId, subtask: usize },
    /// Assignment and per-vehicle order disagree for `vehicle`.
    UnorderedSharedTasks { vehicle: VehicleId },
    /// `task` is not assigned to any known vehicle.
    UnassignedTask { task: TaskId },
}

/// Coarse kind of a [`Conflict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConflictClass {
    Node,
    Swap,
    Connectivity,
    InvalidElement,
    IllegalHalt,
    DeadlineMiss,
    UnorderedSharedTasks,
    UnassignedTask,
}

impl Conflict {
    pub fn class(&self) -> ConflictClass {
        match self {
            Conflict::NodeConflict { .. } => ConflictClass::Node,
            Conflict::SwapConflict { .. } => ConflictClass::Swap,
            Conflict::ConnectivityViolation { .. } => ConflictClass::Connectivity,
            Conflict::InvalidElement { .. } => ConflictClass::InvalidElement,
            Conflict::IllegalHalt { .. } => ConflictClass::IllegalHalt,
            Conflict::DeadlineMiss { .. } => ConflictClass::DeadlineMiss,
            Conflict::UnorderedSharedTasks { .. } => ConflictClass::UnorderedSharedTasks,
            Conflict::UnassignedTask { .. } => ConflictClass::UnassignedTask,
        }
    }
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conflict::NodeConflict {
                node,
                time,
                vehicles: (a, b),
            } => write!(
                f,
                "NodeConflict: vehicles {a} and {b} at node {node}, time {time}"
            ),
            Conflict::SwapConflict {
                edge: (x, y),
                time,
                vehicles: (a, b),
            } => write!(
                f,
                "SwapConflict: vehicle {a} on ({x},{y}) and vehicle {b} on ({y},{x}) at time {time}"
            ),
            Conflict::ConnectivityViolation { vehicle, index } => {
                write!(
                    f,
                    "ConnectivityViolation: vehicle {vehicle}, element {index}"
                )
            }
            Conflict::InvalidElement { vehicle, index } => {
                write!(f, "InvalidElement: vehicle {vehicle}, element {index}")
            }
            Conflict::IllegalHalt { vehicle, index } => {
                write!(f, "IllegalHalt: vehicle {vehicle}, element {index}")
            }
            Conflict::DeadlineMiss { task, subtask } => {
                write!(f, "DeadlineMiss: task {task}, subtask {subtask}")
            }
            Conflict::UnorderedSharedTasks { vehicle } => {
                write!(f, "UnorderedSharedTasks: vehicle {vehicle}")
            }
            Conflict::UnassignedTask { task } => write!(f, "UnassignedTask: task {task}"),
        }
    }
}

/// Completion of one subtask.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Completion {
    pub vehicle: VehicleId,
    /// 1-based position of the completing halt in the vehicle's route.
    pub index: usize,
    /// Sum of element durations up to and including the halt.
    pub time: Time,
}

/// Completion index and time of every subtask.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletionSchedule {
    /// Keyed by task and 1-based subtask index.
    pub completions: BTreeMap<(TaskId, usize), Completion>,
    /// Per vehicle, its halts in route order as `(task, subtask)`.
    pub halts: BTreeMap<VehicleId, Vec<(TaskId, usize)>>,
}

impl CompletionSchedule {
    pub fn completion_time(&self, task: TaskId, subtask: usize) -> Option<Time> {
        self.completions.get(&(task, subtask)).map(|c| c.time)
    }
}

/// Occupation times of one vehicle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VehicleOccupation {
    pub nodes: BTreeMap<NodeId, BTreeSet<Time>>,
    pub edges: BTreeMap<Edge, BTreeSet<Time>>,
}

impl VehicleOccupation {
    /// Yields `(node, time)` for every occupied node instant.
    pub fn node_instants(&self) -> impl Iterator<Item = (NodeId, Time)> + '_ {
        self.nodes
            .iter()
            .flat_map(|(&v, ts)| ts.iter().map(move |&t| (v, t)))
    }
}

/// Occupation times of all vehicles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OccupationMap {
    pub vehicles: BTreeMap<VehicleId, VehicleOccupation>,
}

impl OccupationMap {
    pub fn node_times(&self, c: VehicleId, v: NodeId) -> BTreeSet<Time> {
        self.vehicles
            .get(&c)
            .and_then(|o| o.nodes.get(&v))
            .cloned()
            .unwrap_or_default()
    }

    pub fn edge_times(&self, c: VehicleId, e: Edge) -> BTreeSet<Time> {
        self.vehicles
            .get(&c)
            .and_then(|o| o.edges.get(&e))
            .cloned()
            .unwrap_or_default()
    }
}

/// Result of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub feasible: bool,
    pub conflicts: Vec<Conflict>,
    pub schedule: Option<CompletionSchedule>,
    /// Present iff `feasible`.
    pub objectives: Option<ObjectiveVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("solution is infeasible: {}", .0.first().map(|c| c.to_string()).unwrap_or_default())]
pub struct InfeasibleSolution(pub Vec<Conflict>);

/// Checks that each element starts where the previous one ended, with the
/// initial location standing in for element 0. Returns the 1-based index of
/// the first violation.
pub fn check_connectivity(route: &[RouteElement], start: NodeId) -> Result<(), usize> {
    let mut at = start;
    for (i, e) in route.iter().enumerate() {
        if e.source() != at {
            return Err(i + 1);
        }
        at = e.endpoint();
    }
    Ok(())
}

fn check_elements(s: &Scenario, c: VehicleId, route: &[RouteElement]) -> Option<Conflict> {
    route.iter().enumerate().find_map(|(i, e)| {
        let ok = match *e {
            RouteElement::Move(a, b) => s.has_edge(a, b),
            RouteElement::Stop(v) => s.stop_kind(v).is_some(),
        };
        (!ok).then_some(Conflict::InvalidElement {
            vehicle: c,
            index: i + 1,
        })
    })
}

fn check_task_order(s: &Scenario, sol: &Solution) -> Vec<Conflict> {
    let mut out = Vec::new();
    let mut seen: BTreeMap<TaskId, VehicleId> = BTreeMap::new();
    let mut bad: BTreeSet<VehicleId> = BTreeSet::new();
    for (&c, tasks) in &sol.vehicle_task_order {
        let known = s.vehicles().contains_key(&c);
        for &t in tasks {
            let consistent = known
                && s.task(t).is_some()
                && sol.assignment.get(&t) == Some(&c)
                && seen.insert(t, c).is_none();
            if !consistent {
                bad.insert(c);
            }
        }
    }
    for (&t, &c) in &sol.assignment {
        if !s.vehicles().contains_key(&c) {
            continue;
        }
        if seen.get(&t) != Some(&c) {
            bad.insert(c);
        }
    }
    out.extend(
        bad.into_iter()
            .map(|vehicle| Conflict::UnorderedSharedTasks { vehicle }),
    );
    for &t in s.tasks().keys() {
        let assigned = sol
            .assignment
            .get(&t)
            .is_some_and(|c| s.vehicles().contains_key(c));
        if !assigned {
            out.push(Conflict::UnassignedTask { task: t });
        }
    }
    out
}

/// Walks every route and determines where each subtask is completed.
///
/// Halts are matched against the vehicle's single pending subtask: the
/// first incomplete subtask of the first incomplete task in its order. A
/// halt elsewhere is illegal; park stops never complete anything.
pub fn completion_schedule(
    s: &Scenario,
    sol: &Solution,
) -> Result<CompletionSchedule, Vec<Conflict>> {
    let order_issues = check_task_order(s, sol);
    if !order_issues.is_empty() {
        return Err(order_issues);
    }
    let mut schedule = CompletionSchedule::default();
    let mut conflicts = Vec::new();
    for &c in s.vehicles().keys() {
        let pending: Vec<(TaskId, usize, NodeId, Time)> = sol
            .tasks_of(c)
            .iter()
            .flat_map(|&t| {
                let task = s.task(t).expect("checked above");
                task.subtasks
                    .iter()
                    .enumerate()
                    .map(move |(j, &v)| (t, j + 1, v, task.deadline))
            })
            .collect();
        let mut next = 0;
        let mut elapsed: Time = 0;
        let mut trace = Vec::new();
        let mut failed = false;
        for (i, e) in sol.route(c).iter().enumerate() {
            elapsed = elapsed.saturating_add(s.element_duration(e).unwrap_or(0));
            let RouteElement::Stop(v) = *e else { continue };
            if s.stop_kind(v) != Some(StopKind::Halt) {
                continue;
            }
            match pending.get(next) {
                Some(&(t, j, at, deadline)) if at == v => {
                    if elapsed > deadline {
                        conflicts.push(Conflict::DeadlineMiss {
                            task: t,
                            subtask: j,
                        });
                        failed = true;
                        break;
                    }
                    schedule.completions.insert(
                        (t, j),
                        Completion {
                            vehicle: c,
                            index: i + 1,
                            time: elapsed,
                        },
                    );
                    trace.push((t, j));
                    next += 1;
                }
                _ => {
                    conflicts.push(Conflict::IllegalHalt {
                        vehicle: c,
                        index: i + 1,
                    });
                    failed = true;
                    break;
                }
            }
        }
        if !failed {
            if let Some(&(t, j, _, _)) = pending.get(next) {
                conflicts.push(Conflict::DeadlineMiss {
                    task: t,
                    subtask: j,
                });
            }
        }
        schedule.halts.insert(c, trace);
    }
    if conflicts.is_empty() {
        Ok(schedule)
    } else {
        Err(conflicts)
    }
}

/// Occupation times of vehicle `c` following `route`.
///
/// A stop at `x` after prefix duration `p` occupies `x` at `p+1 ..= p+d(x)`;
/// a move `(v, x)` occupies the connection at `p+1 ..= p+d` and `x` at its
/// arrival `p+d`. The initial location is occupied at time 0. Nothing is
/// occupied after the route ends.
pub fn occupation_times(s: &Scenario, c: VehicleId, route: &[RouteElement]) -> VehicleOccupation {
    let mut occ = VehicleOccupation::default();
    if let Some(start) = s.initial_location(c) {
        occ.nodes.entry(start).or_default().insert(0);
    }
    let mut prefix: Time = 0;
    for e in route {
        let d = s.element_duration(e).unwrap_or(0);
        match *e {
            RouteElement::Stop(x) => {
                occ.nodes
                    .entry(x)
                    .or_default()
                    .extend(prefix + 1..=prefix + d);
            }
            RouteElement::Move(v, x) => {
                occ.edges
                    .entry((v, x))
                    .or_default()
                    .extend(prefix + 1..=prefix + d);
                occ.nodes.entry(x).or_default().insert(prefix + d);
            }
        }
        prefix += d;
    }
    occ
}

/// Occupation times of every vehicle of `s`.
pub fn occupation_map(s: &Scenario, sol: &Solution) -> OccupationMap {
    OccupationMap {
        vehicles: s
            .vehicles()
            .keys()
            .map(|&c| (c, occupation_times(s, c, sol.route(c))))
            .collect(),
    }
}

/// Node and swap conflicts between all vehicle pairs, in a deterministic
/// order. Same-direction sharing of a connection is not a conflict.
pub fn check_conflicts(s: &Scenario, occ: &OccupationMap) -> Vec<Conflict> {
    let mut out = Vec::new();
    let vehicles: Vec<(&VehicleId, &VehicleOccupation)> = occ.vehicles.iter().collect();
    let bidirectional: BTreeSet<Edge> = s
        .bidirectional_pairs()
        .into_iter()
        .flat_map(|(a, b)| [(a, b), (b, a)])
        .collect();
    for (i, &(&a, oa)) in vehicles.iter().enumerate() {
        for &(&b, ob) in &vehicles[i + 1..] {
            for (v, ta) in &oa.nodes {
                if let Some(tb) = ob.nodes.get(v) {
                    out.extend(ta.intersection(tb).map(|&time| Conflict::NodeConflict {
                        node: *v,
                        time,
                        vehicles: (a, b),
                    }));
                }
            }
            for (&(x, y), ta) in &oa.edges {
                if !bidirectional.contains(&(x, y)) {
                    continue;
                }
                if let Some(tb) = ob.edges.get(&(y, x)) {
                    out.extend(ta.intersection(tb).map(|&time| Conflict::SwapConflict {
                        edge: (x, y),
                        time,
                        vehicles: (a, b),
                    }));
                }
            }
        }
    }
    out
}

/// Objective values of the routes of `sol`, without checking feasibility.
///
/// The crossing number counts pairs `({c, c'}, v)` where the two vehicles
/// enter `v` from different predecessors. The overlap number counts, per
/// vehicle pair `c < c'`, the pairs `(e, e')` of connections used by `c` and
/// `c'` respectively with `e' = e` or `e'` the reverse of `e`; a connection
/// used repeatedly by one vehicle counts once.
pub fn objectives(s: &Scenario, sol: &Solution) -> ObjectiveVector {
    let mut ms = 0u64;
    let mut rl = 0u64;
    let mut used: Vec<BTreeSet<Edge>> = Vec::new();
    for &c in s.vehicles().keys() {
        let route = sol.route(c);
        let total: u64 = route
            .iter()
            .map(|e| u64::from(s.element_duration(e).unwrap_or(0)))
            .sum();
        ms = ms.max(total);
        rl += total;
        used.push(
            route
                .iter()
                .filter_map(|e| match *e {
                    RouteElement::Move(a, b) => Some((a, b)),
                    RouteElement::Stop(_) => None,
                })
                .collect(),
        );
    }
    let preds = |edges: &BTreeSet<Edge>| {
        let mut m: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for &(a, b) in edges {
            m.entry(b).or_default().insert(a);
        }
        m
    };
    let mut cn = 0u64;
    let mut on = 0u64;
    for i in 0..used.len() {
        let pi = preds(&used[i]);
        for j in i + 1..used.len() {
            let pj = preds(&used[j]);
            for (v, from_i) in &pi {
                let Some(from_j) = pj.get(v) else { continue };
                let same_single = from_i.len() == 1 && from_i == from_j;
                if !same_single {
                    cn += 1;
                }
            }
            for &(a, b) in &used[i] {
                on += u64::from(used[j].contains(&(a, b)));
                on += u64::from(used[j].contains(&(b, a)));
            }
        }
    }
    ObjectiveVector { ms, rl, cn, on }
}

/// Runs all feasibility checks in order; objectives are present iff the
/// solution is feasible.
pub fn validate(s: &Scenario, sol: &Solution) -> ValidationReport {
    let infeasible = |conflicts, schedule| ValidationReport {
        feasible: false,
        conflicts,
        schedule,
        objectives: None,
    };

    let mut structural = Vec::new();
    for (&c, &start) in s.vehicles() {
        let route = sol.route(c);
        if let Some(bad) = check_elements(s, c, route) {
            structural.push(bad);
        } else if let Err(index) = check_connectivity(route, start) {
            structural.push(Conflict::ConnectivityViolation { vehicle: c, index });
        }
    }
    for &c in sol.routes.keys() {
        if !s.vehicles().contains_key(&c) {
            structural.push(Conflict::UnorderedSharedTasks { vehicle: c });
        }
    }
    if !structural.is_empty() {
        return infeasible(structural, None);
    }

    let schedule = match completion_schedule(s, sol) {
        Ok(schedule) => schedule,
        Err(conflicts) => return infeasible(conflicts, None),
    };

    let occ = occupation_map(s, sol);
    let conflicts = check_conflicts(s, &occ);
    if !conflicts.is_empty() {
        return infeasible(conflicts, Some(schedule));
    }

    ValidationReport {
        feasible: true,
        conflicts: Vec::new(),
        schedule: Some(schedule),
        objectives: Some(objectives(s, sol)),
    }
}

/// Objective values of a feasible solution.
pub fn evaluate(s: &Scenario, sol: &Solution) -> Result<ObjectiveVector, InfeasibleSolution> {
    let report = validate(s, sol);
    report
        .objectives
        .ok_or(InfeasibleSolution(report.conflicts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{example1, example1_optimal, route};

    const C1: VehicleId = VehicleId(1);
    const C2: VehicleId = VehicleId(2);

    fn with_route(sol: &Solution, c: VehicleId, r: &str) -> Solution {
        let mut sol = sol.clone();
        sol.routes.insert(c, route(r));
        sol
    }

    #[test]
    fn connectivity() {
        let opt = example1_optimal();
        assert_eq!(check_connectivity(opt.route(C1), NodeId(1)), Ok(()));
        assert_eq!(check_connectivity(&[], NodeId(1)), Ok(()));
        assert_eq!(check_connectivity(&route("1-7 4-7"), NodeId(1)), Err(2));
        assert_eq!(check_connectivity(&route("2"), NodeId(1)), Err(1));
    }

    #[test]
    fn completion_times_match_reference() {
        let s = example1();
        let sched = completion_schedule(&s, &example1_optimal()).unwrap();
        let t = |task, j| sched.completion_time(TaskId(task), j).unwrap();
        assert_eq!([t(1, 1), t(1, 2), t(1, 3)], [17, 40, 55]);
        assert_eq!([t(2, 1), t(2, 2), t(2, 3)], [19, 34, 49]);
        assert_eq!(sched.completions[&(TaskId(1), 1)].index, 5);
        assert_eq!(sched.completions[&(TaskId(1), 3)].index, 15);
    }

    #[test]
    fn extra_halt_is_illegal() {
        let s = example1();
        // Stop(4) inserted before Stop(5): the pending subtask is t1[1] = 5
        let sol = with_route(
            &example1_optimal(),
            C1,
            "1-7 7 7-4 4 4-5 5 5-6 6-1 1-2 2-3 3-4 4 4-7 7-1 1-2 2",
        );
        assert_eq!(
            completion_schedule(&s, &sol),
            Err(vec![Conflict::IllegalHalt {
                vehicle: C1,
                index: 4
            }])
        );
    }

    #[test]
    fn deadline_boundary() {
        // one vehicle at 1, halt at 2 after a move: completes at 3 + 2 = 5
        let build = |deadline| {
            Scenario::builder()
                .node_range(1..=2)
                .edge(1, 2, 3)
                .halt(2, 2)
                .task(1, deadline, &[2])
                .vehicle(1, 1)
                .build()
                .unwrap()
        };
        let sol =
            |s: &Scenario| Solution::from_parts(s, [(C1, vec![TaskId(1)])], [(C1, route("1-2 2"))]);
        let on_time = build(5);
        assert!(completion_schedule(&on_time, &sol(&on_time)).is_ok());
        let late = build(4);
        assert_eq!(
            completion_schedule(&late, &sol(&late)),
            Err(vec![Conflict::DeadlineMiss {
                task: TaskId(1),
                subtask: 1
            }])
        );
    }

    #[test]
    fn unfinished_task_is_a_deadline_miss() {
        let s = example1();
        let sol = with_route(&example1_optimal(), C2, "2-3 3-4 4-5 5-6 6");
        assert_eq!(
            completion_schedule(&s, &sol),
            Err(vec![Conflict::DeadlineMiss {
                task: TaskId(2),
                subtask: 2
            }])
        );
    }

    #[test]
    fn occupation_of_reference_route() {
        let s = example1();
        let occ = occupation_map(&s, &example1_optimal());
        assert_eq!(occ.node_times(C1, NodeId(7)), BTreeSet::from([4, 5, 6, 44]));
        assert_eq!(
            occ.edge_times(C1, (NodeId(1), NodeId(7))),
            BTreeSet::from([1, 2, 3, 4])
        );
        assert!(occ.node_times(C1, NodeId(1)).contains(&0));
        assert!(occ.node_times(C2, NodeId(2)).contains(&0));
        // c2 finishes its halt at 2 during 47..=49 and occupies nothing later
        assert_eq!(
            occ.node_times(C2, NodeId(2)),
            BTreeSet::from([0, 46, 47, 48, 49])
        );
    }

    #[test]
    fn reference_has_no_conflicts() {
        let s = example1();
        let occ = occupation_map(&s, &example1_optimal());
        assert!(check_conflicts(&s, &occ).is_empty());
    }

    #[test]
    fn removing_park_stop_collides_at_node_4() {
        let s = example1();
        let sol = with_route(
            &example1_optimal(),
            C1,
            "1-7 7-4 4-5 5 5-6 6-1 1-2 2-3 3-4 4 4-7 7-1 1-2 2",
        );
        let conflicts = check_conflicts(&s, &occupation_map(&s, &sol));
        assert!(conflicts.contains(&Conflict::NodeConflict {
            node: NodeId(4),
            time: 8,
            vehicles: (C1, C2)
        }));
        assert!(conflicts.iter().all(|c| c.class() == ConflictClass::Node));
    }

    #[test]
    fn opposite_traversal_is_a_swap_conflict() {
        let s = example1();
        let sol = Solution::from_parts(&s, [], [(C1, route("1-7")), (C2, route("2-3"))]);
        let mut occ = occupation_map(&s, &sol);
        let c2 = occ.vehicles.get_mut(&C2).unwrap();
        c2.edges.clear();
        c2.edges
            .insert((NodeId(7), NodeId(1)), BTreeSet::from([1, 2, 3, 4]));
        let conflicts = check_conflicts(&s, &occ);
        assert_eq!(conflicts.len(), 4);
        assert!(conflicts
            .iter()
            .all(|c| matches!(c, Conflict::SwapConflict { .. })));
    }

    #[test]
    fn same_direction_sharing_is_allowed() {
        let s = example1();
        let mut occ = OccupationMap::default();
        for c in [C1, C2] {
            let mut o = VehicleOccupation::default();
            o.edges
                .insert((NodeId(1), NodeId(7)), BTreeSet::from([1, 2, 3, 4]));
            occ.vehicles.insert(c, o);
        }
        assert!(check_conflicts(&s, &occ).is_empty());
    }

    #[test]
    fn reference_objectives() {
        let s = example1();
        let report = validate(&s, &example1_optimal());
        assert!(report.feasible, "{:?}", report.conflicts);
        assert_eq!(
            report.objectives,
            Some(ObjectiveVector::new(55, 104, 3, 14))
        );
    }

    #[test]
    fn crossing_and_overlap_counts() {
        let s = example1();
        // c uses (6,1) and (7,1), c' only (6,1)
        let sol = Solution::from_parts(
            &s,
            [],
            [
                (C1, route("1-7 7-1 1-2")),
                (C2, route("2-3 3-4 4-5 5-6 6-1")),
            ],
        );
        let base = objectives(&s, &sol);
        assert_eq!(base.cn, 1);
        assert_eq!(base.on, 0);
        let sol2 = Solution::from_parts(
            &s,
            [],
            [
                (C1, route("1-7 7-1 1-2 2-3 3-4 4-5 5-6 6-1")),
                (C2, route("2-3 3-4 4-5 5-6 6-1")),
            ],
        );
        // node 1 crossing; shared 2-3, 3-4, 4-5, 5-6, 6-1
        assert_eq!(objectives(&s, &sol2).cn, 1);
        assert_eq!(objectives(&s, &sol2).on, 5);
    }

    #[test]
    fn overlap_on_bidirectional_pair() {
        let s = example1();
        let cases = [
            ("1-7", "7-1", 1),
            ("1-7", "1-7", 1),
            ("1-7 7-1", "1-7", 2),
            ("1-7 7-1", "7-1", 2),
            ("1-7 7-1", "1-7 7-1", 4),
        ];
        for (r1, r2, expected) in cases {
            // the vehicles' start locations don't matter for objectives
            let sol = Solution::from_parts(&s, [], [(C1, route(r1)), (C2, route(r2))]);
            assert_eq!(objectives(&s, &sol).on, expected, "{r1} / {r2}");
        }
    }

    #[test]
    fn swapped_assignment_halts_illegally() {
        let s = example1();
        let mut sol = example1_optimal();
        sol.assignment.insert(TaskId(1), C2);
        sol.assignment.insert(TaskId(2), C1);
        sol.vehicle_task_order.insert(C1, vec![TaskId(2)]);
        sol.vehicle_task_order.insert(C2, vec![TaskId(1)]);
        let report = validate(&s, &sol);
        assert!(!report.feasible);
        assert!(report.conflicts.contains(&Conflict::IllegalHalt {
            vehicle: C1,
            index: 5
        }));
    }

    #[test]
    fn empty_scenario_is_feasible() {
        let s = Scenario::builder()
            .node_range(1..=2)
            .edge(1, 2, 1)
            .vehicle(1, 1)
            .build()
            .unwrap();
        let report = validate(&s, &Solution::empty(&s));
        assert!(report.feasible);
        assert_eq!(report.objectives, Some(ObjectiveVector::default()));
    }

    #[test]
    fn inconsistent_order_is_reported() {
        let s = example1();
        let mut sol = example1_optimal();
        sol.vehicle_task_order.insert(C2, vec![]);
        let report = validate(&s, &sol);
        assert!(report
            .conflicts
            .contains(&Conflict::UnorderedSharedTasks { vehicle: C2 }));
    }
}
