//! Scenario and solution domain types.
//!
//! A [`Scenario`] is a directed graph of locations with move durations,
//! disjoint sets of halt and park nodes with stop durations, transport tasks
//! given as sequences of halt nodes with a shared deadline, and vehicles with
//! pairwise distinct initial locations. A [`Solution`] assigns every task to
//! a vehicle, orders the tasks of each vehicle and fixes a route per vehicle.
//!
//! All scenario types are immutable after [`build_scenario`] succeeds.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Clock cycles. All durations, deadlines and occupation times use it.
pub type Time = u32;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(
            Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl From<u32> for $name {
            fn from(v: u32) -> Self {
                Self(v)
            }
        }
    };
}

id_type!(
    /// Location identifier.
    NodeId
);
id_type!(
    /// Vehicle identifier.
    VehicleId
);
id_type!(
    /// Transport task identifier.
    TaskId
);

/// Ordered pair of locations.
pub type Edge = (NodeId, NodeId);

/// A transport task: halt nodes to visit in order, all by `deadline`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub subtasks: Vec<NodeId>,
    pub deadline: Time,
}

/// Kind of a stop-capable location.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopKind {
    Halt,
    Park,
}

/// One element of a vehicle route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RouteElement {
    /// Traverse the connection `(from, to)`.
    Move(NodeId, NodeId),
    /// Stay at a halt or park node for its stop duration.
    Stop(NodeId),
}

impl RouteElement {
    /// Location the vehicle is at once this element has been carried out.
    pub fn endpoint(&self) -> NodeId {
        match *self {
            RouteElement::Move(_, to) => to,
            RouteElement::Stop(v) => v,
        }
    }

    /// Location the vehicle must be at before this element.
    pub fn source(&self) -> NodeId {
        match *self {
            RouteElement::Move(from, _) => from,
            RouteElement::Stop(v) => v,
        }
    }
}

/// A vehicle route.
pub type Route = Vec<RouteElement>;

/// Task assignment, per-vehicle task order and routes.
///
/// The order of tasks sharing a vehicle is the vehicle's sequence in
/// `vehicle_task_order`; tasks on different vehicles are unrelated. The type
/// is plain data and may be inconsistent; [`crate::validation`] reports such
/// inconsistencies.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Solution {
    pub assignment: BTreeMap<TaskId, VehicleId>,
    pub vehicle_task_order: BTreeMap<VehicleId, Vec<TaskId>>,
    pub routes: BTreeMap<VehicleId, Route>,
}

impl Solution {
    /// Empty solution with an entry for every vehicle of `scenario`.
    pub fn empty(scenario: &Scenario) -> Self {
        let mut sol = Solution::default();
        for &c in scenario.vehicles().keys() {
            sol.vehicle_task_order.insert(c, Vec::new());
            sol.routes.insert(c, Vec::new());
        }
        sol
    }

    /// Builds a solution from per-vehicle task sequences and routes.
    pub fn from_parts(
        scenario: &Scenario,
        orders: impl IntoIterator<Item = (VehicleId, Vec<TaskId>)>,
        routes: impl IntoIterator<Item = (VehicleId, Route)>,
    ) -> Self {
        let mut sol = Solution::empty(scenario);
        for (c, tasks) in orders {
            for &t in &tasks {
                sol.assignment.insert(t, c);
            }
            sol.vehicle_task_order.insert(c, tasks);
        }
        for (c, r) in routes {
            sol.routes.insert(c, r);
        }
        sol
    }

    pub fn route(&self, c: VehicleId) -> &[RouteElement] {
        self.routes.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn tasks_of(&self, c: VehicleId) -> &[TaskId] {
        self.vehicle_task_order
            .get(&c)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Objective values, compared lexicographically in field order.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct ObjectiveVector {
    /// Makespan: largest per-vehicle route duration.
    pub ms: u64,
    /// Route length: total route duration over all vehicles.
    pub rl: u64,
    /// Crossing number.
    pub cn: u64,
    /// Overlap number.
    pub on: u64,
}

impl ObjectiveVector {
    pub const fn new(ms: u64, rl: u64, cn: u64, on: u64) -> Self {
        Self { ms, rl, cn, on }
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.ms, self.rl, self.cn, self.on]
    }

    pub fn from_array(a: [u64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// Component-wise `<=`.
    pub fn dominated_by(&self, other: &ObjectiveVector) -> bool {
        self.ms <= other.ms && self.rl <= other.rl && self.cn <= other.cn && self.on <= other.on
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.ms, self.rl, self.cn, self.on)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("initial location {node} shared by vehicles {first} and {second}")]
    DuplicateInitialLocation {
        node: NodeId,
        first: VehicleId,
        second: VehicleId,
    },
    #[error("node {0} is declared both halt and park")]
    HaltParkOverlap(NodeId),
    #[error("subtask {index} of task {task} is at {node}, which is not a halt node")]
    SubtaskNotHaltNode {
        task: TaskId,
        index: usize,
        node: NodeId,
    },
    #[error("non-positive value {value} for {what}")]
    NonPositiveDuration { what: String, value: i64 },
    #[error("edge ({0}, {1}) references an undeclared node")]
    UndeclaredNodeInEdge(NodeId, NodeId),
    #[error("task {0} has no subtasks")]
    EmptySubtaskSequence(TaskId),
    #[error("self-loop edge at node {0}")]
    SelfLoop(NodeId),
    #[error("undeclared node {node} used by {what}")]
    UndeclaredNode { node: NodeId, what: String },
    #[error("conflicting declarations for {0}")]
    ConflictingDeclaration(String),
}

/// Raw declarations, as read from a fact file or assembled by hand.
///
/// Durations are signed so that non-positive input can be diagnosed.
#[derive(Clone, Debug, Default)]
pub struct ScenarioParts {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId, i64)>,
    pub halts: Vec<(NodeId, i64)>,
    pub parks: Vec<(NodeId, i64)>,
    pub tasks: Vec<TaskDecl>,
    pub vehicles: Vec<(VehicleId, NodeId)>,
}

#[derive(Clone, Debug)]
pub struct TaskDecl {
    pub id: TaskId,
    pub deadline: i64,
    pub subtasks: Vec<NodeId>,
}

impl ScenarioParts {
    pub fn node_range(mut self, range: std::ops::RangeInclusive<u32>) -> Self {
        self.nodes.extend(range.map(NodeId));
        self
    }

    pub fn edge(mut self, from: u32, to: u32, duration: i64) -> Self {
        self.edges.push((NodeId(from), NodeId(to), duration));
        self
    }

    pub fn halt(mut self, node: u32, duration: i64) -> Self {
        self.halts.push((NodeId(node), duration));
        self
    }

    pub fn park(mut self, node: u32, duration: i64) -> Self {
        self.parks.push((NodeId(node), duration));
        self
    }

    pub fn task(mut self, id: u32, deadline: i64, subtasks: &[u32]) -> Self {
        self.tasks.push(TaskDecl {
            id: TaskId(id),
            deadline,
            subtasks: subtasks.iter().copied().map(NodeId).collect(),
        });
        self
    }

    pub fn vehicle(mut self, id: u32, at: u32) -> Self {
        self.vehicles.push((VehicleId(id), NodeId(at)));
        self
    }

    pub fn build(self) -> Result<Scenario, ScenarioError> {
        build_scenario(self)
    }
}

/// Validated routing scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<Edge, Time>,
    halts: BTreeMap<NodeId, Time>,
    parks: BTreeMap<NodeId, Time>,
    tasks: BTreeMap<TaskId, Task>,
    vehicles: BTreeMap<VehicleId, NodeId>,
}

fn positive(what: impl FnOnce() -> String, value: i64) -> Result<Time, ScenarioError> {
    if value <= 0 || value > i64::from(Time::MAX) {
        return Err(ScenarioError::NonPositiveDuration {
            what: what(),
            value,
        });
    }
    Ok(value as Time)
}

fn insert_once<K: Ord + Copy, V: PartialEq + Copy>(
    map: &mut BTreeMap<K, V>,
    key: K,
    value: V,
    describe: impl FnOnce() -> String,
) -> Result<(), ScenarioError> {
    match map.insert(key, value) {
        Some(prev) if prev != value => Err(ScenarioError::ConflictingDeclaration(describe())),
        _ => Ok(()),
    }
}

/// Validates raw declarations into a [`Scenario`].
///
/// Checks run in a fixed order (durations, edges, stop nodes, tasks,
/// vehicles) and the first violation is returned.
pub fn build_scenario(parts: ScenarioParts) -> Result<Scenario, ScenarioError> {
    let nodes: BTreeSet<NodeId> = parts.nodes.iter().copied().collect();

    let mut edges = BTreeMap::new();
    for &(a, b, d) in &parts.edges {
        let d = positive(|| format!("move duration of ({a}, {b})"), d)?;
        insert_once(&mut edges, (a, b), d, || format!("edge ({a}, {b})"))?;
    }
    let mut halts = BTreeMap::new();
    for &(v, d) in &parts.halts {
        let d = positive(|| format!("halt duration of {v}"), d)?;
        insert_once(&mut halts, v, d, || format!("halt {v}"))?;
    }
    let mut parks = BTreeMap::new();
    for &(v, d) in &parts.parks {
        let d = positive(|| format!("park duration of {v}"), d)?;
        insert_once(&mut parks, v, d, || format!("park {v}"))?;
    }
    for t in &parts.tasks {
        positive(|| format!("deadline of task {}", t.id), t.deadline)?;
    }

    for &(a, b) in edges.keys() {
        if !nodes.contains(&a) || !nodes.contains(&b) {
            return Err(ScenarioError::UndeclaredNodeInEdge(a, b));
        }
        if a == b {
            return Err(ScenarioError::SelfLoop(a));
        }
    }
    for (&v, what) in halts
        .keys()
        .map(|v| (v, "halt"))
        .chain(parks.keys().map(|v| (v, "park")))
    {
        if !nodes.contains(&v) {
            return Err(ScenarioError::UndeclaredNode {
                node: v,
                what: what.to_string(),
            });
        }
    }
    if let Some(&v) = halts.keys().find(|v| parks.contains_key(v)) {
        return Err(ScenarioError::HaltParkOverlap(v));
    }

    let mut tasks = BTreeMap::new();
    for t in &parts.tasks {
        if t.subtasks.is_empty() {
            return Err(ScenarioError::EmptySubtaskSequence(t.id));
        }
        for (i, &v) in t.subtasks.iter().enumerate() {
            if !halts.contains_key(&v) {
                return Err(ScenarioError::SubtaskNotHaltNode {
                    task: t.id,
                    index: i + 1,
                    node: v,
                });
            }
        }
        let task = Task {
            subtasks: t.subtasks.clone(),
            deadline: t.deadline as Time,
        };
        if let Some(prev) = tasks.insert(t.id, task.clone()) {
            if prev != task {
                return Err(ScenarioError::ConflictingDeclaration(format!(
                    "task {}",
                    t.id
                )));
            }
        }
    }

    let mut vehicles: BTreeMap<VehicleId, NodeId> = BTreeMap::new();
    let mut at: BTreeMap<NodeId, VehicleId> = BTreeMap::new();
    for &(c, v) in &parts.vehicles {
        if !nodes.contains(&v) {
            return Err(ScenarioError::UndeclaredNode {
                node: v,
                what: format!("initial location of vehicle {c}"),
            });
        }
        insert_once(&mut vehicles, c, v, || format!("vehicle {c}"))?;
    }
    for (&c, &v) in &vehicles {
        if let Some(&other) = at.get(&v) {
            return Err(ScenarioError::DuplicateInitialLocation {
                node: v,
                first: other,
                second: c,
            });
        }
        at.insert(v, c);
    }

    Ok(Scenario {
        nodes,
        edges,
        halts,
        parks,
        tasks,
        vehicles,
    })
}

impl Scenario {
    pub fn builder() -> ScenarioParts {
        ScenarioParts::default()
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<Edge, Time> {
        &self.edges
    }

    pub fn halts(&self) -> &BTreeMap<NodeId, Time> {
        &self.halts
    }

    pub fn parks(&self) -> &BTreeMap<NodeId, Time> {
        &self.parks
    }

    pub fn tasks(&self) -> &BTreeMap<TaskId, Task> {
        &self.tasks
    }

    pub fn task(&self, t: TaskId) -> Option<&Task> {
        self.tasks.get(&t)
    }

    pub fn vehicles(&self) -> &BTreeMap<VehicleId, NodeId> {
        &self.vehicles
    }

    pub fn initial_location(&self, c: VehicleId) -> Option<NodeId> {
        self.vehicles.get(&c).copied()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.edges.contains_key(&(a, b))
    }

    pub fn edge_duration(&self, a: NodeId, b: NodeId) -> Option<Time> {
        self.edges.get(&(a, b)).copied()
    }

    pub fn stop_kind(&self, v: NodeId) -> Option<StopKind> {
        if self.halts.contains_key(&v) {
            Some(StopKind::Halt)
        } else if self.parks.contains_key(&v) {
            Some(StopKind::Park)
        } else {
            None
        }
    }

    /// Halt or park duration of `v`.
    pub fn stop_duration(&self, v: NodeId) -> Option<Time> {
        self.halts.get(&v).or_else(|| self.parks.get(&v)).copied()
    }

    /// Duration of a route element, or `None` if it does not exist here.
    pub fn element_duration(&self, e: &RouteElement) -> Option<Time> {
        match *e {
            RouteElement::Move(a, b) => self.edge_duration(a, b),
            RouteElement::Stop(v) => self.stop_duration(v),
        }
    }

    /// Latest task deadline, or 0 without tasks.
    pub fn horizon(&self) -> Time {
        self.tasks.values().map(|t| t.deadline).max().unwrap_or(0)
    }

    pub fn total_subtasks(&self) -> usize {
        self.tasks.values().map(|t| t.subtasks.len()).sum()
    }

    /// Predecessors of `v`, ascending.
    pub fn predecessors(&self, v: NodeId) -> Vec<NodeId> {
        // edges are sorted by source, so the result is sorted too
        self.edges
            .keys()
            .filter(|&&(_, b)| b == v)
            .map(|&(a, _)| a)
            .collect()
    }

    pub fn successors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Time)> + '_ {
        self.edges
            .range((v, NodeId(0))..=(v, NodeId(u32::MAX)))
            .map(|(&(_, b), &d)| (b, d))
    }

    /// Consecutive predecessor pairs `(p, p', v)` with `p < p'` for every
    /// node `v` with at least two incoming edges, ordered by `v`.
    pub fn less_pairs(&self) -> Vec<(NodeId, NodeId, NodeId)> {
        let mut preds: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for &(a, b) in self.edges.keys() {
            preds.entry(b).or_default().push(a);
        }
        let mut out = Vec::new();
        for (v, mut ps) in preds {
            ps.sort();
            out.extend(ps.windows(2).map(|w| (w[0], w[1], v)));
        }
        out
    }

    /// Bidirectional connection pairs, each listed once as `(v, v')` with
    /// `v < v'`.
    pub fn bidirectional_pairs(&self) -> Vec<(NodeId, NodeId)> {
        self.edges
            .keys()
            .filter(|&&(a, b)| a < b && self.edges.contains_key(&(b, a)))
            .copied()
            .collect()
    }

    /// Single-source shortest move durations from `source`.
    pub fn shortest_durations_from(&self, source: NodeId) -> BTreeMap<NodeId, Time> {
        let mut dist: BTreeMap<NodeId, Time> = BTreeMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert(source, 0);
        heap.push(Reverse((0 as Time, source)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist.get(&v).is_some_and(|&best| best < d) {
                continue;
            }
            for (w, dw) in self.successors(v) {
                let nd = d.saturating_add(dw);
                if dist.get(&w).is_none_or(|&cur| nd < cur) {
                    dist.insert(w, nd);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("subtask {0} is unreachable")]
pub struct Unreachable(pub usize);

/// Smallest total of move and halt durations needed to complete `subtasks`
/// in order starting from `start`, ignoring other vehicles.
///
/// `Unreachable(i)` names the first (1-based) subtask with no path to it.
pub fn min_completion_time(
    scenario: &Scenario,
    start: NodeId,
    subtasks: &[NodeId],
) -> Result<Time, Unreachable> {
    let mut total: Time = 0;
    let mut at = start;
    let mut cache: HashMap<NodeId, BTreeMap<NodeId, Time>> = HashMap::new();
    for (i, &s) in subtasks.iter().enumerate() {
        let from = cache
            .entry(at)
            .or_insert_with(|| scenario.shortest_durations_from(at));
        let travel = *from.get(&s).ok_or(Unreachable(i + 1))?;
        let halt = scenario.stop_duration(s).unwrap_or(0);
        total = total.saturating_add(travel).saturating_add(halt);
        at = s;
    }
    Ok(total)
}

/// Dense index over a scenario used by the search procedures.
#[derive(Clone, Debug)]
pub struct GraphIndex {
    pub node_ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    pub edges: Vec<IndexedEdge>,
    edge_index: HashMap<(usize, usize), usize>,
    /// Outgoing edge indices per node, by ascending target id.
    pub out: Vec<Vec<usize>>,
    /// Stop kind and duration per node.
    pub stop: Vec<Option<(StopKind, Time)>>,
    /// All-pairs shortest move durations, `None` when unreachable.
    pub dist: Vec<Vec<Option<Time>>>,
}

#[derive(Clone, Copy, Debug)]
pub struct IndexedEdge {
    pub from: usize,
    pub to: usize,
    pub duration: Time,
    pub reverse: Option<usize>,
}

impl GraphIndex {
    pub fn new(s: &Scenario) -> Self {
        let node_ids: Vec<NodeId> = s.nodes().iter().copied().collect();
        let index: HashMap<NodeId, usize> =
            node_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        let mut edge_index = HashMap::new();
        let mut out = vec![Vec::new(); node_ids.len()];
        for (&(a, b), &d) in s.edges() {
            let (ia, ib) = (index[&a], index[&b]);
            edge_index.insert((ia, ib), edges.len());
            out[ia].push(edges.len());
            edges.push(IndexedEdge {
                from: ia,
                to: ib,
                duration: d,
                reverse: None,
            });
        }
        for e in edges.iter_mut() {
            e.reverse = edge_index.get(&(e.to, e.from)).copied();
        }
        let stop = node_ids
            .iter()
            .map(|&v| s.stop_kind(v).zip(s.stop_duration(v)))
            .collect();
        let dist = node_ids
            .iter()
            .map(|&v| {
                let from = s.shortest_durations_from(v);
                node_ids.iter().map(|w| from.get(w).copied()).collect()
            })
            .collect();
        GraphIndex {
            node_ids,
            index,
            edges,
            edge_index,
            out,
            stop,
            dist,
        }
    }

    pub fn len(&self) -> usize {
        self.node_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }

    pub fn idx(&self, v: NodeId) -> usize {
        self.index[&v]
    }

    pub fn try_idx(&self, v: NodeId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a, b)).copied()
    }

    /// Shortest path from `a` to `b` as node indices, preferring the
    /// lexicographically smallest node-id sequence among equal durations.
    pub fn shortest_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        self.dist[a][b]?;
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            let remaining = self.dist[cur][b]?;
            // out lists are sorted by target id
            let next = self.out[cur]
                .iter()
                .map(|&e| self.edges[e])
                .find(|e| self.dist[e.to][b].is_some_and(|rest| rest + e.duration == remaining))?;
            cur = next.to;
            path.push(cur);
        }
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::example1_parts;

    #[test]
    fn example1_builds() {
        let s = example1_parts().build().unwrap();
        assert_eq!(s.nodes().len(), 7);
        assert_eq!(s.edges().len(), 10);
        assert_eq!(s.horizon(), 60);
        assert_eq!(s.vehicles().len(), 2);
    }

    #[test]
    fn duplicate_initial_location() {
        let mut parts = example1_parts();
        parts.vehicles = vec![(VehicleId(1), NodeId(1)), (VehicleId(2), NodeId(1))];
        assert!(matches!(
            build_scenario(parts),
            Err(ScenarioError::DuplicateInitialLocation {
                node: NodeId(1),
                ..
            })
        ));
    }

    #[test]
    fn halt_park_overlap() {
        let parts = example1_parts().halt(7, 2);
        assert_eq!(
            build_scenario(parts),
            Err(ScenarioError::HaltParkOverlap(NodeId(7)))
        );
    }

    #[test]
    fn other_build_errors() {
        let base = || Scenario::builder().node_range(1..=3).halt(2, 1);
        assert!(matches!(
            base().edge(1, 2, 0).build(),
            Err(ScenarioError::NonPositiveDuration { .. })
        ));
        assert_eq!(
            base().edge(1, 9, 2).build(),
            Err(ScenarioError::UndeclaredNodeInEdge(NodeId(1), NodeId(9)))
        );
        assert_eq!(
            base().edge(1, 1, 2).build(),
            Err(ScenarioError::SelfLoop(NodeId(1)))
        );
        assert_eq!(
            base().task(1, 10, &[]).build(),
            Err(ScenarioError::EmptySubtaskSequence(TaskId(1)))
        );
        assert!(matches!(
            base().task(1, 10, &[3]).build(),
            Err(ScenarioError::SubtaskNotHaltNode { index: 1, .. })
        ));
        assert!(matches!(
            base().task(1, -4, &[2]).build(),
            Err(ScenarioError::NonPositiveDuration { .. })
        ));
    }

    #[test]
    fn horizon_is_max_deadline() {
        let base = || Scenario::builder().node_range(1..=2).halt(2, 1);
        assert_eq!(base().task(1, 7, &[2]).build().unwrap().horizon(), 7);
        let s = base()
            .task(1, 30, &[2])
            .task(2, 60, &[2])
            .task(3, 45, &[2])
            .build()
            .unwrap();
        assert_eq!(s.horizon(), 60);
        assert_eq!(base().build().unwrap().horizon(), 0);
    }

    #[test]
    fn less_pairs_example1() {
        let s = example1_parts().build().unwrap();
        let pairs = s.less_pairs();
        let n = NodeId;
        assert!(pairs.contains(&(n(1), n(4), n(7))));
        assert!(pairs.contains(&(n(3), n(7), n(4))));
        // node 1 has predecessors 6 and 7, every other node fewer than two
        assert!(pairs.contains(&(n(6), n(7), n(1))));
        assert_eq!(pairs.len(), 3);
    }

    #[test]
    fn bidirectional_pairs_example1() {
        let s = example1_parts().build().unwrap();
        assert_eq!(
            s.bidirectional_pairs(),
            vec![(NodeId(1), NodeId(7)), (NodeId(4), NodeId(7))]
        );
        let line = Scenario::builder()
            .node_range(1..=3)
            .edge(1, 2, 1)
            .edge(2, 3, 1)
            .build()
            .unwrap();
        assert!(line.bidirectional_pairs().is_empty());
        let two = Scenario::builder()
            .node_range(1..=2)
            .edge(1, 2, 1)
            .edge(2, 1, 1)
            .build()
            .unwrap();
        assert_eq!(two.bidirectional_pairs().len(), 1);
    }

    #[test]
    fn min_completion_example1() {
        let s = example1_parts().build().unwrap();
        let n = NodeId;
        assert_eq!(min_completion_time(&s, n(1), &[n(5), n(4), n(2)]), Ok(49));
        assert_eq!(min_completion_time(&s, n(5), &[n(5)]), Ok(3));
        let oneway = Scenario::builder()
            .node_range(1..=3)
            .halt(1, 1)
            .halt(3, 1)
            .edge(3, 2, 1)
            .build()
            .unwrap();
        assert_eq!(
            min_completion_time(&oneway, n(1), &[n(1), n(3)]),
            Err(Unreachable(2))
        );
    }

    #[test]
    fn shortest_path_tie_break() {
        // two equal paths 1->2->4 and 1->3->4
        let s = Scenario::builder()
            .node_range(1..=4)
            .edge(1, 3, 1)
            .edge(1, 2, 1)
            .edge(2, 4, 1)
            .edge(3, 4, 1)
            .build()
            .unwrap();
        let g = GraphIndex::new(&s);
        let p = g.shortest_path(g.idx(NodeId(1)), g.idx(NodeId(4))).unwrap();
        let ids: Vec<u32> = p.iter().map(|&i| g.node_ids[i].0).collect();
        assert_eq!(ids, vec![1, 2, 4]);
    }
}
