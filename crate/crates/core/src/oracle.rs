//! Exhaustive enumeration of feasible solutions on small scenarios.
//!
//! Candidates are produced per vehicle by a depth-first route search over
//! the vehicle's task chain, combined across vehicles, filtered by pairwise
//! occupation checks and finally confirmed by [`crate::validation::validate`].
//! Distances used for pruning come from a separate Floyd-Warshall pass.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::model::{
    NodeId, ObjectiveVector, Route, RouteElement, Scenario, Solution, StopKind, TaskId, Time,
    VehicleId,
};
use crate::validation::validate;

/// Rules that make the set of solutions finite and countable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Canonicalization {
    /// Routes stop at the halt completing the last assigned subtask.
    /// Otherwise moves and park stops may follow, each ending no later than
    /// the horizon.
    pub routes_end_at_last_completion: bool,
    /// Vehicles without tasks keep an empty route. Otherwise they may move
    /// and park like a vehicle past its last completion.
    pub idle_vehicles_empty_route: bool,
    /// A vehicle whose route ends on a park node stays there until the
    /// horizon, occupying it, and routes never end with a park stop.
    pub park_until_horizon: bool,
    /// The task order only relates tasks of the same vehicle. Always set.
    pub order_minimal: bool,
}

impl Default for Canonicalization {
    fn default() -> Self {
        Canonicalization {
            routes_end_at_last_completion: true,
            idle_vehicles_empty_route: true,
            park_until_horizon: false,
            order_minimal: true,
        }
    }
}

impl Canonicalization {
    /// Solutions are identified by their assignment, order and timed moves.
    /// Vehicles keep moving or parking up to the horizon and rest on park
    /// nodes until then.
    pub fn timed_moves() -> Self {
        Canonicalization {
            routes_end_at_last_completion: false,
            idle_vehicles_empty_route: false,
            park_until_horizon: true,
            order_minimal: true,
        }
    }
}

impl fmt::Display for Canonicalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "routes_end_at_last_completion={} idle_vehicles_empty_route={} \
             park_until_horizon={} order_minimal={}",
            self.routes_end_at_last_completion,
            self.idle_vehicles_empty_route,
            self.park_until_horizon,
            self.order_minimal
        )
    }
}

/// Result of [`enumerate_feasible`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub canon: Canonicalization,
    /// Number of feasible canonical solutions seen.
    pub count: u64,
    /// False when the limit stopped the enumeration early.
    pub complete: bool,
    /// Candidates that passed the pairwise checks but not validation.
    /// Always zero unless the two disagree.
    pub rejected: u64,
    /// Best vector, how many solutions attain it and the first of them.
    pub best: Option<(ObjectiveVector, u64, Solution)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration limit reached after {count} solutions")]
    LimitReached { count: u64 },
    #[error("no feasible solution")]
    Infeasible,
}

/// Optimum found by [`best_by_enumeration`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptimum {
    pub objectives: ObjectiveVector,
    pub optima_count: u64,
    pub witness: Solution,
    pub feasible_count: u64,
}

const UNREACHABLE: Time = Time::MAX;

struct Graph {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    /// `(target, duration)` by ascending target id.
    out: Vec<Vec<(usize, Time)>>,
    stop: Vec<Option<(StopKind, Time)>>,
    dist: Vec<Vec<Time>>,
    min_out: Vec<Time>,
}

impl Graph {
    fn new(s: &Scenario) -> Self {
        let ids: Vec<NodeId> = s.nodes().iter().copied().collect();
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mut out = vec![Vec::new(); n];
        let mut dist = vec![vec![UNREACHABLE; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = 0;
        }
        for (&(a, b), &d) in s.edges() {
            let (a, b) = (index[&a], index[&b]);
            out[a].push((b, d));
            dist[a][b] = dist[a][b].min(d);
        }
        for k in 0..n {
            for i in 0..n {
                if dist[i][k] == UNREACHABLE {
                    continue;
                }
                for j in 0..n {
                    if dist[k][j] != UNREACHABLE {
                        let via = dist[i][k] + dist[k][j];
                        if via < dist[i][j] {
                            dist[i][j] = via;
                        }
                    }
                }
            }
        }
        for o in &mut out {
            o.sort_by_key(|&(b, _)| ids[b]);
        }
        let min_out = out
            .iter()
            .map(|o| o.iter().map(|&(_, d)| d).min().unwrap_or(UNREACHABLE))
            .collect();
        let stop = ids
            .iter()
            .map(|&v| s.stop_kind(v).zip(s.stop_duration(v)))
            .collect();
        Graph {
            ids,
            index,
            out,
            stop,
            dist,
            min_out,
        }
    }
}

/// One pending subtask of a vehicle chain.
#[derive(Clone, Copy)]
struct Step {
    node: usize,
    halt: Time,
    deadline: Time,
}

/// A single-vehicle route with its occupation keys.
struct Candidate {
    route: Route,
    nodes: Vec<u64>,
    edges: Vec<u64>,
    reversed: Vec<u64>,
}

fn key(a: usize, t: Time) -> u64 {
    ((a as u64) << 32) | u64::from(t)
}

fn edge_key(a: usize, b: usize, n: usize, t: Time) -> u64 {
    key(a * n + b, t)
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn compatible(a: &Candidate, b: &Candidate) -> bool {
    !intersects(&a.nodes, &b.nodes) && !intersects(&a.reversed, &b.edges)
}

struct RouteSearch<'a> {
    g: &'a Graph,
    canon: Canonicalization,
    horizon: Time,
    start: usize,
    chain: Vec<Step>,
    out: Vec<Candidate>,
    route: Vec<(RouteElement, usize, Time)>,
}

impl RouteSearch<'_> {
    /// True if the pending subtasks `k..` can still meet their deadlines
    /// from node `at` at time `now`.
    fn reachable(&self, at: usize, now: Time, k: usize) -> bool {
        let mut t = now;
        let mut v = at;
        for step in &self.chain[k..] {
            let d = self.g.dist[v][step.node];
            if d == UNREACHABLE {
                return false;
            }
            t += d + step.halt;
            if t > step.deadline {
                return false;
            }
            v = step.node;
        }
        true
    }

    fn emit(&mut self, end_at: usize, end: Time) {
        let n = self.g.ids.len();
        let mut nodes = vec![key(self.start, 0)];
        let mut edges = Vec::new();
        let mut reversed = Vec::new();
        let mut prefix: Time = 0;
        for &(e, _, t) in &self.route {
            match e {
                RouteElement::Stop(v) => {
                    let v = self.g.index[&v];
                    nodes.extend((prefix + 1..=t).map(|x| key(v, x)));
                }
                RouteElement::Move(a, b) => {
                    let (a, b) = (self.g.index[&a], self.g.index[&b]);
                    edges.extend((prefix + 1..=t).map(|x| edge_key(a, b, n, x)));
                    reversed.extend((prefix + 1..=t).map(|x| edge_key(b, a, n, x)));
                    nodes.push(key(b, t));
                }
            }
            prefix = t;
        }
        if self.canon.park_until_horizon && matches!(self.g.stop[end_at], Some((StopKind::Park, _)))
        {
            nodes.extend((end + 1..=self.horizon).map(|x| key(end_at, x)));
        }
        nodes.sort_unstable();
        nodes.dedup();
        edges.sort_unstable();
        reversed.sort_unstable();
        self.out.push(Candidate {
            route: self.route.iter().map(|&(e, _, _)| e).collect(),
            nodes,
            edges,
            reversed,
        });
    }

    fn push(&mut self, e: RouteElement, at: usize, t: Time, k: usize) {
        self.route.push((e, at, t));
        self.dfs(at, t, k);
        self.route.pop();
    }

    fn dfs(&mut self, at: usize, now: Time, k: usize) {
        let done = k == self.chain.len();
        let wander = done
            && if self.chain.is_empty() {
                !self.canon.idle_vehicles_empty_route
            } else {
                !self.canon.routes_end_at_last_completion
            };
        if done {
            let ends_parked = matches!(
                self.route.last(),
                Some((RouteElement::Stop(_), v, _))
                    if matches!(self.g.stop[*v], Some((StopKind::Park, _)))
            );
            if !(wander && self.canon.park_until_horizon && ends_parked) {
                self.emit(at, now);
            }
            if !wander {
                return;
            }
        } else if !self.reachable(at, now, k) {
            return;
        }

        let g = self.g;
        let v = g.ids[at];
        for &(b, d) in &g.out[at] {
            let t = now + d;
            if (wander && t > self.horizon) || (!done && !self.reachable(b, t, k)) {
                continue;
            }
            self.push(RouteElement::Move(v, g.ids[b]), b, t, k);
        }
        match g.stop[at] {
            Some((StopKind::Park, d)) => {
                let t = now + d;
                let fits = if wander {
                    let follow = if self.canon.park_until_horizon {
                        g.min_out[at]
                    } else {
                        0
                    };
                    t.saturating_add(follow) <= self.horizon
                } else {
                    self.reachable(at, t, k)
                };
                if fits {
                    self.push(RouteElement::Stop(v), at, t, k);
                }
            }
            Some((StopKind::Halt, d)) if !done && self.chain[k].node == at => {
                let t = now + d;
                if t <= self.chain[k].deadline {
                    self.push(RouteElement::Stop(v), at, t, k + 1);
                }
            }
            _ => {}
        }
    }
}

fn vehicle_routes(
    s: &Scenario,
    g: &Graph,
    canon: Canonicalization,
    c: VehicleId,
    tasks: &[TaskId],
) -> Vec<Candidate> {
    let start = g.index[&s.vehicles()[&c]];
    let chain = tasks
        .iter()
        .flat_map(|t| {
            let task = s.task(*t).expect("known task");
            task.subtasks.iter().map(move |v| Step {
                node: g.index[v],
                halt: s.stop_duration(*v).expect("halt node"),
                deadline: task.deadline,
            })
        })
        .collect();
    let mut search = RouteSearch {
        g,
        canon,
        horizon: s.horizon(),
        start,
        chain,
        out: Vec::new(),
        route: Vec::new(),
    };
    search.dfs(start, 0, 0);
    search.out
}

/// Advances `digits` as an odometer with the first digit most significant.
fn next_assignment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Advances to the next lexicographic permutation.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[i] < v[j])
        .expect("exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Visits every feasible canonical solution in a fixed order and returns
/// the count together with the best vector and its multiplicity.
///
/// Assignments vary with the first task most significant, then per-vehicle
/// task permutations in lexicographic order, then routes in depth-first
/// order (moves by target id before stops).
pub fn enumerate_feasible(
    s: &Scenario,
    canon: Canonicalization,
    limit: Option<u64>,
    mut visit: impl FnMut(&Solution, ObjectiveVector),
) -> EnumerationSummary {
    let mut summary = EnumerationSummary {
        canon,
        count: 0,
        complete: true,
        rejected: 0,
        best: None,
    };
    let vehicles: Vec<VehicleId> = s.vehicles().keys().copied().collect();
    let tasks: Vec<TaskId> = s.tasks().keys().copied().collect();
    if vehicles.is_empty() {
        if tasks.is_empty() {
            let sol = Solution::empty(s);
            let obj = ObjectiveVector::default();
            visit(&sol, obj);
            summary.count = 1;
            summary.best = Some((obj, 1, sol));
        }
        return summary;
    }
    let g = Graph::new(s);
    let mut cache: HashMap<(VehicleId, Vec<TaskId>), Vec<Candidate>> = HashMap::new();
    let mut digits = vec![0usize; tasks.len()];

    'assignments: loop {
        let mut orders: Vec<Vec<TaskId>> = vec![Vec::new(); vehicles.len()];
        for (t, &d) in tasks.iter().zip(&digits) {
            orders[d].push(*t);
        }
        loop {
            for (i, &c) in vehicles.iter().enumerate() {
                cache
                    .entry((c, orders[i].clone()))
                    .or_insert_with(|| vehicle_routes(s, &g, canon, c, &orders[i]));
            }
            let lists: Vec<&Vec<Candidate>> = vehicles
                .iter()
                .zip(&orders)
                .map(|(&c, o)| &cache[&(c, o.clone())])
                .collect();
            if !combine(
                s,
                &vehicles,
                &orders,
                &lists,
                limit,
                &mut summary,
                &mut visit,
            ) {
                summary.complete = false;
                break 'assignments;
            }
            // next combination of per-vehicle permutations, first vehicle
            // most significant
            let mut advanced = false;
            for o in orders.iter_mut().rev() {
                if next_permutation(o) {
                    advanced = true;
                    break;
                }
                o.sort();
            }
            if !advanced {
                break;
            }
        }
        if !next_assignment(&mut digits, vehicles.len()) {
            break;
        }
    }
    summary
}

/// Walks the product of the per-vehicle candidate lists. Returns false once
/// the limit is reached.
fn combine(
    s: &Scenario,
    vehicles: &[VehicleId],
    orders: &[Vec<TaskId>],
    lists: &[&Vec<Candidate>],
    limit: Option<u64>,
    summary: &mut EnumerationSummary,
    visit: &mut impl FnMut(&Solution, ObjectiveVector),
) -> bool {
    if lists.iter().any(|l| l.is_empty()) {
        return true;
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(lists.len());
    let mut next = vec![0usize; lists.len()];
    let mut depth = 0;
    loop {
        if depth == lists.len() {
            let sol = Solution::from_parts(
                s,
                vehicles.iter().copied().zip(orders.iter().cloned()),
                vehicles
                    .iter()
                    .zip(&chosen)
                    .enumerate()
                    .map(|(i, (&c, &k))| (c, lists[i][k].route.clone())),
            );
            match validate(s, &sol).objectives {
                Some(obj) => {
                    if limit.is_some_and(|l| summary.count >= l) {
                        return false;
                    }
                    summary.count += 1;
                    visit(&sol, obj);
                    match &mut summary.best {
                        Some((best, n, _)) if *best == obj => *n += 1,
                        Some((best, _, _)) if *best < obj => {}
                        _ => summary.best = Some((obj, 1, sol)),
                    }
                }
                None => summary.rejected += 1,
            }
            depth -= 1;
            chosen.pop();
            continue;
        }
        let list = lists[depth];
        let mut found = false;
        while next[depth] < list.len() {
            let k = next[depth];
            next[depth] += 1;
            let cand = &list[k];
            if chosen
                .iter()
                .enumerate()
                .all(|(i, &j)| compatible(&lists[i][j], cand))
            {
                chosen.push(k);
                found = true;
                break;
            }
        }
        if found {
            depth += 1;
            if depth < lists.len() {
                next[depth] = 0;
            }
        } else {
            if depth == 0 {
                return true;
            }
            depth -= 1;
            chosen.pop();
        }
    }
}

/// Number of feasible canonical solutions.
pub fn count_feasible(
    s: &Scenario,
    canon: Canonicalization,
    limit: Option<u64>,
) -> Result<u64, OracleError> {
    let summary = enumerate_feasible(s, canon, limit, |_, _| {});
    if summary.complete {
        Ok(summary.count)
    } else {
        Err(OracleError::LimitReached {
            count: summary.count,
        })
    }
}

/// Lexicographically smallest objective vector over all feasible canonical
/// solutions, how many solutions attain it, and the first one in
/// enumeration order.
pub fn best_by_enumeration(
    s: &Scenario,
    canon: Canonicalization,
) -> Result<OracleOptimum, OracleError> {
    let summary = enumerate_feasible(s, canon, None, |_, _| {});
    let (objectives, optima_count, witness) = summary.best.ok_or(OracleError::Infeasible)?;
    Ok(OracleOptimum {
        objectives,
        optima_count,
        witness,
        feasible_count: summary.count,
    })
}
