//! Time-expanded joint routing state with incremental occupation and
//! objective bookkeeping.

use std::sync::Arc;

use thiserror::Error;

use crate::model::{
    GraphIndex, ObjectiveVector, Route, RouteElement, Scenario, Solution, StopKind, TaskId, Time,
    VehicleId,
};

pub(crate) const UNREACHABLE: Time = Time::MAX;

/// Immutable per-scenario data shared by all workers.
#[derive(Debug)]
pub(crate) struct Context {
    pub g: GraphIndex,
    pub slots: usize,
    pub vehicles: Vec<VehicleId>,
    pub starts: Vec<usize>,
    pub tasks: Vec<TaskId>,
    /// Per task, `(node, halt duration)` of each subtask.
    pub steps: Vec<Vec<(usize, Time)>>,
    pub deadlines: Vec<Time>,
    /// Edge indices entering each node.
    pub in_edges: Vec<Vec<usize>>,
    dist: Vec<Time>,
}

impl Context {
    pub fn new(s: &Scenario) -> Self {
        let g = GraphIndex::new(s);
        let n = g.len();
        let dist = g
            .dist
            .iter()
            .flat_map(|row| row.iter().map(|d| d.unwrap_or(UNREACHABLE)))
            .collect();
        let mut in_edges = vec![Vec::new(); n];
        for (i, e) in g.edges.iter().enumerate() {
            in_edges[e.to].push(i);
        }
        let vehicles: Vec<VehicleId> = s.vehicles().keys().copied().collect();
        let starts = s.vehicles().values().map(|&v| g.idx(v)).collect();
        let tasks: Vec<TaskId> = s.tasks().keys().copied().collect();
        let steps = s
            .tasks()
            .values()
            .map(|t| {
                t.subtasks
                    .iter()
                    .map(|&v| (g.idx(v), s.stop_duration(v).expect("halt node")))
                    .collect()
            })
            .collect();
        let deadlines = s.tasks().values().map(|t| t.deadline).collect();
        let horizon = s.horizon();
        Context {
            g,
            slots: horizon as usize + 1,
            vehicles,
            starts,
            tasks,
            steps,
            deadlines,
            in_edges,
            dist,
        }
    }

    pub fn dist(&self, a: usize, b: usize) -> Time {
        self.dist[a * self.g.len() + b]
    }

    /// Lower bound on the route duration of a vehicle serving `chain` (task
    /// indices) from `start`, or `None` if some deadline cannot be met even
    /// without other vehicles.
    pub fn chain_bound(&self, start: usize, chain: &[usize]) -> Option<Time> {
        let mut t: Time = 0;
        let mut at = start;
        for &task in chain {
            for &(v, halt) in &self.steps[task] {
                let d = self.dist(at, v);
                if d == UNREACHABLE {
                    return None;
                }
                t = t.checked_add(d)?.checked_add(halt)?;
                if t > self.deadlines[task] {
                    return None;
                }
                at = v;
            }
        }
        Some(t)
    }
}

#[derive(Clone, Copy, Debug)]
struct PlanStep {
    node: usize,
    halt: Time,
    deadline: Time,
}

/// Subtask chain of one vehicle with precomputed remaining-work bounds.
#[derive(Clone, Debug)]
pub(crate) struct ChainPlan {
    steps: Vec<PlanStep>,
    /// Shortest time from arriving at step `k`'s node to finishing the chain.
    tail: Vec<Time>,
    /// Latest arrival at step `k`'s node that still lets every later step
    /// meet its deadline.
    latest: Vec<i64>,
}

impl ChainPlan {
    pub fn new(ctx: &Context, chain: &[usize]) -> Self {
        let steps: Vec<PlanStep> = chain
            .iter()
            .flat_map(|&task| {
                ctx.steps[task].iter().map(move |&(node, halt)| PlanStep {
                    node,
                    halt,
                    deadline: ctx.deadlines[task],
                })
            })
            .collect();
        let len = steps.len();
        let mut tail = vec![0; len + 1];
        let mut latest = vec![i64::MAX; len + 1];
        for k in (0..len).rev() {
            let s = steps[k];
            let (hop, next_latest) = if k + 1 < len {
                let d = ctx.dist(s.node, steps[k + 1].node);
                (d, latest[k + 1])
            } else {
                (0, i64::MAX)
            };
            tail[k] = s.halt.saturating_add(hop).saturating_add(tail[k + 1]);
            let own = i64::from(s.deadline) - i64::from(s.halt);
            let via = if hop == UNREACHABLE {
                i64::MIN
            } else {
                next_latest.saturating_sub(i64::from(hop) + i64::from(s.halt))
            };
            latest[k] = own.min(via);
        }
        ChainPlan {
            steps,
            tail,
            latest,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }
}

/// One choice for the vehicle being advanced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Opt {
    Halt,
    Park,
    Move(usize),
}

#[derive(Clone, Copy, Debug)]
struct Applied {
    opt: Opt,
    pos: usize,
    time: Time,
    next: usize,
    dcn: u64,
    don: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("task {0} is not assigned")]
    UnassignedTask(TaskId),
    #[error("vehicle {0} is not part of the scenario")]
    UnknownVehicle(VehicleId),
    #[error("element {index} of vehicle {vehicle} cannot be applied")]
    Rejected { vehicle: VehicleId, index: usize },
}

/// Partial joint routing: per-vehicle position, clock and pending subtask,
/// committed occupation and committed crossings and overlaps.
#[derive(Clone, Debug)]
pub struct SearchState {
    ctx: Arc<Context>,
    plans: Vec<ChainPlan>,
    chains: Vec<Vec<usize>>,
    pos: Vec<usize>,
    time: Vec<Time>,
    next: Vec<usize>,
    trail: Vec<Vec<Applied>>,
    node_occ: Vec<bool>,
    edge_cnt: Vec<u16>,
    used: Vec<u16>,
    cn: u64,
    on: u64,
}

impl SearchState {
    pub(crate) fn new(ctx: Arc<Context>) -> Self {
        let n = ctx.g.len();
        let e = ctx.g.edges.len();
        let v = ctx.vehicles.len();
        let slots = ctx.slots;
        let mut state = SearchState {
            plans: vec![ChainPlan::new(&ctx, &[]); v],
            chains: vec![Vec::new(); v],
            pos: ctx.starts.clone(),
            time: vec![0; v],
            next: vec![0; v],
            trail: vec![Vec::new(); v],
            node_occ: vec![false; n * slots],
            edge_cnt: vec![0; e * slots],
            used: vec![0; v * e],
            cn: 0,
            on: 0,
            ctx,
        };
        for c in 0..v {
            let at = state.pos[c];
            state.node_occ[at * slots] = true;
        }
        state
    }

    /// Clears all routes and installs the task chains of a new root.
    pub(crate) fn reset(&mut self, chains: Vec<Vec<usize>>) {
        for c in 0..self.trail.len() {
            while !self.trail[c].is_empty() {
                self.undo(c);
            }
        }
        self.plans = chains
            .iter()
            .map(|ch| ChainPlan::new(&self.ctx, ch))
            .collect();
        self.chains = chains;
    }

    /// Reconstructs the state reached by the routes of `partial`, which are
    /// read as route prefixes of the vehicles serving `partial`'s task
    /// orders.
    pub fn replay(s: &Scenario, partial: &Solution) -> Result<Self, ReplayError> {
        let ctx = Arc::new(Context::new(s));
        let task_index = |t: TaskId| ctx.tasks.iter().position(|&x| x == t);
        let mut chains = vec![Vec::new(); ctx.vehicles.len()];
        for (&c, tasks) in &partial.vehicle_task_order {
            let ci = ctx
                .vehicles
                .iter()
                .position(|&x| x == c)
                .ok_or(ReplayError::UnknownVehicle(c))?;
            for &t in tasks {
                chains[ci].push(task_index(t).ok_or(ReplayError::UnassignedTask(t))?);
            }
        }
        for (i, &t) in ctx.tasks.iter().enumerate() {
            if !chains.iter().any(|ch| ch.contains(&i)) {
                return Err(ReplayError::UnassignedTask(t));
            }
        }
        let mut state = SearchState::new(Arc::clone(&ctx));
        state.reset(chains);
        for (ci, &c) in ctx.vehicles.iter().enumerate() {
            for (i, e) in partial.route(c).iter().enumerate() {
                let rejected = ReplayError::Rejected {
                    vehicle: c,
                    index: i + 1,
                };
                let opt = state.opt_for(ci, e).ok_or(rejected.clone())?;
                if !state.apply(ci, opt) {
                    return Err(rejected);
                }
            }
        }
        Ok(state)
    }

    fn opt_for(&self, c: usize, e: &RouteElement) -> Option<Opt> {
        let g = &self.ctx.g;
        match *e {
            RouteElement::Move(a, b) => {
                let (a, b) = (g.try_idx(a)?, g.try_idx(b)?);
                (a == self.pos[c]).then_some(())?;
                g.edge_between(a, b).map(Opt::Move)
            }
            RouteElement::Stop(v) => {
                let v = g.try_idx(v)?;
                (v == self.pos[c]).then_some(())?;
                match g.stop[v]? {
                    (StopKind::Park, _) => Some(Opt::Park),
                    (StopKind::Halt, _) => Some(Opt::Halt),
                }
            }
        }
    }

    pub(crate) fn finished(&self, c: usize) -> bool {
        self.next[c] >= self.plans[c].len()
    }

    /// Unfinished vehicle with the smallest clock, ties by id.
    pub(crate) fn next_vehicle(&self) -> Option<usize> {
        (0..self.pos.len())
            .filter(|&c| !self.finished(c))
            .min_by_key(|&c| (self.time[c], c))
    }

    /// Shortest remaining time for vehicle `c`, ignoring other vehicles.
    fn remaining(&self, c: usize) -> Time {
        let plan = &self.plans[c];
        let k = self.next[c];
        if k >= plan.len() {
            return 0;
        }
        self.ctx
            .dist(self.pos[c], plan.steps[k].node)
            .saturating_add(plan.tail[k])
    }

    fn remaining_from(&self, c: usize, at: usize, k: usize) -> Time {
        let plan = &self.plans[c];
        if k >= plan.len() {
            return 0;
        }
        self.ctx
            .dist(at, plan.steps[k].node)
            .saturating_add(plan.tail[k])
    }

    /// Admissible lower bound on the objectives of every completion.
    pub fn bound(&self) -> ObjectiveVector {
        let mut ms = 0u64;
        let mut rl = 0u64;
        for c in 0..self.pos.len() {
            let end = u64::from(self.time[c]) + u64::from(self.remaining(c));
            ms = ms.max(end);
            rl += end;
        }
        ObjectiveVector::new(ms, rl, self.cn, self.on)
    }

    /// Options for vehicle `c`, most promising first.
    pub(crate) fn options(&self, c: usize) -> Vec<Opt> {
        let g = &self.ctx.g;
        let at = self.pos[c];
        let t = self.time[c];
        let k = self.next[c];
        let mut opts: Vec<(Time, u8, u32, Opt)> = Vec::new();
        match g.stop[at] {
            Some((StopKind::Halt, d)) if self.plans[c].steps[k].node == at => {
                let key = t
                    .saturating_add(d)
                    .saturating_add(self.remaining_from(c, at, k + 1));
                opts.push((key, 0, 0, Opt::Halt));
            }
            Some((StopKind::Park, d)) => {
                let key = t
                    .saturating_add(d)
                    .saturating_add(self.remaining_from(c, at, k));
                opts.push((key, 2, 0, Opt::Park));
            }
            _ => {}
        }
        for &e in &g.out[at] {
            let edge = g.edges[e];
            let key = t
                .saturating_add(edge.duration)
                .saturating_add(self.remaining_from(c, edge.to, k));
            opts.push((key, 1, g.node_ids[edge.to].0, Opt::Move(e)));
        }
        opts.sort_by_key(|&(key, rank, id, _)| (key, rank, id));
        opts.into_iter().map(|(_, _, _, o)| o).collect()
    }

    fn crossing(&self, c: usize, d: usize, node: usize, extra: Option<usize>) -> bool {
        let e_count = self.ctx.g.edges.len();
        let uses =
            |v: usize, e: usize| self.used[v * e_count + e] > 0 || (v == c && extra == Some(e));
        let mut pc = self.ctx.in_edges[node].iter().filter(|&&e| uses(c, e));
        let mut pd = self.ctx.in_edges[node].iter().filter(|&&e| uses(d, e));
        let (Some(&c1), Some(&d1)) = (pc.next(), pd.next()) else {
            return false;
        };
        let single_c = pc.next().is_none();
        let single_d = pd.next().is_none();
        !(single_c && single_d && c1 == d1)
    }

    /// Applies `opt` to vehicle `c` if it keeps the state conflict-free and
    /// every pending deadline reachable.
    pub(crate) fn apply(&mut self, c: usize, opt: Opt) -> bool {
        let ctx = Arc::clone(&self.ctx);
        let g = &ctx.g;
        let slots = ctx.slots;
        let at = self.pos[c];
        let t = self.time[c];
        let k = self.next[c];
        let plan = &self.plans[c];
        if k >= plan.len() {
            return false;
        }
        let (new_pos, new_time, new_next) = match opt {
            Opt::Halt => {
                if plan.steps[k].node != at {
                    return false;
                }
                (at, t + plan.steps[k].halt, k + 1)
            }
            Opt::Park => match g.stop[at] {
                Some((StopKind::Park, d)) => (at, t + d, k),
                _ => return false,
            },
            Opt::Move(e) => {
                let edge = g.edges[e];
                if edge.from != at {
                    return false;
                }
                (edge.to, t + edge.duration, k)
            }
        };
        if new_next < plan.len() {
            let d = ctx.dist(new_pos, plan.steps[new_next].node);
            if d == UNREACHABLE || i64::from(new_time) + i64::from(d) > plan.latest[new_next] {
                return false;
            }
        } else if new_time > plan.steps[k].deadline {
            return false;
        }
        if new_time as usize >= slots {
            return false;
        }
        let (t0, t1) = (t as usize + 1, new_time as usize);
        let (mut dcn, mut don) = (0, 0);
        match opt {
            Opt::Halt | Opt::Park => {
                let base = at * slots;
                if self.node_occ[base + t0..=base + t1].iter().any(|&b| b) {
                    return false;
                }
                self.node_occ[base + t0..=base + t1].fill(true);
            }
            Opt::Move(e) => {
                let edge = g.edges[e];
                if self.node_occ[edge.to * slots + t1] {
                    return false;
                }
                if let Some(r) = edge.reverse {
                    let base = r * slots;
                    if self.edge_cnt[base + t0..=base + t1].iter().any(|&n| n > 0) {
                        return false;
                    }
                }
                self.node_occ[edge.to * slots + t1] = true;
                let base = e * slots;
                for x in &mut self.edge_cnt[base + t0..=base + t1] {
                    *x += 1;
                }
                let e_count = g.edges.len();
                if self.used[c * e_count + e] == 0 {
                    for d in 0..self.pos.len() {
                        if d == c {
                            continue;
                        }
                        don += u64::from(self.used[d * e_count + e] > 0);
                        if let Some(r) = edge.reverse {
                            don += u64::from(self.used[d * e_count + r] > 0);
                        }
                        let before = self.crossing(c, d, edge.to, None);
                        let after = self.crossing(c, d, edge.to, Some(e));
                        dcn += u64::from(after && !before);
                    }
                }
                self.used[c * e_count + e] += 1;
            }
        }
        self.cn += dcn;
        self.on += don;
        self.trail[c].push(Applied {
            opt,
            pos: at,
            time: t,
            next: k,
            dcn,
            don,
        });
        self.pos[c] = new_pos;
        self.time[c] = new_time;
        self.next[c] = new_next;
        true
    }

    /// Reverts the last option applied to vehicle `c`.
    pub(crate) fn undo(&mut self, c: usize) {
        let Some(a) = self.trail[c].pop() else { return };
        let slots = self.ctx.slots;
        let (t0, t1) = (a.time as usize + 1, self.time[c] as usize);
        match a.opt {
            Opt::Halt | Opt::Park => {
                let base = a.pos * slots;
                self.node_occ[base + t0..=base + t1].fill(false);
            }
            Opt::Move(e) => {
                let edge = self.ctx.g.edges[e];
                self.node_occ[edge.to * slots + t1] = false;
                let base = e * slots;
                for x in &mut self.edge_cnt[base + t0..=base + t1] {
                    *x -= 1;
                }
                self.used[c * self.ctx.g.edges.len() + e] -= 1;
            }
        }
        self.cn -= a.dcn;
        self.on -= a.don;
        self.pos[c] = a.pos;
        self.time[c] = a.time;
        self.next[c] = a.next;
    }

    /// Objectives of a state in which every vehicle has finished.
    pub(crate) fn objectives(&self) -> ObjectiveVector {
        self.bound()
    }

    pub(crate) fn route(&self, c: usize) -> Route {
        let g = &self.ctx.g;
        self.trail[c]
            .iter()
            .map(|a| match a.opt {
                Opt::Halt | Opt::Park => RouteElement::Stop(g.node_ids[a.pos]),
                Opt::Move(e) => {
                    let edge = g.edges[e];
                    RouteElement::Move(g.node_ids[edge.from], g.node_ids[edge.to])
                }
            })
            .collect()
    }

    /// Solution formed by the current routes and task chains.
    pub fn to_solution(&self, s: &Scenario) -> Solution {
        let ctx = &self.ctx;
        Solution::from_parts(
            s,
            self.chains
                .iter()
                .enumerate()
                .map(|(c, ch)| (ctx.vehicles[c], ch.iter().map(|&t| ctx.tasks[t]).collect())),
            (0..ctx.vehicles.len()).map(|c| (ctx.vehicles[c], self.route(c))),
        )
    }
}

/// Admissible lower bound on the objective vector of every feasible
/// completion of `state`.
pub fn bound(state: &SearchState) -> ObjectiveVector {
    state.bound()
}
