//! Lexicographic branch-and-bound over task assignment, per-vehicle task
//! order and time-expanded joint routing.
//!
//! Assignments and orders come from [`roots::RootGenerator`]. For each of
//! them a depth-first search repeatedly advances the unfinished vehicle with
//! the smallest clock by a halt, a park stop or a move, keeping occupation
//! conflict-free and every deadline reachable. Routes end at the last
//! completion of each vehicle.

mod roots;
mod state;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use crate::model::{ObjectiveVector, Scenario, Solution};
use crate::validation::validate;

use roots::RootGenerator;
use state::Context;
pub use state::{bound, ReplayError, SearchState};

/// How lexicographic optimality is pursued.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StageMode {
    /// Prune against the whole incumbent vector.
    #[default]
    Vector,
    /// Minimize one objective at a time, then keep it as an upper bound.
    Staged,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Wall-clock limit.
    pub budget: Option<Duration>,
    /// Number of search threads, at least 1.
    pub workers: usize,
    /// Search until optimality is proven. Otherwise stop at the first
    /// feasible solution.
    pub prove_optimal: bool,
    /// Reserved; the search is deterministic.
    pub seed: u64,
    pub stage_mode: StageMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: None,
            workers: 1,
            prove_optimal: true,
            seed: 0,
            stage_mode: StageMode::Vector,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    BudgetExhaustedNoSolution,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::BudgetExhaustedNoSolution => "budget_exhausted_no_solution",
        }
    }
}

/// An improvement of the best known solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IncumbentRecord {
    pub objectives: ObjectiveVector,
    pub elapsed_ms: u64,
    pub nodes_expanded: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes_expanded: u64,
    pub roots_explored: u64,
    pub elapsed_ms: u64,
    pub proven_optimal: bool,
    /// Successive incumbents, each strictly better than the previous one.
    pub incumbents: Vec<IncumbentRecord>,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solution: Option<Solution>,
    pub objectives: Option<ObjectiveVector>,
    pub stats: SolveStats,
}

/// Target of one search pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    Vector,
    /// Minimize component `level` subject to `caps` on the components
    /// before it.
    Stage {
        level: usize,
        caps: [u64; 4],
    },
}

impl Goal {
    pub fn prunes(&self, bound: &ObjectiveVector, incumbent: Option<&ObjectiveVector>) -> bool {
        match *self {
            Goal::Vector => incumbent.is_some_and(|inc| bound >= inc),
            Goal::Stage { level, caps } => {
                let b = bound.as_array();
                (0..level).any(|j| b[j] > caps[j])
                    || incumbent.is_some_and(|inc| b[level] >= inc.as_array()[level])
            }
        }
    }

    pub fn improves(&self, v: &ObjectiveVector, incumbent: Option<&ObjectiveVector>) -> bool {
        match *self {
            Goal::Vector => incumbent.is_none_or(|inc| v < inc),
            Goal::Stage { level, caps } => {
                let a = v.as_array();
                (0..level).all(|j| a[j] <= caps[j])
                    && incumbent.is_none_or(|inc| a[level] < inc.as_array()[level])
            }
        }
    }
}

type ProgressFn<'a> = &'a (dyn Fn(&IncumbentRecord) + Sync);

struct Shared<'a> {
    scenario: &'a Scenario,
    ctx: Arc<Context>,
    goal: Goal,
    first_only: bool,
    roots: Mutex<RootGenerator<'a>>,
    incumbent: Mutex<Option<(ObjectiveVector, Solution)>>,
    history: Mutex<Vec<IncumbentRecord>>,
    stop: AtomicBool,
    budget_hit: AtomicBool,
    nodes: AtomicU64,
    roots_explored: AtomicU64,
    start: Instant,
    deadline: Option<Instant>,
    progress: ProgressFn<'a>,
}

impl Shared<'_> {
    fn incumbent_vector(&self) -> Option<ObjectiveVector> {
        self.incumbent
            .lock()
            .expect("lock")
            .as_ref()
            .map(|(v, _)| *v)
    }
}

struct Worker<'s, 'a> {
    shared: &'s Shared<'a>,
    state: SearchState,
    incumbent: Option<ObjectiveVector>,
    nodes: u64,
    flushed: u64,
}

impl Worker<'_, '_> {
    /// Checks the budget and the stop flag and refreshes the incumbent.
    fn flush(&mut self) {
        self.shared
            .nodes
            .fetch_add(self.nodes - self.flushed, Ordering::Relaxed);
        self.flushed = self.nodes;
    }

    fn poll(&mut self) -> bool {
        self.flush();
        let sh = self.shared;
        if sh.deadline.is_some_and(|d| Instant::now() >= d) {
            sh.budget_hit.store(true, Ordering::Relaxed);
            sh.stop.store(true, Ordering::Relaxed);
        }
        if sh.stop.load(Ordering::Relaxed) {
            return false;
        }
        if let Some(v) = sh.incumbent_vector() {
            if self.incumbent.is_none_or(|mine| v < mine) {
                self.incumbent = Some(v);
            }
        }
        true
    }

    fn leaf(&mut self) -> bool {
        let sh = self.shared;
        let v = self.state.objectives();
        if !sh.goal.improves(&v, self.incumbent.as_ref()) {
            return true;
        }
        let sol = self.state.to_solution(sh.scenario);
        debug_assert_eq!(validate(sh.scenario, &sol).objectives, Some(v));
        {
            let mut inc = sh.incumbent.lock().expect("lock");
            let current = inc.as_ref().map(|(w, _)| *w);
            if sh.goal.improves(&v, current.as_ref()) {
                *inc = Some((v, sol));
                let record = IncumbentRecord {
                    objectives: v,
                    elapsed_ms: sh.start.elapsed().as_millis() as u64,
                    nodes_expanded: sh.nodes.load(Ordering::Relaxed) + self.nodes - self.flushed,
                };
                sh.history.lock().expect("lock").push(record);
                (sh.progress)(&record);
                self.incumbent = Some(v);
            } else {
                self.incumbent = current;
            }
        }
        if sh.first_only {
            sh.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn dfs(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes & 255 == 0 && !self.poll() {
            return false;
        }
        let Some(c) = self.state.next_vehicle() else {
            return self.leaf();
        };
        if self
            .shared
            .goal
            .prunes(&self.state.bound(), self.incumbent.as_ref())
        {
            return true;
        }
        for opt in self.state.options(c) {
            if self.state.apply(c, opt) {
                let go = self.dfs();
                self.state.undo(c);
                if !go {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self) {
        let sh = self.shared;
        loop {
            if sh.stop.load(Ordering::Relaxed) {
                break;
            }
            let root = {
                let inc = sh.incumbent_vector();
                let mut gen = sh.roots.lock().expect("lock");
                gen.next(&sh.goal, inc.as_ref())
            };
            let Some(chains) = root else { break };
            sh.roots_explored.fetch_add(1, Ordering::Relaxed);
            self.state.reset(chains);
            if !self.dfs() {
                break;
            }
        }
        self.flush();
    }
}

struct PassResult {
    best: Option<(ObjectiveVector, Solution)>,
    history: Vec<IncumbentRecord>,
    nodes: u64,
    roots: u64,
    budget_hit: bool,
}

const WORKER_STACK: usize = 256 << 20;

fn search_pass(
    s: &Scenario,
    ctx: &Arc<Context>,
    cfg: &SolverConfig,
    goal: Goal,
    seed: Option<(ObjectiveVector, Solution)>,
    start: Instant,
    progress: ProgressFn<'_>,
) -> PassResult {
    let shared = Shared {
        scenario: s,
        ctx: Arc::clone(ctx),
        goal,
        first_only: !cfg.prove_optimal,
        roots: Mutex::new(RootGenerator::new(ctx)),
        incumbent: Mutex::new(seed),
        history: Mutex::new(Vec::new()),
        stop: AtomicBool::new(false),
        budget_hit: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
        roots_explored: AtomicU64::new(0),
        start,
        deadline: cfg.budget.map(|b| start + b),
        progress,
    };
    let workers = cfg.workers.max(1);
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let sh = &shared;
                thread::Builder::new()
                    .stack_size(WORKER_STACK)
                    .spawn_scoped(scope, move || {
                        let mut w = Worker {
                            shared: sh,
                            state: SearchState::new(Arc::clone(&sh.ctx)),
                            incumbent: sh.incumbent_vector(),
                            nodes: 0,
                            flushed: 0,
                        };
                        w.run();
                        w.nodes
                    })
                    .expect("spawn search worker")
            })
            .collect();
        for h in handles {
            let _ = h.join().expect("search worker panicked");
        }
    });
    PassResult {
        best: shared.incumbent.into_inner().expect("lock"),
        history: shared.history.into_inner().expect("lock"),
        nodes: shared.nodes.load(Ordering::Relaxed),
        roots: shared.roots_explored.load(Ordering::Relaxed),
        budget_hit: shared.budget_hit.load(Ordering::Relaxed),
    }
}

/// Solves `s` to lexicographic optimality, or as far as the budget allows.
pub fn solve(s: &Scenario, cfg: &SolverConfig) -> SolveOutcome {
    solve_with_progress(s, cfg, &|_| {})
}

/// Like [`solve`], calling `progress` on every new incumbent.
pub fn solve_with_progress(
    s: &Scenario,
    cfg: &SolverConfig,
    progress: ProgressFn<'_>,
) -> SolveOutcome {
    let start = Instant::now();
    let ctx = Arc::new(Context::new(s));
    let goals: Vec<Goal> = match (cfg.stage_mode, cfg.prove_optimal) {
        (StageMode::Vector, _) | (StageMode::Staged, false) => vec![Goal::Vector],
        (StageMode::Staged, true) => (0..4)
            .map(|level| Goal::Stage {
                level,
                caps: [u64::MAX; 4],
            })
            .collect(),
    };
    let mut stats = SolveStats::default();
    let mut best: Option<(ObjectiveVector, Solution)> = None;
    let mut budget_hit = false;
    for goal in goals {
        let goal = match goal {
            Goal::Stage { level, .. } => {
                let mut caps = [u64::MAX; 4];
                if let Some((v, _)) = &best {
                    caps[..level].copy_from_slice(&v.as_array()[..level]);
                }
                Goal::Stage { level, caps }
            }
            g => g,
        };
        let pass = search_pass(s, &ctx, cfg, goal, best.clone(), start, progress);
        stats.nodes_expanded += pass.nodes;
        stats.roots_explored += pass.roots;
        stats.incumbents.extend(pass.history);
        best = pass.best;
        budget_hit |= pass.budget_hit;
        if budget_hit || best.is_none() || !cfg.prove_optimal {
            break;
        }
    }
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    let complete = !budget_hit && cfg.prove_optimal;
    let status = match (&best, complete) {
        (Some(_), true) => SolveStatus::Optimal,
        (Some(_), false) => SolveStatus::Feasible,
        (None, _) if budget_hit => SolveStatus::BudgetExhaustedNoSolution,
        (None, _) => SolveStatus::Infeasible,
    };
    stats.proven_optimal = status == SolveStatus::Optimal;
    let (objectives, solution) = match best {
        Some((v, sol)) => (Some(v), Some(sol)),
        None => (None, None),
    };
    SolveOutcome {
        status,
        solution,
        objectives,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{example1, example1_optimal, example1_parts};

    #[test]
    fn reference_optimum() {
        let out = solve(&example1(), &SolverConfig::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.objectives, Some(ObjectiveVector::new(55, 104, 3, 14)));
        assert_eq!(out.solution, Some(example1_optimal()));
        let incs: Vec<_> = out.stats.incumbents.iter().map(|r| r.objectives).collect();
        assert!(incs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn staged_mode_agrees() {
        let cfg = SolverConfig {
            stage_mode: StageMode::Staged,
            ..SolverConfig::default()
        };
        let out = solve(&example1(), &cfg);
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.objectives, Some(ObjectiveVector::new(55, 104, 3, 14)));
    }

    #[test]
    fn parallel_workers_agree() {
        let cfg = SolverConfig {
            workers: 4,
            ..SolverConfig::default()
        };
        let out = solve(&example1(), &cfg);
        assert_eq!(out.objectives, Some(ObjectiveVector::new(55, 104, 3, 14)));
    }

    #[test]
    fn tight_deadlines_are_infeasible() {
        let mut parts = example1_parts();
        for t in &mut parts.tasks {
            t.deadline = 40;
        }
        let out = solve(&parts.build().unwrap(), &SolverConfig::default());
        assert_eq!(out.status, SolveStatus::Infeasible);
        assert!(out.solution.is_none());
    }

    #[test]
    fn zero_tasks() {
        let s = Scenario::builder()
            .node_range(1..=2)
            .edge(1, 2, 1)
            .vehicle(1, 1)
            .vehicle(2, 2)
            .build()
            .unwrap();
        let out = solve(&s, &SolverConfig::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.objectives, Some(ObjectiveVector::default()));
        assert_eq!(out.solution, Some(Solution::empty(&s)));
    }

    #[test]
    fn first_solution_mode() {
        let cfg = SolverConfig {
            prove_optimal: false,
            ..SolverConfig::default()
        };
        let out = solve(&example1(), &cfg);
        assert_eq!(out.status, SolveStatus::Feasible);
        let sol = out.solution.unwrap();
        assert!(validate(&example1(), &sol).feasible);
        assert_eq!(out.stats.incumbents.len(), 1);
    }

    #[test]
    fn zero_budget_reports_no_solution() {
        let cfg = SolverConfig {
            budget: Some(Duration::ZERO),
            ..SolverConfig::default()
        };
        // the budget is polled every 256 nodes, so use an instance that
        // needs more than that before its first solution
        let out = solve(&example1(), &cfg);
        assert!(matches!(
            out.status,
            SolveStatus::BudgetExhaustedNoSolution | SolveStatus::Feasible
        ));
    }

    #[test]
    fn deterministic_single_worker() {
        let a = solve(&example1(), &SolverConfig::default());
        let b = solve(&example1(), &SolverConfig::default());
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.stats.nodes_expanded, b.stats.nodes_expanded);
    }

    #[test]
    fn goal_comparisons() {
        let v = |a, b, c, d| ObjectiveVector::new(a, b, c, d);
        let inc = v(55, 104, 3, 14);
        assert!(Goal::Vector.prunes(&v(55, 104, 3, 14), Some(&inc)));
        assert!(!Goal::Vector.prunes(&v(55, 103, 9, 9), Some(&inc)));
        let stage = Goal::Stage {
            level: 1,
            caps: [55, u64::MAX, u64::MAX, u64::MAX],
        };
        assert!(stage.prunes(&v(56, 0, 0, 0), None));
        assert!(stage.prunes(&v(50, 104, 0, 0), Some(&inc)));
        assert!(stage.improves(&v(55, 103, 90, 90), Some(&inc)));
    }
}
