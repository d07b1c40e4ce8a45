//! Instance generator and benchmark harness.
//!
//! Layouts are a one-way ring over the corridor nodes, park bays attached to
//! the ring as two-way stubs, and random cross-links (some of them two-way)
//! until the requested edge count is reached. Task deadlines are the slack
//! factor times the completion time each task would have if tasks were
//! served round-robin, serially and without interference.

use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::baseline::greedy_round_robin;
use crate::fact_io::parse_facts;
use crate::model::{min_completion_time, NodeId, Scenario, ScenarioParts, Time};
use crate::optimizer::{solve, SolverConfig};
use crate::oracle::{enumerate_feasible, Canonicalization};
use crate::validation::validate;

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub nodes: usize,
    pub edges: usize,
    /// Share of corridor (non-park) nodes that are halt nodes.
    pub halt_fraction: f64,
    /// Share of all nodes that are park bays.
    pub park_fraction: f64,
    pub tasks: usize,
    /// Inclusive range of subtasks per task.
    pub subtasks: (usize, usize),
    /// Exact subtask total, spread over the tasks within `subtasks`.
    pub subtasks_total: Option<usize>,
    pub vehicles: usize,
    pub deadline_slack: f64,
    /// Chance that a cross-link is added in both directions.
    pub bidirectional_fraction: f64,
    /// Inclusive duration ranges.
    pub move_duration: (Time, Time),
    pub halt_duration: (Time, Time),
    pub park_duration: (Time, Time),
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams::full_cycle(1)
    }
}

impl GenParams {
    /// 25 locations, 35 connections, 10 tasks with 39 subtasks, 4 vehicles.
    pub fn full_cycle(seed: u64) -> Self {
        GenParams {
            nodes: 25,
            edges: 35,
            halt_fraction: 0.5,
            park_fraction: 0.12,
            tasks: 10,
            subtasks: (3, 5),
            subtasks_total: Some(39),
            vehicles: 4,
            deadline_slack: 1.6,
            bidirectional_fraction: 0.3,
            move_duration: (2, 6),
            halt_duration: (1, 3),
            park_duration: (1, 3),
            seed,
        }
    }

    /// Instances small enough for exhaustive enumeration.
    pub fn small(seed: u64) -> Self {
        GenParams {
            nodes: 5,
            edges: 7,
            halt_fraction: 0.6,
            park_fraction: 0.2,
            tasks: 2,
            subtasks: (1, 2),
            subtasks_total: None,
            vehicles: 2,
            deadline_slack: 1.6,
            bidirectional_fraction: 0.5,
            move_duration: (1, 3),
            halt_duration: (1, 2),
            park_duration: (1, 2),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), GenError> {
    if ok {
        Ok(())
    } else {
        Err(GenError::InfeasibleParams(what()))
    }
}

fn pick(rng: &mut ChaCha8Rng, (lo, hi): (Time, Time)) -> Time {
    rng.gen_range(lo..=hi)
}

/// Generates a scenario from `p`. Equal parameters give equal scenarios.
pub fn generate(p: &GenParams) -> Result<Scenario, GenError> {
    let fraction = |x: f64| (0.0..=1.0).contains(&x);
    check(p.nodes >= 2, || "need at least 2 nodes".into())?;
    check(p.vehicles >= 1, || "need at least 1 vehicle".into())?;
    check(p.vehicles <= p.nodes, || {
        format!(
            "{} vehicles need distinct starts among {} nodes",
            p.vehicles, p.nodes
        )
    })?;
    check(
        fraction(p.halt_fraction)
            && fraction(p.park_fraction)
            && fraction(p.bidirectional_fraction),
        || "fractions must lie in [0, 1]".into(),
    )?;
    check(p.deadline_slack >= 1.0, || {
        "deadline slack must be at least 1".into()
    })?;
    check(p.subtasks.0 >= 1 && p.subtasks.0 <= p.subtasks.1, || {
        "subtask range must be non-empty and positive".into()
    })?;
    for (name, (lo, hi)) in [
        ("move", p.move_duration),
        ("halt", p.halt_duration),
        ("park", p.park_duration),
    ] {
        check(lo >= 1 && lo <= hi, || {
            format!("{name} durations must be a positive range")
        })?;
    }
    if let Some(total) = p.subtasks_total {
        check(
            p.tasks * p.subtasks.0 <= total && total <= p.tasks * p.subtasks.1,
            || format!("{total} subtasks do not fit {} tasks", p.tasks),
        )?;
    }

    let parks = ((p.park_fraction * p.nodes as f64).round() as usize).min(p.nodes - 2);
    let core = p.nodes - parks;
    let halts = ((p.halt_fraction * core as f64).round() as usize).min(core);
    let halts = if p.tasks > 0 { halts.max(1) } else { halts };
    let fixed = core + 2 * parks;
    check(p.edges >= fixed, || {
        format!(
            "{} edges cannot connect a ring of {core} with {parks} bays",
            p.edges
        )
    })?;
    check(p.edges <= fixed + core * (core - 2), || {
        format!(
            "{} edges exceed what {core} corridor nodes can hold",
            p.edges
        )
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let id = |i: usize| i as u32 + 1;
    let mut parts = ScenarioParts::default().node_range(1..=p.nodes as u32);
    let mut present = vec![vec![false; p.nodes]; p.nodes];
    let mut edges = Vec::new();
    let mut add = |a: usize, b: usize, present: &mut Vec<Vec<bool>>| {
        present[a][b] = true;
        edges.push((a, b));
    };
    for i in 0..core {
        add(i, (i + 1) % core, &mut present);
    }
    for b in core..p.nodes {
        let r = rng.gen_range(0..core);
        add(r, b, &mut present);
        add(b, r, &mut present);
    }
    let mut candidates: Vec<(usize, usize)> = (0..core)
        .flat_map(|a| (0..core).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && !present[a][b])
        .collect();
    candidates.shuffle(&mut rng);
    let mut budget = p.edges - fixed;
    for (a, b) in candidates {
        if budget == 0 {
            break;
        }
        if present[a][b] {
            continue;
        }
        add(a, b, &mut present);
        budget -= 1;
        if budget > 0 && !present[b][a] && rng.gen_bool(p.bidirectional_fraction) {
            add(b, a, &mut present);
            budget -= 1;
        }
    }
    for (a, b) in edges {
        parts = parts.edge(id(a), id(b), pick(&mut rng, p.move_duration).into());
    }

    let mut corridor: Vec<usize> = (0..core).collect();
    corridor.shuffle(&mut rng);
    let mut halt_nodes: Vec<usize> = corridor[..halts].to_vec();
    halt_nodes.sort_unstable();
    for &h in &halt_nodes {
        parts = parts.halt(id(h), pick(&mut rng, p.halt_duration).into());
    }
    for b in core..p.nodes {
        parts = parts.park(id(b), pick(&mut rng, p.park_duration).into());
    }

    let sizes: Vec<usize> = match p.subtasks_total {
        Some(total) => {
            let mut sizes = vec![p.subtasks.0; p.tasks];
            let mut extra = total - p.tasks * p.subtasks.0;
            while extra > 0 {
                let t = rng.gen_range(0..p.tasks);
                if sizes[t] < p.subtasks.1 {
                    sizes[t] += 1;
                    extra -= 1;
                }
            }
            sizes
        }
        None => (0..p.tasks)
            .map(|_| rng.gen_range(p.subtasks.0..=p.subtasks.1))
            .collect(),
    };
    let sequences: Vec<Vec<NodeId>> = sizes
        .iter()
        .map(|&n| {
            let mut seq: Vec<usize> = Vec::with_capacity(n);
            while seq.len() < n {
                let h = *halt_nodes.choose(&mut rng).expect("halt node");
                if halt_nodes.len() == 1 || seq.last() != Some(&h) {
                    seq.push(h);
                }
            }
            seq.into_iter().map(|h| NodeId(id(h))).collect()
        })
        .collect();

    let mut all: Vec<usize> = (0..p.nodes).collect();
    all.shuffle(&mut rng);
    let starts: Vec<NodeId> = all[..p.vehicles].iter().map(|&v| NodeId(id(v))).collect();
    for (c, &v) in starts.iter().enumerate() {
        parts = parts.vehicle(id(c), v.0);
    }

    // deadlines follow the round-robin serial schedule
    let layout = parts
        .clone()
        .build()
        .map_err(|e| GenError::InfeasibleParams(e.to_string()))?;
    let mut at = starts.clone();
    let mut clock = vec![0 as Time; p.vehicles];
    for (t, seq) in sequences.iter().enumerate() {
        let c = t % p.vehicles;
        let d = min_completion_time(&layout, at[c], seq)
            .map_err(|e| GenError::InfeasibleParams(e.to_string()))?;
        clock[c] += d;
        at[c] = *seq.last().expect("non-empty task");
        let deadline = (p.deadline_slack * f64::from(clock[c])).ceil() as i64;
        let nodes: Vec<u32> = seq.iter().map(|v| v.0).collect();
        parts = parts.task(id(t), deadline, &nodes);
    }
    parts
        .build()
        .map_err(|e| GenError::InfeasibleParams(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Solver {
    Baseline,
    Optimizer,
    Oracle,
}

impl Solver {
    pub fn name(&self) -> &'static str {
        match self {
            Solver::Baseline => "baseline",
            Solver::Optimizer => "optimizer",
            Solver::Oracle => "oracle",
        }
    }
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(Solver::Baseline),
            "optimizer" => Ok(Solver::Optimizer),
            "oracle" => Ok(Solver::Oracle),
            other => Err(format!("unknown solver {other:?}")),
        }
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub solver: String,
    pub status: String,
    pub ms: Option<u64>,
    pub rl: Option<u64>,
    pub cn: Option<u64>,
    pub on: Option<u64>,
    pub wall_ms: u64,
    pub nodes_expanded: Option<u64>,
    pub proven_optimal: bool,
}

pub const CSV_HEADER: &str =
    "instance,solver,status,ms,rl,cn,on,wall_ms,nodes_expanded,proven_optimal";

/// Enumeration cap for oracle cells.
pub const ORACLE_LIMIT: u64 = 5_000_000;

fn run_cell(
    name: &str,
    scenario: &Result<Scenario, String>,
    solver: Solver,
    cfg: &SolverConfig,
) -> BenchRecord {
    let mut rec = BenchRecord {
        instance: name.to_string(),
        solver: solver.name().to_string(),
        status: "error".into(),
        ms: None,
        rl: None,
        cn: None,
        on: None,
        wall_ms: 0,
        nodes_expanded: None,
        proven_optimal: false,
    };
    let Ok(s) = scenario else { return rec };
    let start = Instant::now();
    let mut objectives = None;
    match solver {
        Solver::Optimizer => {
            let out = solve(s, cfg);
            rec.status = out.status.as_str().into();
            rec.nodes_expanded = Some(out.stats.nodes_expanded);
            rec.proven_optimal = out.stats.proven_optimal;
            objectives = out.objectives;
        }
        Solver::Baseline => match greedy_round_robin(s) {
            Ok(sol) => {
                rec.status = "feasible".into();
                objectives = validate(s, &sol).objectives;
            }
            Err(f) => rec.status = f.kind.as_str().into(),
        },
        Solver::Oracle => {
            let summary = enumerate_feasible(
                s,
                Canonicalization::default(),
                Some(ORACLE_LIMIT),
                |_, _| {},
            );
            rec.nodes_expanded = Some(summary.count);
            rec.status = match (&summary.best, summary.complete) {
                (_, false) => "limit_reached",
                (Some(_), true) => "optimal",
                (None, true) => "infeasible",
            }
            .into();
            rec.proven_optimal = summary.complete && summary.best.is_some();
            objectives = summary.best.map(|(v, _, _)| v);
        }
    }
    rec.wall_ms = start.elapsed().as_millis() as u64;
    if let Some(v) = objectives {
        let [ms, rl, cn, on] = v.as_array();
        (rec.ms, rec.rl, rec.cn, rec.on) = (Some(ms), Some(rl), Some(cn), Some(on));
    }
    rec
}

/// Runs every solver on every `.lp` file in `dir`. Rows are ordered by
/// instance name, then solver name. Unparsable instances get status `error`.
pub fn run_bench(
    dir: &Path,
    cfg: &SolverConfig,
    solvers: &[Solver],
) -> io::Result<Vec<BenchRecord>> {
    let mut files: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "lp"))
        .collect();
    files.sort();
    let instances: Vec<(String, Result<Scenario, String>)> = files
        .iter()
        .map(|path| {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let parsed = fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|text| parse_facts(&text).map_err(|e| e.to_string()));
            (name, parsed)
        })
        .collect();
    let mut solvers = solvers.to_vec();
    solvers.sort_by_key(|s| s.name());
    solvers.dedup();
    let cells: Vec<(usize, Solver)> = (0..instances.len())
        .flat_map(|i| solvers.iter().map(move |&s| (i, s)))
        .collect();
    let mut rows: Vec<BenchRecord> = cells
        .par_iter()
        .map(|&(i, solver)| run_cell(&instances[i].0, &instances[i].1, solver, cfg))
        .collect();
    rows.sort_by(|a, b| (&a.instance, &a.solver).cmp(&(&b.instance, &b.solver)));
    Ok(rows)
}

/// Renders records as CSV with [`CSV_HEADER`].
pub fn to_csv(rows: &[BenchRecord]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv");
    format!("{CSV_HEADER}\n{body}")
}
