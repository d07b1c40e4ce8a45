//! Command-line front end. Every subcommand wraps one library operation and
//! prints its result in the fact or JSON formats of [`crate::fact_io`].
//!
//! Exit codes: 0 for success, a feasible or an optimal result; 1 for an
//! infeasible result, a baseline failure or a failed validation; 2 for
//! usage and input errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::baseline::greedy_round_robin;
use crate::fact_io::{
    emit_atoms, emit_facts, emit_solution, parse_facts, parse_solution, scenario_from_json,
    scenario_to_json, SolutionStatus,
};
use crate::genbench::{generate, run_bench, to_csv, GenParams, Solver};
use crate::model::{ObjectiveVector, Scenario, Solution};
use crate::optimizer::{solve_with_progress, SolveStatus, SolverConfig, StageMode};
use crate::oracle::{enumerate_feasible, Canonicalization};
use crate::validation::validate;

#[derive(Parser, Debug)]
#[command(
    name = "agvroute",
    version,
    about = "Task assignment and routing for vehicle fleets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a solution against a scenario and report conflicts and objectives.
    Validate {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(short = 's')]
        solution: PathBuf,
    },
    /// Search for a lexicographically optimal solution.
    Solve {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Keep searching until optimality is proven. Without it the first
        /// feasible solution is returned.
        #[arg(long)]
        prove_optimal: bool,
        #[arg(long)]
        budget_ms: Option<u64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optimize one objective at a time.
        #[arg(long)]
        staged: bool,
    },
    /// Count feasible solutions and find the optimum by exhaustive enumeration.
    Enumerate {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value_t = Canon::Default)]
        canon: Canon,
    },
    /// Run the greedy round-robin scheduler.
    Baseline {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Generate a scenario fact file.
    Gen {
        #[arg(long, value_enum, default_value_t = Preset::FullCycle)]
        preset: Preset,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long)]
        tasks: Option<usize>,
        #[arg(long)]
        subtasks_total: Option<usize>,
        #[arg(long)]
        vehicles: Option<usize>,
        #[arg(long)]
        slack: Option<f64>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Run solvers on every .lp file of a directory and write a CSV table.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "optimizer,baseline")]
        solvers: Vec<String>,
        #[arg(long)]
        budget_ms: Option<u64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Convert a scenario between the fact format (.lp) and JSON (.json).
    Convert {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Target format; defaults to the opposite of the input.
        #[arg(long, value_enum)]
        to: Option<Format>,
    },
    /// Print the atoms describing a feasible solution.
    EmitAtoms {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(short = 's')]
        solution: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Canon {
    Default,
    TimedMoves,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    FullCycle,
    Small,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Lp,
    Json,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Input(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = read(path)?;
    let parsed = if path.extension().is_some_and(|x| x == "json") {
        scenario_from_json(&text)
    } else {
        parse_facts(&text)
    };
    parsed.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_solution(path: &Path, s: &Scenario) -> Result<Solution, CliError> {
    parse_solution(&read(path)?, s).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_out(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn objectives_json(v: Option<ObjectiveVector>) -> Value {
    match v {
        Some(o) => json!({ "ms": o.ms, "rl": o.rl, "cn": o.cn, "on": o.on }),
        None => Value::Null,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs the subcommand, writing
/// results to `out` and summaries to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Runs the command line of the current process.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Validate { input, solution } => {
            let s = load_scenario(&input)?;
            let sol = load_solution(&solution, &s)?;
            let report = validate(&s, &sol);
            let conflicts: Vec<Value> = report
                .conflicts
                .iter()
                .map(|c| json!({ "class": format!("{:?}", c.class()), "detail": c.to_string() }))
                .collect();
            let doc = json!({
                "feasible": report.feasible,
                "objectives": objectives_json(report.objectives),
                "conflicts": conflicts,
            });
            write_out(None, &pretty(&doc), out)?;
            match report.objectives {
                Some(v) => {
                    let _ = writeln!(err, "feasible, objectives {v}");
                }
                None => {
                    let _ = writeln!(err, "infeasible, {} conflict(s)", report.conflicts.len());
                }
            }
            Ok(if report.feasible { 0 } else { 1 })
        }
        Command::Solve {
            input,
            output,
            prove_optimal,
            budget_ms,
            threads,
            seed,
            staged,
        } => {
            let s = load_scenario(&input)?;
            let cfg = SolverConfig {
                budget: budget_ms.map(Duration::from_millis),
                workers: threads.max(1),
                prove_optimal,
                seed,
                stage_mode: if staged {
                    StageMode::Staged
                } else {
                    StageMode::Vector
                },
            };
            let result = solve_with_progress(&s, &cfg, &|_| {});
            let _ = writeln!(
                err,
                "{} after {} ms, {} nodes, {} incumbent(s)",
                result.status.as_str(),
                result.stats.elapsed_ms,
                result.stats.nodes_expanded,
                result.stats.incumbents.len()
            );
            let (status, code) = match result.status {
                SolveStatus::Optimal => (SolutionStatus::Optimal, 0),
                SolveStatus::Feasible => (SolutionStatus::Feasible, 0),
                SolveStatus::Infeasible => (SolutionStatus::Infeasible, 1),
                SolveStatus::BudgetExhaustedNoSolution => {
                    let _ = writeln!(err, "no solution within the budget");
                    return Ok(1);
                }
            };
            let sol = result.solution.unwrap_or_else(|| Solution::empty(&s));
            write_out(
                output.as_deref(),
                &emit_solution(&sol, result.objectives, status),
                out,
            )?;
            Ok(code)
        }
        Command::Enumerate {
            input,
            limit,
            canon,
        } => {
            let s = load_scenario(&input)?;
            let canon = match canon {
                Canon::Default => Canonicalization::default(),
                Canon::TimedMoves => Canonicalization::timed_moves(),
            };
            let summary = enumerate_feasible(&s, canon, limit, |_, _| {});
            let (best, optima) = match &summary.best {
                Some((v, n, _)) => (Some(*v), *n),
                None => (None, 0),
            };
            let doc = json!({
                "canonicalization": {
                    "routes_end_at_last_completion": canon.routes_end_at_last_completion,
                    "idle_vehicles_empty_route": canon.idle_vehicles_empty_route,
                    "park_until_horizon": canon.park_until_horizon,
                    "order_minimal": canon.order_minimal,
                },
                "feasible_count": summary.count,
                "complete": summary.complete,
                "optima_count": optima,
                "objectives": objectives_json(best),
            });
            write_out(None, &pretty(&doc), out)?;
            let _ = writeln!(
                err,
                "{} feasible solution(s){}, {} optimal, canonicalization {}",
                summary.count,
                if summary.complete {
                    ""
                } else {
                    " before the limit"
                },
                optima,
                canon
            );
            Ok(if summary.best.is_some() { 0 } else { 1 })
        }
        Command::Baseline { input, output } => {
            let s = load_scenario(&input)?;
            match greedy_round_robin(&s) {
                Ok(sol) => {
                    let v = validate(&s, &sol).objectives;
                    write_out(
                        output.as_deref(),
                        &emit_solution(&sol, v, SolutionStatus::Feasible),
                        out,
                    )?;
                    let _ = writeln!(err, "feasible");
                    Ok(0)
                }
                Err(f) => {
                    let witness: Vec<Value> = f
                        .witness
                        .iter()
                        .map(|w| {
                            json!({
                                "waiter": format!("c({})", w.waiter),
                                "node": format!("v({})", w.node),
                                "holder": format!("c({})", w.holder),
                            })
                        })
                        .collect();
                    let doc = json!({
                        "status": f.kind.as_str(),
                        "time": f.time,
                        "detail": f.detail,
                        "witness": witness,
                    });
                    write_out(output.as_deref(), &pretty(&doc), out)?;
                    let _ = writeln!(err, "{f}");
                    Ok(1)
                }
            }
        }
        Command::Gen {
            preset,
            seed,
            nodes,
            edges,
            tasks,
            subtasks_total,
            vehicles,
            slack,
            output,
        } => {
            let mut p = match preset {
                Preset::FullCycle => GenParams::full_cycle(seed),
                Preset::Small => GenParams::small(seed),
            };
            p.nodes = nodes.unwrap_or(p.nodes);
            p.edges = edges.unwrap_or(p.edges);
            p.tasks = tasks.unwrap_or(p.tasks);
            p.vehicles = vehicles.unwrap_or(p.vehicles);
            p.deadline_slack = slack.unwrap_or(p.deadline_slack);
            if subtasks_total.is_some() {
                p.subtasks_total = subtasks_total;
            }
            let s = generate(&p).map_err(|e| CliError::Input(e.to_string()))?;
            write_out(output.as_deref(), &emit_facts(&s), out)?;
            Ok(0)
        }
        Command::Bench {
            dir,
            out: csv_out,
            solvers,
            budget_ms,
            threads,
        } => {
            let solvers = solvers
                .iter()
                .map(|n| n.parse::<Solver>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::Input)?;
            let cfg = SolverConfig {
                budget: budget_ms.map(Duration::from_millis),
                workers: threads.max(1),
                ..SolverConfig::default()
            };
            let rows = run_bench(&dir, &cfg, &solvers).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            write_out(csv_out.as_deref(), &to_csv(&rows), out)?;
            let _ = writeln!(err, "{} row(s)", rows.len());
            Ok(0)
        }
        Command::Convert { input, output, to } => {
            let s = load_scenario(&input)?;
            let from_json = input.extension().is_some_and(|x| x == "json");
            let to = to.unwrap_or(if from_json { Format::Lp } else { Format::Json });
            let text = match to {
                Format::Lp => emit_facts(&s),
                Format::Json => scenario_to_json(&s),
            };
            write_out(output.as_deref(), &text, out)?;
            Ok(0)
        }
        Command::EmitAtoms { input, solution } => {
            let s = load_scenario(&input)?;
            let sol = load_solution(&solution, &s)?;
            match emit_atoms(&s, &sol) {
                Ok(atoms) => {
                    write_out(None, &atoms, out)?;
                    Ok(0)
                }
                Err(e) => {
                    let _ = writeln!(err, "{e}");
                    Ok(1)
                }
            }
        }
    }
}
