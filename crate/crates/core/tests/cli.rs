//! Runs the `agvroute` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use agvroute::fact_io::{emit_solution, parse_facts, parse_solution, SolutionStatus};
use agvroute::instances::{example1, example1_optimal, route, EXAMPLE1_LP};
use agvroute::{RouteElement, VehicleId};
use serde_json::Value;

fn agvroute(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agvroute"))
        .args(args)
        .output()
        .expect("run agvroute")
}

fn write_example(dir: &Path) -> String {
    let path = dir.join("example1.lp");
    fs::write(&path, EXAMPLE1_LP).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn solve_proves_the_reference_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write_example(dir.path());
    let sol = dir.path().join("sol.json");
    let out = agvroute(&[
        "solve",
        "-i",
        &lp,
        "--prove-optimal",
        "-o",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(doc["status"], "optimal");
    assert_eq!(
        doc["objectives"],
        serde_json::json!({"ms": 55, "rl": 104, "cn": 3, "on": 14})
    );
    let parsed = parse_solution(&fs::read_to_string(&sol).unwrap(), &example1()).unwrap();
    assert_eq!(parsed, example1_optimal());
}

#[test]
fn solve_with_threads_matches() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write_example(dir.path());
    let out = agvroute(&[
        "solve",
        "-i",
        &lp,
        "--prove-optimal",
        "--threads",
        "3",
        "--staged",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["objectives"]["rl"], 104);
}

#[test]
fn validate_flags_a_deleted_stop() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write_example(dir.path());
    let mut sol = example1_optimal();
    let r = sol.routes.get_mut(&VehicleId(1)).unwrap();
    let at = r
        .iter()
        .position(|e| *e == RouteElement::Stop(agvroute::NodeId(5)))
        .unwrap();
    r.remove(at);
    let path = dir.path().join("corrupted.json");
    fs::write(&path, emit_solution(&sol, None, SolutionStatus::Feasible)).unwrap();
    let out = agvroute(&["validate", "-i", &lp, "-s", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["feasible"], false);
    let classes: Vec<&str> = report["conflicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["class"].as_str().unwrap())
        .collect();
    assert!(classes
        .iter()
        .all(|c| *c == "DeadlineMiss" || *c == "IllegalHalt"));
    assert!(!classes.is_empty());
}

#[test]
fn validate_accepts_the_reference_solution() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write_example(dir.path());
    let path = dir.path().join("opt.json");
    fs::write(
        &path,
        emit_solution(&example1_optimal(), None, SolutionStatus::Feasible),
    )
    .unwrap();
    let out = agvroute(&["validate", "-i", &lp, "-s", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["objectives"]["on"], 14);
}

#[test]
fn enumerate_reports_a_unique_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write_example(dir.path());
    let out = agvroute(&["enumerate", "-i", &lp]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["optima_count"], 1);
    assert_eq!(doc["feasible_count"], 255);
    assert_eq!(
        doc["canonicalization"]["routes_end_at_last_completion"],
        true
    );
    let out = agvroute(&["enumerate", "-i", &lp, "--canon", "timed-moves"]);
    assert_eq!(json(&out)["feasible_count"], 561);
    let out = agvroute(&["enumerate", "-i", &lp, "--limit", "10"]);
    assert_eq!(json(&out)["complete"], false);
}

#[test]
fn baseline_deadlocks() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write_example(dir.path());
    let out = agvroute(&["baseline", "-i", &lp]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["status"], "deadlock");
    let nodes: Vec<&str> = doc["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["node"].as_str().unwrap())
        .collect();
    assert!(nodes.contains(&"v(4)"));
}

#[test]
fn gen_is_deterministic_and_parses() {
    let a = agvroute(&["gen", "--seed", "5"]);
    let b = agvroute(&["gen", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s = parse_facts(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(s.nodes().len(), 25);
    let bad = agvroute(&["gen", "--vehicles", "30"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn convert_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write_example(dir.path());
    let js = dir.path().join("example1.json");
    let out = agvroute(&["convert", "-i", &lp, "-o", js.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let back = agvroute(&["convert", "-i", js.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0));
    assert_eq!(
        parse_facts(&String::from_utf8(back.stdout).unwrap()).unwrap(),
        example1()
    );
}

#[test]
fn emit_atoms_lists_final_halts() {
    let dir = tempfile::tempdir().unwrap();
    let lp = write_example(dir.path());
    let path = dir.path().join("opt.json");
    fs::write(
        &path,
        emit_solution(&example1_optimal(), None, SolutionStatus::Optimal),
    )
    .unwrap();
    let out = agvroute(&["emit-atoms", "-i", &lp, "-s", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "at(c(2),v(2),49)."));
    let mut broken = example1_optimal();
    broken.routes.insert(VehicleId(2), route("2-3"));
    fs::write(
        &path,
        emit_solution(&broken, None, SolutionStatus::Feasible),
    )
    .unwrap();
    let out = agvroute(&["emit-atoms", "-i", &lp, "-s", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    write_example(dir.path());
    let csv = dir.path().join("out.csv");
    let out = agvroute(&[
        "bench",
        "--dir",
        dir.path().to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "instance,solver,status,ms,rl,cn,on,wall_ms,nodes_expanded,proven_optimal"
    );
    assert!(lines[1].starts_with("example1,baseline,deadlock,"));
    assert!(lines[2].starts_with("example1,optimizer,optimal,55,104,3,14,"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(agvroute(&["solve"]).status.code(), Some(2));
    assert_eq!(
        agvroute(&["solve", "-i", "/nonexistent.lp"]).status.code(),
        Some(2)
    );
    let out = agvroute(&["bench", "--dir", ".", "--solvers", "magic"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lp");
    fs::write(&bad, "edge(v(1),v(2)).").unwrap();
    let out = agvroute(&["solve", "-i", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}
