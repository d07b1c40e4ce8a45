//! Fact files, solution documents and solution atoms.
//!
//! Instances use ground facts such as `edge(v(1),v(2),4).` with the
//! shorthands `a..b` for integer ranges and `;` for alternatives, e.g.
//! `node(v(1..7)).` or `halt(v(2;4),3).`. Comments run from `%` to the end
//! of the line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::model::{
    build_scenario, NodeId, ObjectiveVector, RouteElement, Scenario, ScenarioError, ScenarioParts,
    Solution, TaskDecl, TaskId, Time, VehicleId,
};
use crate::validation::{occupation_map, validate, InfeasibleSolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown predicate {name}/{arity}")]
    UnknownPredicate {
        name: String,
        arity: usize,
        line: usize,
    },
    #[error("line {line}: predicate {name} does not take {arity} arguments")]
    ArityMismatch {
        name: String,
        arity: usize,
        line: usize,
    },
    #[error("line {line}: unexpected term {term} in {predicate}")]
    InvalidTerm {
        predicate: String,
        term: String,
        line: usize,
    },
    #[error("inconsistent derived fact: {0}")]
    InconsistentDerivedFact(String),
    #[error("incomplete declaration: {0}")]
    Incomplete(String),
    #[error("invalid scenario document: {0}")]
    Document(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Ground term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Int(i64),
    Const(String),
    Func(String, Vec<Term>),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(n) => write!(f, "{n}"),
            Term::Const(c) => f.write_str(c),
            Term::Func(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// One ground fact with its source line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub predicate: String,
    pub args: Vec<Term>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Semi,
    DotDot,
    Dot,
    Minus,
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FactError {
    FactError::SyntaxError {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Lexed>, FactError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => advance(1, &mut i),
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' | ')' | ',' | ';' | '-' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    _ => Tok::Minus,
                };
                out.push(Lexed {
                    tok,
                    line: l0,
                    column: c0,
                });
                advance(1, &mut i);
            }
            '.' => {
                let tok = if chars.get(i + 1) == Some(&'.') {
                    advance(2, &mut i);
                    Tok::DotDot
                } else {
                    advance(1, &mut i);
                    Tok::Dot
                };
                out.push(Lexed {
                    tok,
                    line: l0,
                    column: c0,
                });
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                col += i - start;
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse()
                    .map_err(|_| syntax(l0, c0, format!("integer {s} out of range")))?;
                out.push(Lexed {
                    tok: Tok::Int(n),
                    line: l0,
                    column: c0,
                });
            }
            c if c.is_ascii_lowercase() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                out.push(Lexed {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: l0,
                    column: c0,
                });
            }
            other => return Err(syntax(l0, c0, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

const MAX_RANGE: i64 = 1_000_000;

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |l| (l.line, l.column))
    }

    fn error(&self, message: impl Into<String>) -> FactError {
        let (line, column) = self.here();
        syntax(line, column, message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FactError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn facts(&mut self) -> Result<Vec<Fact>, FactError> {
        let mut out = Vec::new();
        while self.pos < self.toks.len() {
            let line = self.here().0;
            let Some(Tok::Ident(name)) = self.peek().cloned() else {
                return Err(self.error("expected predicate name"));
            };
            self.pos += 1;
            let tuples = if self.peek() == Some(&Tok::LParen) {
                self.pos += 1;
                let t = self.tuples()?;
                self.expect(Tok::RParen, "')'")?;
                t
            } else {
                vec![Vec::new()]
            };
            self.expect(Tok::Dot, "'.'")?;
            out.extend(tuples.into_iter().map(|args| Fact {
                predicate: name.clone(),
                args,
                line,
            }));
        }
        Ok(out)
    }

    /// `tuple (';' tuple)*`, each tuple expanded to all its ground instances.
    fn tuples(&mut self) -> Result<Vec<Vec<Term>>, FactError> {
        let mut all = self.tuple()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            all.extend(self.tuple()?);
        }
        Ok(all)
    }

    fn tuple(&mut self) -> Result<Vec<Vec<Term>>, FactError> {
        let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
        loop {
            let alts = self.term()?;
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    alts.iter().map(move |t| {
                        let mut p = prefix.clone();
                        p.push(t.clone());
                        p
                    })
                })
                .collect();
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn int(&mut self) -> Result<i64, FactError> {
        let negative = self.peek() == Some(&Tok::Minus);
        if negative {
            self.pos += 1;
        }
        match self.peek() {
            Some(&Tok::Int(n)) => {
                self.pos += 1;
                Ok(if negative { -n } else { n })
            }
            _ => Err(self.error("expected integer")),
        }
    }

    fn term(&mut self) -> Result<Vec<Term>, FactError> {
        match self.peek().cloned() {
            Some(Tok::Int(_)) | Some(Tok::Minus) => {
                let at = self.here();
                let lo = self.int()?;
                if self.peek() != Some(&Tok::DotDot) {
                    return Ok(vec![Term::Int(lo)]);
                }
                self.pos += 1;
                let hi = self.int()?;
                if hi.saturating_sub(lo) > MAX_RANGE {
                    return Err(syntax(at.0, at.1, "range too large"));
                }
                Ok((lo..=hi).map(Term::Int).collect())
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() != Some(&Tok::LParen) {
                    return Ok(vec![Term::Const(name)]);
                }
                self.pos += 1;
                let tuples = self.tuples()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(tuples
                    .into_iter()
                    .map(|args| Term::Func(name.clone(), args))
                    .collect())
            }
            _ => Err(self.error("expected term")),
        }
    }
}

/// Parses fact text into ground facts, expanding ranges and alternatives.
pub fn parse_fact_list(text: &str) -> Result<Vec<Fact>, FactError> {
    let toks = lex(text)?;
    let lines = text.lines().count().max(1);
    let last_col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Parser {
        toks,
        pos: 0,
        end: (lines, last_col),
    }
    .facts()
}

const PREDICATES: &[(&str, &[usize])] = &[
    ("node", &[1]),
    ("halt", &[2]),
    ("park", &[2]),
    ("stay", &[2]),
    ("edge", &[3]),
    ("less", &[3]),
    ("time", &[1]),
    ("task", &[1, 2]),
    ("tasks", &[2]),
    ("subtask", &[2, 3]),
    ("vehicle", &[1, 2]),
];

fn id_of(term: &Term, functor: &str) -> Option<u32> {
    match term {
        Term::Func(name, args) if name == functor && args.len() == 1 => match args[0] {
            Term::Int(n) => u32::try_from(n).ok(),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Default)]
struct Derived {
    stay: Option<BTreeSet<(NodeId, i64)>>,
    less: Option<BTreeSet<(NodeId, NodeId, NodeId)>>,
    time: Option<BTreeSet<i64>>,
    tasks: Option<BTreeSet<(TaskId, TaskId)>>,
    subtask2: Option<BTreeSet<(TaskId, usize)>>,
    task1: Option<BTreeSet<TaskId>>,
    vehicle1: Option<BTreeSet<VehicleId>>,
}

fn record<T: Ord>(slot: &mut Option<BTreeSet<T>>, value: T) {
    slot.get_or_insert_with(BTreeSet::new).insert(value);
}

fn check_derived<T: Ord + fmt::Debug>(
    name: &str,
    given: &Option<BTreeSet<T>>,
    expected: BTreeSet<T>,
) -> Result<(), FactError> {
    let Some(given) = given else { return Ok(()) };
    if let Some(extra) = given.difference(&expected).next() {
        return Err(FactError::InconsistentDerivedFact(format!(
            "{name} fact {extra:?} does not follow from the scenario"
        )));
    }
    if let Some(missing) = expected.difference(given).next() {
        return Err(FactError::InconsistentDerivedFact(format!(
            "{name} fact {missing:?} is missing"
        )));
    }
    Ok(())
}

/// Builds a scenario from ground facts.
pub fn scenario_from_facts(facts: &[Fact]) -> Result<Scenario, FactError> {
    let mut parts = ScenarioParts::default();
    let mut deadlines: BTreeMap<TaskId, i64> = BTreeMap::new();
    let mut subtasks: BTreeMap<TaskId, BTreeMap<usize, NodeId>> = BTreeMap::new();
    let mut derived = Derived::default();

    for f in facts {
        let arity = f.args.len();
        match PREDICATES.iter().find(|(n, _)| *n == f.predicate) {
            None => {
                return Err(FactError::UnknownPredicate {
                    name: f.predicate.clone(),
                    arity,
                    line: f.line,
                })
            }
            Some((_, arities)) if !arities.contains(&arity) => {
                return Err(FactError::ArityMismatch {
                    name: f.predicate.clone(),
                    arity,
                    line: f.line,
                })
            }
            _ => {}
        }
        let bad = |i: usize| FactError::InvalidTerm {
            predicate: format!("{}/{}", f.predicate, arity),
            term: f.args[i].to_string(),
            line: f.line,
        };
        let node = |i: usize| id_of(&f.args[i], "v").map(NodeId).ok_or_else(|| bad(i));
        let task = |i: usize| id_of(&f.args[i], "t").map(TaskId).ok_or_else(|| bad(i));
        let vehicle = |i: usize| id_of(&f.args[i], "c").map(VehicleId).ok_or_else(|| bad(i));
        let step = |i: usize| {
            id_of(&f.args[i], "s")
                .filter(|&n| n >= 1)
                .map(|n| n as usize)
                .ok_or_else(|| bad(i))
        };
        let int = |i: usize| match f.args[i] {
            Term::Int(n) => Ok(n),
            _ => Err(bad(i)),
        };

        match (f.predicate.as_str(), arity) {
            ("node", 1) => parts.nodes.push(node(0)?),
            ("halt", 2) => parts.halts.push((node(0)?, int(1)?)),
            ("park", 2) => parts.parks.push((node(0)?, int(1)?)),
            ("stay", 2) => record(&mut derived.stay, (node(0)?, int(1)?)),
            ("edge", 3) => parts.edges.push((node(0)?, node(1)?, int(2)?)),
            ("less", 3) => record(&mut derived.less, (node(0)?, node(1)?, node(2)?)),
            ("time", 1) => record(&mut derived.time, int(0)?),
            ("task", 1) => record(&mut derived.task1, task(0)?),
            ("task", 2) => {
                let (t, d) = (task(0)?, int(1)?);
                if deadlines.insert(t, d).is_some_and(|prev| prev != d) {
                    return Err(ScenarioError::ConflictingDeclaration(format!(
                        "deadline of task {t}"
                    ))
                    .into());
                }
            }
            ("tasks", 2) => record(&mut derived.tasks, (task(0)?, task(1)?)),
            ("subtask", 2) => record(&mut derived.subtask2, (task(0)?, step(1)?)),
            ("subtask", 3) => {
                let (t, i, v) = (task(0)?, step(1)?, node(2)?);
                let seq = subtasks.entry(t).or_default();
                if seq.insert(i, v).is_some_and(|prev| prev != v) {
                    return Err(ScenarioError::ConflictingDeclaration(format!(
                        "subtask {i} of task {t}"
                    ))
                    .into());
                }
            }
            ("vehicle", 1) => record(&mut derived.vehicle1, vehicle(0)?),
            ("vehicle", 2) => parts.vehicles.push((vehicle(0)?, node(1)?)),
            _ => unreachable!("arity checked above"),
        }
    }

    if let Some(t) = subtasks.keys().find(|t| !deadlines.contains_key(t)) {
        return Err(FactError::Incomplete(format!("task {t} has no deadline")));
    }
    for (&id, &deadline) in &deadlines {
        let seq = subtasks.remove(&id).unwrap_or_default();
        if let Some(pos) = seq.keys().enumerate().position(|(k, &i)| i != k + 1) {
            return Err(FactError::Incomplete(format!(
                "task {id} lacks subtask {}",
                pos + 1
            )));
        }
        parts.tasks.push(TaskDecl {
            id,
            deadline,
            subtasks: seq.into_values().collect(),
        });
    }

    let s = build_scenario(parts)?;

    check_derived(
        "task/1",
        &derived.task1,
        s.tasks().keys().copied().collect(),
    )?;
    check_derived(
        "vehicle/1",
        &derived.vehicle1,
        s.vehicles().keys().copied().collect(),
    )?;
    check_derived(
        "stay/2",
        &derived.stay,
        s.halts()
            .iter()
            .chain(s.parks())
            .filter(|(_, &d)| d > 1)
            .map(|(&v, &d)| (v, i64::from(d)))
            .collect(),
    )?;
    check_derived(
        "less/3",
        &derived.less,
        s.less_pairs().into_iter().collect(),
    )?;
    check_derived(
        "time/1",
        &derived.time,
        (0..=i64::from(s.horizon())).collect(),
    )?;
    check_derived("tasks/2", &derived.tasks, task_pairs(&s).collect())?;
    check_derived(
        "subtask/2",
        &derived.subtask2,
        s.tasks()
            .iter()
            .flat_map(|(&t, task)| (1..=task.subtasks.len()).map(move |i| (t, i)))
            .collect(),
    )?;
    Ok(s)
}

fn task_pairs(s: &Scenario) -> impl Iterator<Item = (TaskId, TaskId)> + '_ {
    s.tasks().keys().flat_map(move |&a| {
        s.tasks()
            .keys()
            .filter(move |&&b| b != a)
            .map(move |&b| (a, b))
    })
}

/// Parses a fact file into a validated scenario.
pub fn parse_facts(text: &str) -> Result<Scenario, FactError> {
    scenario_from_facts(&parse_fact_list(text)?)
}

/// Renders a scenario as a fact file, including all derived facts, in a
/// canonical order.
pub fn emit_facts(s: &Scenario) -> String {
    let mut out = String::new();
    let w = &mut out;
    for v in s.nodes() {
        let _ = writeln!(w, "node(v({v})).");
    }
    for (v, d) in s.halts() {
        let _ = writeln!(w, "halt(v({v}),{d}).");
    }
    for (v, d) in s.parks() {
        let _ = writeln!(w, "park(v({v}),{d}).");
    }
    let mut stays: Vec<_> = s.halts().iter().chain(s.parks()).collect();
    stays.sort();
    for (v, d) in stays.into_iter().filter(|(_, &d)| d > 1) {
        let _ = writeln!(w, "stay(v({v}),{d}).");
    }
    for ((a, b), d) in s.edges() {
        let _ = writeln!(w, "edge(v({a}),v({b}),{d}).");
    }
    for (a, b, v) in s.less_pairs() {
        let _ = writeln!(w, "less(v({a}),v({b}),v({v})).");
    }
    let _ = writeln!(w, "time(0..{}).", s.horizon());
    for t in s.tasks().keys() {
        let _ = writeln!(w, "task(t({t})).");
    }
    for (t, task) in s.tasks() {
        let _ = writeln!(w, "task(t({t}),{}).", task.deadline);
    }
    for (a, b) in task_pairs(s) {
        let _ = writeln!(w, "tasks(t({a}),t({b})).");
    }
    for (t, task) in s.tasks() {
        for i in 1..=task.subtasks.len() {
            let _ = writeln!(w, "subtask(t({t}),s({i})).");
        }
    }
    for (t, task) in s.tasks() {
        for (i, v) in task.subtasks.iter().enumerate() {
            let _ = writeln!(w, "subtask(t({t}),s({}),v({v})).", i + 1);
        }
    }
    for c in s.vehicles().keys() {
        let _ = writeln!(w, "vehicle(c({c})).");
    }
    for (c, v) in s.vehicles() {
        let _ = writeln!(w, "vehicle(c({c}),v({v})).");
    }
    out
}

/// Outcome label of a solution document.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionStatus {
    Optimal,
    Feasible,
    Infeasible,
}

impl SolutionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolutionStatus::Optimal => "optimal",
            SolutionStatus::Feasible => "feasible",
            SolutionStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("malformed solution document: {0}")]
    SchemaError(String),
    #[error("unknown identifier: {0}")]
    UnknownId(String),
}

/// Solution document contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionDocument {
    pub solution: Solution,
    pub objectives: Option<ObjectiveVector>,
    pub status: SolutionStatus,
}

fn route_json(route: &[RouteElement]) -> Value {
    Value::Array(
        route
            .iter()
            .map(|e| match *e {
                RouteElement::Move(a, b) => {
                    json!({ "move": [format!("v({a})"), format!("v({b})")] })
                }
                RouteElement::Stop(v) => json!({ "stop": format!("v({v})") }),
            })
            .collect(),
    )
}

/// Renders a solution document as pretty-printed JSON.
pub fn emit_solution(
    sol: &Solution,
    objectives: Option<ObjectiveVector>,
    status: SolutionStatus,
) -> String {
    let assignment: Map<String, Value> = sol
        .assignment
        .iter()
        .map(|(t, c)| (format!("t({t})"), json!(format!("c({c})"))))
        .collect();
    let order: Map<String, Value> = sol
        .vehicle_task_order
        .iter()
        .map(|(c, ts)| {
            let ts: Vec<String> = ts.iter().map(|t| format!("t({t})")).collect();
            (format!("c({c})"), json!(ts))
        })
        .collect();
    let routes: Map<String, Value> = sol
        .routes
        .iter()
        .map(|(c, r)| (format!("c({c})"), route_json(r)))
        .collect();
    let objectives = match objectives {
        Some(o) => json!({ "ms": o.ms, "rl": o.rl, "cn": o.cn, "on": o.on }),
        None => Value::Null,
    };
    let doc = json!({
        "assignment": assignment,
        "order": order,
        "routes": routes,
        "objectives": objectives,
        "status": status.as_str(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    text.push('\n');
    text
}

fn schema(msg: impl Into<String>) -> SolutionError {
    SolutionError::SchemaError(msg.into())
}

fn term_id(text: &str, functor: char) -> Result<u32, SolutionError> {
    text.strip_prefix(functor)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| schema(format!("expected {functor}(N), found {text:?}")))
}

fn as_str(v: &Value) -> Result<&str, SolutionError> {
    v.as_str()
        .ok_or_else(|| schema(format!("expected string, found {v}")))
}

fn as_object<'a>(doc: &'a Value, key: &str) -> Result<&'a Map<String, Value>, SolutionError> {
    doc.get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| schema(format!("missing object {key:?}")))
}

fn parse_element(s: &Scenario, e: &Value) -> Result<RouteElement, SolutionError> {
    let obj = e
        .as_object()
        .filter(|o| o.len() == 1)
        .ok_or_else(|| schema(format!("route element {e} must have one key")))?;
    if let Some(m) = obj.get("move") {
        let pair = m
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| schema("move needs two nodes"))?;
        let a = NodeId(term_id(as_str(&pair[0])?, 'v')?);
        let b = NodeId(term_id(as_str(&pair[1])?, 'v')?);
        if !s.has_edge(a, b) {
            return Err(SolutionError::UnknownId(format!("edge ({a},{b})")));
        }
        Ok(RouteElement::Move(a, b))
    } else if let Some(v) = obj.get("stop") {
        let v = NodeId(term_id(as_str(v)?, 'v')?);
        if s.stop_kind(v).is_none() {
            return Err(SolutionError::UnknownId(format!("stop node {v}")));
        }
        Ok(RouteElement::Stop(v))
    } else {
        Err(schema(format!("unknown route element {e}")))
    }
}

/// Parses a solution document, checking identifiers against `s`.
pub fn parse_solution_document(
    text: &str,
    s: &Scenario,
) -> Result<SolutionDocument, SolutionError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let task = |text: &str| {
        let t = TaskId(term_id(text, 't')?);
        s.task(t)
            .map(|_| t)
            .ok_or_else(|| SolutionError::UnknownId(format!("task {t}")))
    };
    let vehicle = |text: &str| {
        let c = VehicleId(term_id(text, 'c')?);
        s.vehicles()
            .contains_key(&c)
            .then_some(c)
            .ok_or_else(|| SolutionError::UnknownId(format!("vehicle {c}")))
    };

    let mut sol = Solution::default();
    for (t, c) in as_object(&doc, "assignment")? {
        sol.assignment.insert(task(t)?, vehicle(as_str(c)?)?);
    }
    for (c, ts) in as_object(&doc, "order")? {
        let ts = ts
            .as_array()
            .ok_or_else(|| schema("order entries must be arrays"))?
            .iter()
            .map(|t| task(as_str(t)?))
            .collect::<Result<Vec<_>, _>>()?;
        sol.vehicle_task_order.insert(vehicle(c)?, ts);
    }
    for (c, r) in as_object(&doc, "routes")? {
        let r = r
            .as_array()
            .ok_or_else(|| schema("routes must be arrays"))?
            .iter()
            .map(|e| parse_element(s, e))
            .collect::<Result<Vec<_>, _>>()?;
        sol.routes.insert(vehicle(c)?, r);
    }
    let objectives = match doc.get("objectives") {
        None | Some(Value::Null) => None,
        Some(o) => {
            let get = |k: &str| {
                o.get(k)
                    .and_then(Value::as_u64)
                    .ok_or_else(|| schema(format!("objective {k:?} missing")))
            };
            Some(ObjectiveVector::new(
                get("ms")?,
                get("rl")?,
                get("cn")?,
                get("on")?,
            ))
        }
    };
    let status = doc
        .get("status")
        .cloned()
        .ok_or_else(|| schema("missing status"))
        .and_then(|v| serde_json::from_value(v).map_err(|e| schema(e.to_string())))?;
    Ok(SolutionDocument {
        solution: sol,
        objectives,
        status,
    })
}

/// Parses only the solution part of a document.
pub fn parse_solution(text: &str, s: &Scenario) -> Result<Solution, SolutionError> {
    parse_solution_document(text, s).map(|d| d.solution)
}

/// Renders the assignment, order, location and move atoms describing a
/// feasible solution, one atom per line.
///
/// Locations are listed for every occupied instant up to the horizon and
/// moves for every move that ends no later than the horizon, each with the
/// total duration of the elements before it.
pub fn emit_atoms(s: &Scenario, sol: &Solution) -> Result<String, InfeasibleSolution> {
    let report = validate(s, sol);
    if !report.feasible {
        return Err(InfeasibleSolution(report.conflicts));
    }
    let horizon = s.horizon();
    let mut out = String::new();
    let w = &mut out;
    for (t, c) in &sol.assignment {
        let _ = writeln!(w, "assign(c({c}),t({t})).");
    }
    for tasks in sol.vehicle_task_order.values() {
        for (i, a) in tasks.iter().enumerate() {
            for b in &tasks[i + 1..] {
                let _ = writeln!(w, "order(t({a}),t({b})).");
            }
        }
    }
    let occ = occupation_map(s, sol);
    for (c, o) in &occ.vehicles {
        let mut instants: Vec<(Time, NodeId)> = o
            .node_instants()
            .filter(|&(_, n)| n <= horizon)
            .map(|(v, n)| (n, v))
            .collect();
        instants.sort();
        for (n, v) in instants {
            let _ = writeln!(w, "at(c({c}),v({v}),{n}).");
        }
    }
    for (c, route) in &sol.routes {
        let mut prefix: Time = 0;
        for e in route {
            let d = s.element_duration(e).unwrap_or(0);
            if let RouteElement::Move(a, b) = *e {
                if prefix + d <= horizon {
                    let _ = writeln!(w, "move(c({c}),v({a}),v({b}),{prefix}).");
                }
            }
            prefix += d;
        }
    }
    Ok(out)
}

/// JSON form of a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    pub nodes: Vec<u32>,
    pub edges: Vec<EdgeDocument>,
    pub halts: Vec<StopDocument>,
    pub parks: Vec<StopDocument>,
    pub tasks: Vec<TaskDocument>,
    pub vehicles: Vec<VehicleDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub from: u32,
    pub to: u32,
    pub duration: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopDocument {
    pub node: u32,
    pub duration: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskDocument {
    pub id: u32,
    pub deadline: i64,
    pub subtasks: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VehicleDocument {
    pub id: u32,
    pub start: u32,
}

impl From<&Scenario> for ScenarioDocument {
    fn from(s: &Scenario) -> Self {
        let stops = |m: &BTreeMap<NodeId, Time>| {
            m.iter()
                .map(|(v, &d)| StopDocument {
                    node: v.0,
                    duration: d.into(),
                })
                .collect()
        };
        ScenarioDocument {
            nodes: s.nodes().iter().map(|v| v.0).collect(),
            edges: s
                .edges()
                .iter()
                .map(|(&(a, b), &d)| EdgeDocument {
                    from: a.0,
                    to: b.0,
                    duration: d.into(),
                })
                .collect(),
            halts: stops(s.halts()),
            parks: stops(s.parks()),
            tasks: s
                .tasks()
                .iter()
                .map(|(t, task)| TaskDocument {
                    id: t.0,
                    deadline: task.deadline.into(),
                    subtasks: task.subtasks.iter().map(|v| v.0).collect(),
                })
                .collect(),
            vehicles: s
                .vehicles()
                .iter()
                .map(|(c, v)| VehicleDocument {
                    id: c.0,
                    start: v.0,
                })
                .collect(),
        }
    }
}

impl ScenarioDocument {
    pub fn into_parts(self) -> ScenarioParts {
        ScenarioParts {
            nodes: self.nodes.into_iter().map(NodeId).collect(),
            edges: self
                .edges
                .into_iter()
                .map(|e| (NodeId(e.from), NodeId(e.to), e.duration))
                .collect(),
            halts: self
                .halts
                .into_iter()
                .map(|h| (NodeId(h.node), h.duration))
                .collect(),
            parks: self
                .parks
                .into_iter()
                .map(|p| (NodeId(p.node), p.duration))
                .collect(),
            tasks: self
                .tasks
                .into_iter()
                .map(|t| TaskDecl {
                    id: TaskId(t.id),
                    deadline: t.deadline,
                    subtasks: t.subtasks.into_iter().map(NodeId).collect(),
                })
                .collect(),
            vehicles: self
                .vehicles
                .into_iter()
                .map(|c| (VehicleId(c.id), NodeId(c.start)))
                .collect(),
        }
    }
}

pub fn scenario_to_json(s: &Scenario) -> String {
    let mut text =
        serde_json::to_string_pretty(&ScenarioDocument::from(s)).expect("JSON values serialize");
    text.push('\n');
    text
}

pub fn scenario_from_json(text: &str) -> Result<Scenario, FactError> {
    let doc: ScenarioDocument =
        serde_json::from_str(text).map_err(|e| FactError::Document(e.to_string()))?;
    Ok(build_scenario(doc.into_parts())?)
}
