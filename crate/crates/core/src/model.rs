//! Histories, their text formats and the syntactic checks every checker relies on.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Timestamps are opaque totally ordered integers; only their relative order matters.
pub type Time = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdtKind {
    Register,
    Set,
    Stack,
    Queue,
    PriorityQueue,
}

impl AdtKind {
    pub const ALL: [AdtKind; 5] =
        [AdtKind::Register, AdtKind::Set, AdtKind::Stack, AdtKind::Queue, AdtKind::PriorityQueue];

    pub fn name(self) -> &'static str {
        match self {
            AdtKind::Register => "register",
            AdtKind::Set => "set",
            AdtKind::Stack => "stack",
            AdtKind::Queue => "queue",
            AdtKind::PriorityQueue => "priority_queue",
        }
    }

    pub fn methods(self) -> &'static [Method] {
        use Method::*;
        match self {
            AdtKind::Register => &[Write, Read],
            AdtKind::Set => &[InsertOk, InsertFail, DeleteOk, DeleteFail, ContainsTrue, ContainsFalse],
            AdtKind::Stack => &[Push, Pop, Peek, Empty],
            AdtKind::Queue | AdtKind::PriorityQueue => &[Enq, Deq, Peek, Empty],
        }
    }

    pub fn supports(self, method: Method) -> bool {
        self.methods().contains(&method)
    }

    /// The unique method that introduces a value.
    pub fn add_method(self) -> Method {
        match self {
            AdtKind::Register => Method::Write,
            AdtKind::Set => Method::InsertOk,
            AdtKind::Stack => Method::Push,
            AdtKind::Queue | AdtKind::PriorityQueue => Method::Enq,
        }
    }

    /// The method that retires a value, if the type has one.
    pub fn remove_method(self) -> Option<Method> {
        match self {
            AdtKind::Register => None,
            AdtKind::Set => Some(Method::DeleteOk),
            AdtKind::Stack => Some(Method::Pop),
            AdtKind::Queue | AdtKind::PriorityQueue => Some(Method::Deq),
        }
    }

    /// Containers whose histories may carry `empty` observations.
    pub fn has_empty(self) -> bool {
        matches!(self, AdtKind::Stack | AdtKind::Queue | AdtKind::PriorityQueue)
    }
}

impl fmt::Display for AdtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown data type `{0}` (expected register, set, stack, queue or priority_queue)")]
pub struct UnknownAdt(pub String);

impl FromStr for AdtKind {
    type Err = UnknownAdt;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "register" => Ok(AdtKind::Register),
            "set" => Ok(AdtKind::Set),
            "stack" => Ok(AdtKind::Stack),
            "queue" => Ok(AdtKind::Queue),
            "priority_queue" | "priority-queue" | "pqueue" => Ok(AdtKind::PriorityQueue),
            other => Err(UnknownAdt(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Write,
    Read,
    InsertOk,
    InsertFail,
    DeleteOk,
    DeleteFail,
    ContainsTrue,
    ContainsFalse,
    Push,
    Pop,
    Peek,
    Empty,
    Enq,
    Deq,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Write => "write",
            Method::Read => "read",
            Method::InsertOk => "insert_ok",
            Method::InsertFail => "insert_fail",
            Method::DeleteOk => "delete_ok",
            Method::DeleteFail => "delete_fail",
            Method::ContainsTrue => "contains_true",
            Method::ContainsFalse => "contains_false",
            Method::Push => "push",
            Method::Pop => "pop",
            Method::Peek => "peek",
            Method::Empty => "empty",
            Method::Enq => "enq",
            Method::Deq => "deq",
        }
    }

    pub fn is_add(self) -> bool {
        matches!(self, Method::Write | Method::InsertOk | Method::Push | Method::Enq)
    }

    pub fn is_remove(self) -> bool {
        matches!(self, Method::DeleteOk | Method::Pop | Method::Deq)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AdtKind::ALL.iter().flat_map(|adt| adt.methods()).copied().find(|m| m.name() == s).ok_or_else(|| s.to_string())
    }
}

/// A value tag. `Empty` is the distinguished value carried only by `empty` operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Value {
    Id(u64),
    Empty,
}

impl Value {
    pub fn id(self) -> Option<u64> {
        match self {
            Value::Id(v) => Some(v),
            Value::Empty => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Id(v) => write!(f, "{v}"),
            Value::Empty => f.write_str("-"),
        }
    }
}

impl FromStr for Value {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(Value::Empty);
        }
        match s.parse::<u64>() {
            Ok(v) if v >= 1 => Ok(Value::Id(v)),
            _ => Err(format!("bad value `{s}` (expected a positive integer or `-`)")),
        }
    }
}

/// Process names are interned so that cloning histories stays cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Process(Arc<str>);

impl Process {
    pub fn new(name: &str) -> Self {
        Process(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Process {
    fn from(s: &str) -> Self {
        Process::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub id: u64,
    pub process: Process,
    pub method: Method,
    pub value: Value,
    pub inv: Time,
    pub res: Time,
}

impl Operation {
    pub fn new(id: u64, process: impl Into<Process>, method: Method, value: Value, inv: Time, res: Time) -> Self {
        Operation { id, process: process.into(), method, value, inv, res }
    }

    /// Real-time precedence. Windows are open intervals, so a window ending exactly
    /// where another starts still comes first.
    pub fn precedes(&self, other: &Operation) -> bool {
        self.res <= other.inv
    }
}

/// A finite set of operations on one object, kept sorted by operation id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    pub adt: AdtKind,
    pub ops: Vec<Operation>,
}

impl History {
    pub fn new(adt: AdtKind, mut ops: Vec<Operation>) -> Self {
        if !ops.windows(2).all(|w| w[0].id <= w[1].id) {
            ops.sort_by_key(|o| o.id);
        }
        History { adt, ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Distinct non-empty value ids, ascending.
    pub fn values(&self) -> BTreeSet<u64> {
        self.ops.iter().filter_map(|o| o.value.id()).collect()
    }

    pub fn max_res(&self) -> Option<Time> {
        self.ops.iter().map(|o| o.res).max()
    }

    pub fn max_op_id(&self) -> u64 {
        self.ops.iter().map(|o| o.id).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Ops,
    Events,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ops" => Ok(Format::Ops),
            "events" => Ok(Format::Events),
            other => Err(format!("unknown format `{other}` (expected ops or events)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: method `{method}` is not an operation of {adt}")]
    UnknownMethod { line: usize, method: String, adt: AdtKind },
    #[error("line {line}: response on process `{process}` with no pending invocation")]
    UnmatchedResponse { line: usize, process: String },
    #[error("line {line}: invocation on process `{process}` while another is pending")]
    OverlappingInvocation { line: usize, process: String },
    #[error("line {line}: header declares {found} but {expected} was requested")]
    AdtMismatch { line: usize, expected: AdtKind, found: AdtKind },
    #[error("no `adt <kind>` header and no data type given")]
    MissingAdt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub history: History,
    pub warnings: Vec<String>,
}

/// Parses a history. `adt` supplies the data type when the text has no header;
/// when both are present they must agree.
pub fn parse_history(text: &str, format: Format, adt: Option<AdtKind>) -> Result<Parsed, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();

    let mut kind = adt;
    if let Some(&(line, l)) = lines.peek() {
        let mut toks = l.split_whitespace();
        if toks.next() == Some("adt") {
            let name = toks.next().ok_or_else(|| syntax(line, "missing data type after `adt`"))?;
            if toks.next().is_some() {
                return Err(syntax(line, "trailing tokens after data type"));
            }
            let found = name.parse::<AdtKind>().map_err(|e| syntax(line, &e.to_string()))?;
            if let Some(expected) = adt {
                if expected != found {
                    return Err(ParseError::AdtMismatch { line, expected, found });
                }
            }
            kind = Some(found);
            lines.next();
        }
    }
    let kind = kind.ok_or(ParseError::MissingAdt)?;

    match format {
        Format::Ops => parse_ops(kind, lines),
        Format::Events => parse_events(kind, lines),
    }
}

fn syntax(line: usize, message: &str) -> ParseError {
    ParseError::Syntax { line, message: message.to_string() }
}

fn parse_method(adt: AdtKind, line: usize, tok: &str) -> Result<Method, ParseError> {
    match tok.parse::<Method>() {
        Ok(m) if adt.supports(m) => Ok(m),
        _ => Err(ParseError::UnknownMethod { line, method: tok.to_string(), adt }),
    }
}

fn parse_value(method: Method, line: usize, tok: &str) -> Result<Value, ParseError> {
    let value = tok.parse::<Value>().map_err(|e| syntax(line, &e))?;
    match (method, value) {
        (Method::Empty, Value::Empty) => Ok(value),
        (Method::Empty, _) => Err(syntax(line, "`empty` carries the value `-`")),
        (_, Value::Empty) => Err(syntax(line, &format!("`{method}` needs a value"))),
        _ => Ok(value),
    }
}

fn parse_time(line: usize, tok: &str) -> Result<Time, ParseError> {
    tok.parse::<Time>().map_err(|_| syntax(line, &format!("bad timestamp `{tok}`")))
}

fn parse_ops<'a>(adt: AdtKind, lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Parsed, ParseError> {
    let mut interner = Interner::default();
    let mut ops = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 7 || toks[0] != "op" {
            return Err(syntax(line, "expected `op <id> <proc> <method> <value> <t_inv> <t_res>`"));
        }
        let id = toks[1].parse::<u64>().map_err(|_| syntax(line, &format!("bad op id `{}`", toks[1])))?;
        let method = parse_method(adt, line, toks[3])?;
        let value = parse_value(method, line, toks[4])?;
        let inv = parse_time(line, toks[5])?;
        let res = parse_time(line, toks[6])?;
        ops.push(Operation { id, process: interner.get(toks[2]), method, value, inv, res });
    }
    Ok(Parsed { history: History::new(adt, ops), warnings: Vec::new() })
}

fn parse_events<'a>(adt: AdtKind, lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Parsed, ParseError> {
    let mut interner = Interner::default();
    let mut pending: HashMap<Process, Operation> = HashMap::new();
    let mut ops = Vec::new();
    let mut next_id = 1u64;
    for (event, (line, l)) in lines.enumerate() {
        let t = event as Time + 1;
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["inv", p, m, v] => {
                let process = interner.get(p);
                if pending.contains_key(&process) {
                    return Err(ParseError::OverlappingInvocation { line, process: p.to_string() });
                }
                let method = parse_method(adt, line, m)?;
                let value = parse_value(method, line, v)?;
                let op = Operation { id: next_id, process: process.clone(), method, value, inv: t, res: t };
                next_id += 1;
                pending.insert(process, op);
            }
            ["res", p] => {
                let mut op = pending
                    .remove(&interner.get(p))
                    .ok_or_else(|| ParseError::UnmatchedResponse { line, process: p.to_string() })?;
                op.res = t;
                ops.push(op);
            }
            _ => return Err(syntax(line, "expected `inv <proc> <method> <value>` or `res <proc>`")),
        }
    }
    let mut open: Vec<Operation> = pending.into_values().collect();
    open.sort_by_key(|o| o.id);
    let warnings =
        open.iter().map(|o| format!("dropped unfinished {} {} on process {}", o.method, o.value, o.process)).collect();
    Ok(Parsed { history: History::new(adt, ops), warnings })
}

#[derive(Default)]
struct Interner(HashMap<String, Process>);

impl Interner {
    fn get(&mut self, name: &str) -> Process {
        if let Some(p) = self.0.get(name) {
            return p.clone();
        }
        let p = Process::new(name);
        self.0.insert(name.to_string(), p.clone());
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("operation {0} has an empty window and cannot be written as events")]
    EmptyWindow(u64),
    #[error("process name `{0}` cannot be written as a single token")]
    BadProcessName(String),
}

pub fn serialize_history(h: &History, format: Format) -> Result<String, SerializeError> {
    use std::fmt::Write;
    if let Some(o) =
        h.ops.iter().find(|o| o.process.as_str().is_empty() || o.process.as_str().contains(char::is_whitespace))
    {
        return Err(SerializeError::BadProcessName(o.process.to_string()));
    }
    let mut out = format!("adt {}\n", h.adt);
    match format {
        Format::Ops => {
            for o in &h.ops {
                writeln!(out, "op {} {} {} {} {} {}", o.id, o.process, o.method, o.value, o.inv, o.res).unwrap();
            }
        }
        Format::Events => {
            if let Some(o) = h.ops.iter().find(|o| o.inv >= o.res) {
                return Err(SerializeError::EmptyWindow(o.id));
            }
            // Windows are open, so at a shared time every response goes before every
            // invocation; the event order then keeps exactly the same precedences.
            // (time, is_invocation, op index)
            let mut events: Vec<(Time, bool, usize)> = Vec::with_capacity(2 * h.len());
            for (i, o) in h.ops.iter().enumerate() {
                events.push((o.inv, true, i));
                events.push((o.res, false, i));
            }
            events.sort_unstable();
            for (_, is_inv, i) in events {
                let o = &h.ops[i];
                if !is_inv {
                    writeln!(out, "res {}", o.process).unwrap();
                } else {
                    writeln!(out, "inv {} {} {}", o.process, o.method, o.value).unwrap();
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("op {op}: invocation {inv} is not before response {res}")]
    EmptyWindow { op: u64, inv: Time, res: Time },
    #[error("ops {first} and {second} overlap on process {process}")]
    ProcessOverlap { process: String, first: u64, second: u64 },
    #[error("op id {0} is used more than once")]
    DuplicateId(u64),
    #[error("op {op}: {method} is not an operation of {adt}")]
    ForeignMethod { op: u64, method: Method, adt: AdtKind },
    #[error("op {op}: value does not match method {method}")]
    ValueMismatch { op: u64, method: Method },
}

/// Checks well-formedness: every window is nonempty and each process is sequential
/// (two operations of one process may not share even a single instant).
pub fn validate_well_formed(h: &History) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let mut seen = HashSet::with_capacity(h.len());
    let mut by_process: HashMap<&Process, Vec<&Operation>> = HashMap::new();
    for o in &h.ops {
        if !seen.insert(o.id) {
            violations.push(Violation::DuplicateId(o.id));
        }
        if o.inv >= o.res {
            violations.push(Violation::EmptyWindow { op: o.id, inv: o.inv, res: o.res });
        }
        if !h.adt.supports(o.method) {
            violations.push(Violation::ForeignMethod { op: o.id, method: o.method, adt: h.adt });
        }
        if (o.method == Method::Empty) != (o.value == Value::Empty) {
            violations.push(Violation::ValueMismatch { op: o.id, method: o.method });
        }
        by_process.entry(&o.process).or_default().push(o);
    }
    let mut processes: Vec<_> = by_process.into_iter().collect();
    processes.sort_by(|a, b| a.0.cmp(b.0));
    for (process, mut ops) in processes {
        ops.sort_by_key(|o| (o.inv, o.res, o.id));
        for w in ops.windows(2) {
            if w[1].inv <= w[0].res {
                violations.push(Violation::ProcessOverlap {
                    process: process.to_string(),
                    first: w[0].id,
                    second: w[1].id,
                });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Checks that every value is added exactly once and removed at most once.
/// On failure returns the offending values.
pub fn validate_unambiguous(h: &History) -> Result<(), BTreeSet<u64>> {
    let mut counts: HashMap<u64, (u32, u32)> = HashMap::new();
    for o in &h.ops {
        if let Value::Id(v) = o.value {
            let c = counts.entry(v).or_default();
            if o.method == h.adt.add_method() {
                c.0 += 1;
            } else if Some(o.method) == h.adt.remove_method() {
                c.1 += 1;
            }
        }
    }
    let bad: BTreeSet<u64> =
        counts.into_iter().filter(|&(_, (adds, removes))| adds != 1 || removes > 1).map(|(v, _)| v).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Selector<'a> {
    Value(Value),
    Values(&'a BTreeSet<u64>),
    Methods(&'a [Method]),
    Process(&'a str),
}

pub fn project(h: &History, selector: Selector<'_>) -> History {
    let keep = |o: &Operation| match selector {
        Selector::Value(v) => o.value == v,
        Selector::Values(vs) => o.value.id().is_some_and(|v| vs.contains(&v)),
        Selector::Methods(ms) => ms.contains(&o.method),
        Selector::Process(p) => o.process.as_str() == p,
    };
    History { adt: h.adt, ops: h.ops.iter().filter(|o| keep(o)).cloned().collect() }
}
