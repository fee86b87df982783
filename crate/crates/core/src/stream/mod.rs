//! Graph streams: event types, the line-oriented text format, validation and
//! multi-pass replay.

mod generate;
mod truth;

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

pub use generate::{
    generate_bounded_degree_graph, generate_forest, to_vertex_arrival, GenerateError, GeneratorSpec, Order, Shape,
};
pub use truth::GroundTruth;

pub type VertexId = u32;

/// Default cap on deletions, as a multiple of `n`.
pub const DEFAULT_DELETION_FACTOR: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    EdgeArrival,
    VertexArrival,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::EdgeArrival => "edge",
            Model::VertexArrival => "vertex",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StreamUpdate {
    EdgeInsert { u: VertexId, v: VertexId },
    EdgeDelete { u: VertexId, v: VertexId },
    VertexArrival { u: VertexId, neighbors: Vec<VertexId> },
}

impl StreamUpdate {
    /// Calls `f(u, v, ±1)` for each edge event this update carries.
    pub fn for_each_edge(&self, mut f: impl FnMut(VertexId, VertexId, i64)) {
        match self {
            StreamUpdate::EdgeInsert { u, v } => f(*u, *v, 1),
            StreamUpdate::EdgeDelete { u, v } => f(*u, *v, -1),
            StreamUpdate::VertexArrival { u, neighbors } => {
                for &w in neighbors {
                    f(*u, w, 1)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StreamError {
    #[error("malformed line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("event {at}: delete of absent edge ({u}, {v})")]
    TurnstileViolation { at: usize, u: VertexId, v: VertexId },
    #[error("event {at}: vertex id {id} outside [1, {n}]")]
    IdOutOfRange { at: usize, id: u64, n: usize },
    #[error("event {at}: self-loop on {u}")]
    SelfLoop { at: usize, u: VertexId },
    #[error("event {at}: edge ({u}, {v}) inserted twice")]
    DuplicateEdge { at: usize, u: VertexId, v: VertexId },
    #[error("event {at}: vertex {u} arrives twice")]
    DuplicateArrival { at: usize, u: VertexId },
    #[error("event {at}: vertex {u} lists {v}, which has not arrived")]
    NeighborNotArrived { at: usize, u: VertexId, v: VertexId },
    #[error("event {at}: {kind} event in a {model}-model stream")]
    ModelMismatch {
        at: usize,
        kind: &'static str,
        model: &'static str,
    },
    #[error("vertex stream ends with {missing} vertices never arriving")]
    IncompleteVertexStream { missing: usize },
    #[error("{deletions} deletions exceed the limit {limit}")]
    TooManyDeletions { deletions: usize, limit: usize },
    #[error("missing header line '# n=<N> model=edge|vertex'")]
    MissingHeader,
    #[error("edge counter went negative at event {at}")]
    NegativeEdgeCount { at: usize },
    #[error("{m} edges on {n} vertices cannot form a forest")]
    NotAForest { n: usize, m: usize },
}

/// An immutable, validated stream over vertex set `[1, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamSequence {
    n: usize,
    model: Model,
    updates: Vec<StreamUpdate>,
    deletion_count: usize,
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl StreamSequence {
    pub fn new(n: usize, model: Model, updates: Vec<StreamUpdate>) -> Result<Self, StreamError> {
        Self::with_deletion_limit(n, model, updates, DEFAULT_DELETION_FACTOR * n.max(1))
    }

    pub fn with_deletion_limit(
        n: usize,
        model: Model,
        updates: Vec<StreamUpdate>,
        max_deletions: usize,
    ) -> Result<Self, StreamError> {
        let deletion_count = validate(n, model, &updates, |i| i + 1)?;
        if deletion_count > max_deletions {
            return Err(StreamError::TooManyDeletions {
                deletions: deletion_count,
                limit: max_deletions,
            });
        }
        Ok(Self {
            n,
            model,
            updates,
            deletion_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn updates(&self) -> &[StreamUpdate] {
        &self.updates
    }

    pub fn len(&self) -> usize {
        self.updates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.updates.is_empty()
    }

    pub fn deletion_count(&self) -> usize {
        self.deletion_count
    }

    pub fn has_deletions(&self) -> bool {
        self.deletion_count > 0
    }

    /// Every event as signed edge updates `(u, v, ±1)`; a vertex arrival
    /// expands to one insertion per listed neighbor.
    pub fn edge_events(&self) -> impl Iterator<Item = (VertexId, VertexId, i64)> + '_ {
        self.updates.iter().flat_map(|up| {
            let mut out = Vec::new();
            up.for_each_edge(|u, v, s| out.push((u, v, s)));
            out
        })
    }

    /// Edges present at the end of the stream, sorted, each as `(min, max)`.
    pub fn final_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut present = HashSet::new();
        for (u, v, s) in self.edge_events() {
            if s > 0 {
                present.insert(key(u, v));
            } else {
                present.remove(&key(u, v));
            }
        }
        let mut edges: Vec<_> = present.into_iter().collect();
        edges.sort_unstable();
        edges
    }

    /// Vertices of degree zero in the final graph.
    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        let mut deg = vec![0usize; self.n + 1];
        for (u, v) in self.final_edges() {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        (1..=self.n as VertexId)
            .filter(|&v| deg[v as usize] == 0)
            .collect()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StreamSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# n={} model={}", self.n, self.model.as_str())?;
        let mut line = String::new();
        for up in &self.updates {
            line.clear();
            match up {
                StreamUpdate::EdgeInsert { u, v } => write!(line, "+ {u} {v}")?,
                StreamUpdate::EdgeDelete { u, v } => write!(line, "- {u} {v}")?,
                StreamUpdate::VertexArrival { u, neighbors } => {
                    write!(line, "v {u} :")?;
                    for (i, w) in neighbors.iter().enumerate() {
                        let sep = if i == 0 { " " } else { "," };
                        write!(line, "{sep}{w}")?;
                    }
                }
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Checks every stream invariant. `pos` maps an update index to the position
/// reported in errors (line number when parsing).
fn validate(
    n: usize,
    model: Model,
    updates: &[StreamUpdate],
    pos: impl Fn(usize) -> usize,
) -> Result<usize, StreamError> {
    let check_id = |at: usize, id: VertexId| {
        if id == 0 || id as usize > n {
            Err(StreamError::IdOutOfRange {
                at,
                id: id as u64,
                n,
            })
        } else {
            Ok(())
        }
    };
    let mut present: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut arrived = vec![false; n + 1];
    let mut arrivals = 0;
    let mut deletions = 0;
    for (i, up) in updates.iter().enumerate() {
        let at = pos(i);
        match up {
            StreamUpdate::EdgeInsert { u, v } | StreamUpdate::EdgeDelete { u, v } => {
                let insert = matches!(up, StreamUpdate::EdgeInsert { .. });
                if model != Model::EdgeArrival {
                    return Err(StreamError::ModelMismatch {
                        at,
                        kind: "edge",
                        model: model.as_str(),
                    });
                }
                check_id(at, *u)?;
                check_id(at, *v)?;
                if u == v {
                    return Err(StreamError::SelfLoop { at, u: *u });
                }
                if insert {
                    if !present.insert(key(*u, *v)) {
                        return Err(StreamError::DuplicateEdge { at, u: *u, v: *v });
                    }
                } else {
                    if !present.remove(&key(*u, *v)) {
                        return Err(StreamError::TurnstileViolation { at, u: *u, v: *v });
                    }
                    deletions += 1;
                }
            }
            StreamUpdate::VertexArrival { u, neighbors } => {
                if model != Model::VertexArrival {
                    return Err(StreamError::ModelMismatch {
                        at,
                        kind: "vertex",
                        model: model.as_str(),
                    });
                }
                check_id(at, *u)?;
                if arrived[*u as usize] {
                    return Err(StreamError::DuplicateArrival { at, u: *u });
                }
                for &w in neighbors {
                    check_id(at, w)?;
                    if w == *u {
                        return Err(StreamError::SelfLoop { at, u: *u });
                    }
                    if !arrived[w as usize] {
                        return Err(StreamError::NeighborNotArrived { at, u: *u, v: w });
                    }
                    if !present.insert(key(*u, w)) {
                        return Err(StreamError::DuplicateEdge { at, u: *u, v: w });
                    }
                }
                arrived[*u as usize] = true;
                arrivals += 1;
            }
        }
    }
    if model == Model::VertexArrival && arrivals != n {
        return Err(StreamError::IncompleteVertexStream {
            missing: n - arrivals,
        });
    }
    Ok(deletions)
}

fn parse_id(tok: &str, line: usize) -> Result<VertexId, StreamError> {
    let id: u64 = tok.trim().parse().map_err(|_| StreamError::MalformedLine {
        line,
        reason: format!("'{tok}' is not a vertex id"),
    })?;
    VertexId::try_from(id).map_err(|_| StreamError::IdOutOfRange { at: line, id, n: 0 })
}

fn parse_header(rest: &str, line: usize) -> Result<(usize, Model), StreamError> {
    let bad = |reason: &str| StreamError::MalformedLine {
        line,
        reason: reason.to_string(),
    };
    let mut n = None;
    let mut model = None;
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|_| bad("bad vertex count"))?);
        } else if let Some(v) = tok.strip_prefix("model=") {
            model = Some(match v {
                "edge" => Model::EdgeArrival,
                "vertex" => Model::VertexArrival,
                _ => return Err(bad("model must be edge or vertex")),
            });
        }
    }
    match (n, model) {
        (Some(n), Some(m)) => Ok((n, m)),
        (Some(n), None) => Ok((n, Model::EdgeArrival)),
        _ => Err(bad("header needs n=<N>")),
    }
}

/// Parses the text format, with the default deletion limit.
pub fn parse_stream(text: &[u8]) -> Result<StreamSequence, StreamError> {
    parse_stream_with_limit(text, None)
}

/// Parses the text format. `max_deletions` defaults to
/// `DEFAULT_DELETION_FACTOR * n`.
pub fn parse_stream_with_limit(
    text: &[u8],
    max_deletions: Option<usize>,
) -> Result<StreamSequence, StreamError> {
    let text = std::str::from_utf8(text).map_err(|e| StreamError::MalformedLine {
        line: 1 + text[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        reason: "invalid UTF-8".into(),
    })?;
    let mut header = None;
    let mut updates = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix('#') {
            let rest = rest.trim_start();
            if header.is_none() && rest.starts_with("n=") {
                header = Some(parse_header(rest, line)?);
            }
            continue;
        }
        if header.is_none() {
            return Err(StreamError::MissingHeader);
        }
        let malformed = |reason: &str| StreamError::MalformedLine {
            line,
            reason: reason.to_string(),
        };
        let up = match s.as_bytes()[0] {
            b'+' | b'-' => {
                let toks: Vec<&str> = s[1..].split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(malformed("edge event needs exactly two ids"));
                }
                let u = parse_id(toks[0], line)?;
                let v = parse_id(toks[1], line)?;
                if s.starts_with('+') {
                    StreamUpdate::EdgeInsert { u, v }
                } else {
                    StreamUpdate::EdgeDelete { u, v }
                }
            }
            b'v' => {
                let body = &s[1..];
                let (id, list) = body
                    .split_once(':')
                    .ok_or_else(|| malformed("vertex event needs ':'"))?;
                let u = parse_id(id, line)?;
                let list = list.trim();
                let neighbors = if list.is_empty() {
                    Vec::new()
                } else {
                    list.split(',')
                        .map(|t| parse_id(t, line))
                        .collect::<Result<Vec<_>, _>>()?
                };
                StreamUpdate::VertexArrival { u, neighbors }
            }
            _ => return Err(malformed("unknown event")),
        };
        updates.push(up);
        lines.push(line);
    }
    let (n, model) = header.ok_or(StreamError::MissingHeader)?;
    let deletion_count = validate(n, model, &updates, |i| lines[i])?;
    let limit = max_deletions.unwrap_or(DEFAULT_DELETION_FACTOR * n.max(1));
    if deletion_count > limit {
        return Err(StreamError::TooManyDeletions {
            deletions: deletion_count,
            limit,
        });
    }
    Ok(StreamSequence {
        n,
        model,
        updates,
        deletion_count,
    })
}

/// Reason attached to an early termination of a replay.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason}")]
pub struct Abort {
    pub reason: String,
}

impl Abort {
    pub fn new(reason: impl Into<String>) -> Self {
        Self {
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("at least one pass is required")]
    NoPasses,
    #[error("aborted in pass {pass} at update {index}: {abort}")]
    Aborted {
        pass: usize,
        index: usize,
        abort: Abort,
    },
}

/// Receives updates during [`replay`]. Passes are numbered from 0.
pub trait PassConsumer {
    fn begin_pass(&mut self, _pass: usize) -> Result<(), Abort> {
        Ok(())
    }

    fn update(&mut self, pass: usize, update: &StreamUpdate) -> Result<(), Abort>;

    fn end_pass(&mut self, _pass: usize) -> Result<(), Abort> {
        Ok(())
    }
}

/// Feeds the stream to `consumer` `passes` times in identical order.
pub fn replay<C: PassConsumer>(
    stream: &StreamSequence,
    passes: usize,
    mut consumer: C,
) -> Result<C, ReplayError> {
    if passes == 0 {
        return Err(ReplayError::NoPasses);
    }
    let wrap = |pass, index, abort| ReplayError::Aborted { pass, index, abort };
    for pass in 0..passes {
        consumer.begin_pass(pass).map_err(|a| wrap(pass, 0, a))?;
        for (i, up) in stream.updates.iter().enumerate() {
            consumer.update(pass, up).map_err(|a| wrap(pass, i, a))?;
        }
        consumer
            .end_pass(pass)
            .map_err(|a| wrap(pass, stream.updates.len(), a))?;
    }
    Ok(consumer)
}

/// Exact signed edge counter.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeCounter {
    m: i64,
    events: usize,
}

impl EdgeCounter {
    pub fn apply(&mut self, sign: i64) -> Result<(), StreamError> {
        self.events += 1;
        self.m += sign;
        if self.m < 0 {
            return Err(StreamError::NegativeEdgeCount { at: self.events });
        }
        Ok(())
    }

    pub fn m(&self) -> u64 {
        self.m.max(0) as u64
    }

    /// Component count `n - m` of a forest without isolated vertices.
    pub fn components(&self, n: usize) -> Result<u64, StreamError> {
        let m = self.m();
        if m >= n as u64 && n > 0 {
            return Err(StreamError::NotAForest { n, m: m as usize });
        }
        Ok(n as u64 - m)
    }

    pub const SPACE_BYTES: usize = 16;
}

/// Final edge count `m` and component count `c = n - m`.
pub fn exact_counters(stream: &StreamSequence) -> Result<(u64, u64), StreamError> {
    let mut counter = EdgeCounter::default();
    for (_, _, s) in stream.edge_events() {
        counter.apply(s)?;
    }
    let c = counter.components(stream.n)?;
    Ok((counter.m(), c))
}
