//! Seeded forest generators with exact ground truth.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{key, GroundTruth, Model, StreamError, StreamSequence, StreamUpdate, VertexId};
use crate::oracle::{self, prufer_decode, OracleError};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Uniform labeled tree on `n` vertices via a random Prüfer sequence.
    UniformRandomTree,
    /// `n` vertices split as evenly as possible into `paths` paths.
    PathBundle { paths: usize },
    /// A vertex with one pendant leaf and `legs` four-vertex paths attached; `n = 4r + 2`.
    SpiderP4 { legs: usize },
    /// A star with `r` leaves, plus a new leaf on every star vertex; `n = 2r + 2`.
    StarWithLeaves { r: usize },
    /// A center with `legs` three-vertex paths attached; `n = 3r + 1`.
    P3Spider { legs: usize },
    /// `components` uniform random trees, each on at least two vertices.
    RandomForest { components: usize },
    /// `K_{1,r}`; `n = r + 1`.
    Star { leaves: usize },
    /// A path on `r` vertices with one leaf hung on each; `n = 2r`.
    Caterpillar { spine: usize },
    /// A uniform random tree on `core` vertices, remaining vertices hung as leaves.
    LeafyTree { core: usize },
}

impl Shape {
    /// Vertex count fixed by the shape, if any.
    pub fn fixed_size(&self) -> Option<usize> {
        match *self {
            Shape::SpiderP4 { legs } => Some(4 * legs + 2),
            Shape::StarWithLeaves { r } => Some(2 * r + 2),
            Shape::P3Spider { legs } => Some(3 * legs + 1),
            Shape::Star { leaves } => Some(leaves + 1),
            Shape::Caterpillar { spine } => Some(2 * spine),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Arbitrary,
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    /// Required for shapes without a fixed size; must agree otherwise.
    pub n: Option<usize>,
    pub shape: Shape,
    pub order: Order,
    pub model: Model,
    /// Decoy insert/delete pairs per forest edge.
    pub deletion_rate: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(shape: Shape, n: Option<usize>, seed: u64) -> Self {
        Self {
            n,
            shape,
            order: Order::Arbitrary,
            model: Model::EdgeArrival,
            deletion_rate: 0.0,
            seed,
        }
    }

    pub fn order(mut self, order: Order) -> Self {
        self.order = order;
        self
    }

    pub fn model(mut self, model: Model) -> Self {
        self.model = model;
        self
    }

    pub fn deletion_rate(mut self, rate: f64) -> Self {
        self.deletion_rate = rate;
        self
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenerateError {
    #[error("invalid shape parameters: {0}")]
    InvalidShapeParams(String),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn invalid(msg: impl Into<String>) -> GenerateError {
    GenerateError::InvalidShapeParams(msg.into())
}

fn random_tree(labels: &[VertexId], rng: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    let k = labels.len();
    if k < 2 {
        return Vec::new();
    }
    let seq: Vec<VertexId> = (0..k - 2)
        .map(|_| rng.gen_range(1..=k as VertexId))
        .collect();
    prufer_decode(&seq, k)
        .expect("valid Prüfer sequence")
        .into_iter()
        .map(|(a, b)| (labels[a as usize - 1], labels[b as usize - 1]))
        .collect()
}

fn path(vertices: impl IntoIterator<Item = VertexId>) -> Vec<(VertexId, VertexId)> {
    let vs: Vec<VertexId> = vertices.into_iter().collect();
    vs.windows(2).map(|w| (w[0], w[1])).collect()
}

fn shape_edges(
    shape: Shape,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(VertexId, VertexId)>, GenerateError> {
    let nv = n as VertexId;
    let edges = match shape {
        Shape::UniformRandomTree => {
            let labels: Vec<VertexId> = (1..=nv).collect();
            random_tree(&labels, rng)
        }
        Shape::PathBundle { paths } => {
            if paths == 0 || 2 * paths > n {
                return Err(invalid(format!("{paths} paths need at least two vertices each, n = {n}")));
            }
            let mut edges = Vec::new();
            let mut next = 1;
            for i in 0..paths {
                let len = n / paths + usize::from(i < n % paths);
                edges.extend(path(next..next + len as VertexId));
                next += len as VertexId;
            }
            edges
        }
        Shape::SpiderP4 { legs } => {
            if legs == 0 {
                return Err(invalid("SpiderP4 needs r >= 1"));
            }
            let mut edges = vec![(1, 2)];
            for i in 0..legs as VertexId {
                let a = 3 + 4 * i;
                edges.push((1, a));
                edges.extend(path(a..a + 4));
            }
            edges
        }
        Shape::StarWithLeaves { r } => {
            if r == 0 {
                return Err(invalid("StarWithLeaves needs r >= 1"));
            }
            let r = r as VertexId;
            let mut edges: Vec<_> = (2..=r + 1).map(|l| (1, l)).collect();
            edges.extend((1..=r + 1).map(|h| (h, h + r + 1)));
            edges
        }
        Shape::P3Spider { legs } => {
            if legs == 0 {
                return Err(invalid("P3Spider needs r >= 1"));
            }
            let mut edges = Vec::new();
            for i in 0..legs as VertexId {
                let a = 2 + 3 * i;
                edges.push((1, a));
                edges.extend(path(a..a + 3));
            }
            edges
        }
        Shape::RandomForest { components } => {
            if components == 0 || 2 * components > n {
                return Err(invalid(format!(
                    "{components} components need at least two vertices each, n = {n}"
                )));
            }
            let mut sizes = vec![2usize; components];
            for _ in 0..n - 2 * components {
                sizes[rng.gen_range(0..components)] += 1;
            }
            let mut labels: Vec<VertexId> = (1..=nv).collect();
            labels.shuffle(rng);
            let mut edges = Vec::new();
            let mut at = 0;
            for s in sizes {
                edges.extend(random_tree(&labels[at..at + s], rng));
                at += s;
            }
            edges
        }
        Shape::Star { leaves } => {
            if leaves == 0 {
                return Err(invalid("Star needs r >= 1"));
            }
            (2..=nv).map(|l| (1, l)).collect()
        }
        Shape::Caterpillar { spine } => {
            if spine == 0 {
                return Err(invalid("Caterpillar needs r >= 1"));
            }
            let r = spine as VertexId;
            let mut edges = path(1..=r);
            edges.extend((1..=r).map(|s| (s, s + r)));
            edges
        }
        Shape::LeafyTree { core } => {
            if core == 0 || core > n {
                return Err(invalid(format!("core {core} must lie in [1, n = {n}]")));
            }
            let labels: Vec<VertexId> = (1..=core as VertexId).collect();
            let mut edges = random_tree(&labels, rng);
            for leaf in core as VertexId + 1..=nv {
                edges.push((rng.gen_range(1..=core as VertexId), leaf));
            }
            edges
        }
    };
    Ok(edges)
}

fn resolve_n(spec: &GeneratorSpec) -> Result<usize, GenerateError> {
    let n = match (spec.shape.fixed_size(), spec.n) {
        (Some(f), Some(n)) if f != n => {
            return Err(invalid(format!(
                "shape {:?} has {f} vertices, but n = {n} was requested",
                spec.shape
            )))
        }
        (Some(f), _) => f,
        (None, Some(n)) => n,
        (None, None) => return Err(invalid(format!("shape {:?} needs n", spec.shape))),
    };
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    if n > u32::MAX as usize / 2 {
        return Err(invalid("n too large"));
    }
    Ok(n)
}

/// Builds the stream and its exact ground truth.
pub fn generate_forest(spec: &GeneratorSpec) -> Result<(StreamSequence, GroundTruth), GenerateError> {
    let n = resolve_n(spec)?;
    if !(spec.deletion_rate >= 0.0 && spec.deletion_rate.is_finite()) {
        return Err(invalid("deletion rate must be a non-negative number"));
    }
    if spec.deletion_rate > 0.0 && spec.model == Model::VertexArrival {
        return Err(invalid("vertex-arrival streams are insertion-only"));
    }
    let mut rng = seed::rng(spec.seed);
    let mut edges = shape_edges(spec.shape, n, &mut rng)?;
    let graph = oracle::Graph::new(n, &edges)?;
    let truth = oracle::exact_params(&graph)?;
    if truth.deg1 + truth.deg_ge2 != n as u64 {
        return Err(invalid("generated forest has isolated vertices"));
    }

    let updates = match spec.model {
        Model::EdgeArrival => {
            if spec.order == Order::Random {
                edges.shuffle(&mut rng);
                for e in edges.iter_mut() {
                    if rng.gen_bool(0.5) {
                        *e = (e.1, e.0);
                    }
                }
            }
            with_decoys(n, &edges, spec.deletion_rate, &mut rng)?
        }
        Model::VertexArrival => vertex_updates(&graph, spec.order, &mut rng),
    };
    let stream = StreamSequence::new(n, spec.model, updates)?;
    Ok((stream, truth))
}

fn vertex_updates(graph: &oracle::Graph, order: Order, rng: &mut ChaCha8Rng) -> Vec<StreamUpdate> {
    let n = graph.n();
    let mut seq: Vec<VertexId> = (1..=n as VertexId).collect();
    if order == Order::Random {
        seq.shuffle(rng);
    }
    let mut pos = vec![0usize; n + 1];
    for (i, &v) in seq.iter().enumerate() {
        pos[v as usize] = i;
    }
    seq.iter()
        .map(|&v| {
            let mut nb: Vec<VertexId> = graph
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| pos[w as usize] < pos[v as usize])
                .collect();
            nb.sort_by_key(|&w| pos[w as usize]);
            StreamUpdate::VertexArrival { u: v, neighbors: nb }
        })
        .collect()
}

/// The final graph of `stream` as a vertex-arrival stream, in id order or a
/// uniformly random order drawn from `seed`.
pub fn to_vertex_arrival(stream: &StreamSequence, order: Order, seed: u64) -> Result<StreamSequence, GenerateError> {
    let graph = oracle::Graph::new(stream.n(), &stream.final_edges())?;
    let mut rng = seed::rng(seed);
    let updates = vertex_updates(&graph, order, &mut rng);
    Ok(StreamSequence::new(stream.n(), Model::VertexArrival, updates)?)
}

/// Interleaves `rate * |edges|` decoy insert/delete pairs at random positions.
fn with_decoys(
    n: usize,
    edges: &[(VertexId, VertexId)],
    rate: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<StreamUpdate>, GenerateError> {
    let decoys = (rate * edges.len() as f64).round() as usize;
    let mut keyed: Vec<(f64, usize, StreamUpdate)> = edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (i as f64, i, StreamUpdate::EdgeInsert { u, v }))
        .collect();
    if decoys > 0 {
        let pairs = n * (n - 1) / 2;
        if decoys + edges.len() > pairs {
            return Err(invalid(format!("{decoys} decoys do not fit on {n} vertices")));
        }
        if decoys > super::DEFAULT_DELETION_FACTOR * n {
            return Err(invalid(format!("{decoys} deletions exceed the O(n) budget")));
        }
        let mut used: HashSet<(VertexId, VertexId)> = edges.iter().map(|&(u, v)| key(u, v)).collect();
        let len = edges.len() as f64;
        let mut seq = edges.len();
        for _ in 0..decoys {
            let (u, v) = loop {
                let u = rng.gen_range(1..=n as VertexId);
                let v = rng.gen_range(1..=n as VertexId);
                if u != v && used.insert(key(u, v)) {
                    break (u, v);
                }
            };
            let a = rng.gen_range(-0.5..len);
            let b = rng.gen_range(a..len + 0.5);
            keyed.push((a, seq, StreamUpdate::EdgeInsert { u, v }));
            keyed.push((b, seq + 1, StreamUpdate::EdgeDelete { u, v }));
            seq += 2;
        }
        keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    }
    Ok(keyed.into_iter().map(|(_, _, up)| up).collect())
}

/// A random simple graph with `m` edges and maximum degree at most `max_degree`.
pub fn generate_bounded_degree_graph(
    n: usize,
    m: usize,
    max_degree: usize,
    seed: u64,
) -> Result<StreamSequence, GenerateError> {
    if n < 2 || m * 2 > n * max_degree || m > n * (n - 1) / 2 {
        return Err(invalid(format!(
            "cannot place {m} edges on {n} vertices with maximum degree {max_degree}"
        )));
    }
    let mut rng = seed::rng(seed);
    let mut deg = vec![0usize; n + 1];
    let mut used = HashSet::new();
    let mut updates = Vec::with_capacity(m);
    let mut attempts = 0usize;
    while updates.len() < m {
        attempts += 1;
        if attempts > 200 * m + 1000 {
            return Err(invalid("rejection sampling did not converge"));
        }
        let u = rng.gen_range(1..=n as VertexId);
        let v = rng.gen_range(1..=n as VertexId);
        if u == v || deg[u as usize] >= max_degree || deg[v as usize] >= max_degree {
            continue;
        }
        if used.insert(key(u, v)) {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
            updates.push(StreamUpdate::EdgeInsert { u, v });
        }
    }
    Ok(StreamSequence::new(n, Model::EdgeArrival, updates)?)
}
