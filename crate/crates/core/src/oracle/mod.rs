//! Exact reference computations: tree DPs, exhaustive search, permutation
//! enumeration and labeled-tree enumeration.

mod brute;
mod dp;
mod graph;
mod trees;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use thiserror::Error;

use crate::hash::VertexPriority;
use crate::stream::{GroundTruth, VertexId};

pub use brute::{brute_force_beta, brute_force_gamma, brute_force_phi, BRUTE_FORCE_LIMIT};
pub use dp::{
    max_independent_set, max_matching, min_dominating_set, Constraint,
    matching_with_support_leaf_edges,
};
pub use graph::Graph;
pub use trees::{enumerate_trees, prufer_decode, TreeIter, MAX_ENUMERATION_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph contains a cycle")]
    NotAForest,
    #[error("vertices {x} and {y} are adjacent")]
    AdjacentPair { x: VertexId, y: VertexId },
    #[error("{what} = {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

/// `Σ_v 1/(deg(v)+1)` as an exact fraction.
pub fn exact_lambda(g: &Graph) -> BigRational {
    let mut by_degree: Vec<u64> = Vec::new();
    for v in 1..=g.n() as VertexId {
        let d = g.degree(v);
        if by_degree.len() <= d {
            by_degree.resize(d + 1, 0);
        }
        by_degree[d] += 1;
    }
    let mut sum = BigRational::zero();
    for (d, &count) in by_degree.iter().enumerate() {
        if count > 0 {
            sum += BigRational::new(BigInt::from(count), BigInt::from(d as u64 + 1));
        }
    }
    sum
}

/// Leaf, non-leaf and support counts of any graph, plus components.
pub(crate) fn degree_counts(g: &Graph) -> (u64, u64, u64) {
    let mut deg1 = 0;
    let mut deg_ge2 = 0;
    let mut supp = 0;
    for v in 1..=g.n() as VertexId {
        match g.degree(v) {
            0 => {}
            1 => deg1 += 1,
            _ => deg_ge2 += 1,
        }
        if g.neighbors(v).iter().any(|&w| g.degree(w) == 1) {
            supp += 1;
        }
    }
    (deg1, deg_ge2, supp)
}

/// All parameters of a forest. Isolated vertices are allowed and count as
/// components of size one.
pub fn exact_params(g: &Graph) -> Result<GroundTruth, OracleError> {
    if !g.is_forest() {
        return Err(OracleError::NotAForest);
    }
    let free = |_: VertexId| Constraint::Free;
    let beta = max_independent_set(g, free).expect("unconstrained");
    let gamma = min_dominating_set(g, free).expect("unconstrained");
    let phi = max_matching(g);
    let (deg1, deg_ge2, supp) = degree_counts(g);
    let n = g.n();
    let m = g.edge_count();
    Ok(GroundTruth {
        n,
        m,
        lambda: exact_lambda(g),
        beta,
        gamma,
        phi,
        deg1,
        deg_ge2,
        supp,
        components: g.component_count() as u64,
        avg_degree: Ratio::new(2 * m as u64, n.max(1) as u64),
        max_degree: g.max_degree() as u64,
    })
}

/// `{v : v precedes all of N(v)}` under `pi`, sorted.
pub fn greedy_permutation_is<P: VertexPriority + ?Sized>(g: &Graph, pi: &P) -> Vec<VertexId> {
    (1..=g.n() as VertexId)
        .filter(|&v| g.neighbors(v).iter().all(|&w| pi.precedes(v, w)))
        .collect()
}

/// Largest closed neighbourhood union handled by [`min_first_cond_prob`].
pub const MAX_COND_PROB_VERTICES: usize = 10;

/// Exact `Pr[x<N(x) and y<N(y)]` and `Pr[y<N(y) | x<N(x)]` over uniform
/// orders, by enumerating orders of `N[x] ∪ N[y]`.
pub fn min_first_cond_prob(
    g: &Graph,
    x: VertexId,
    y: VertexId,
) -> Result<(BigRational, BigRational), OracleError> {
    if x == y || g.neighbors(x).contains(&y) {
        return Err(OracleError::AdjacentPair { x, y });
    }
    let mut union: Vec<VertexId> = vec![x, y];
    for &w in g.neighbors(x).iter().chain(g.neighbors(y)) {
        if !union.contains(&w) {
            union.push(w);
        }
    }
    if union.len() > MAX_COND_PROB_VERTICES {
        return Err(OracleError::TooLarge {
            what: "|N[x] ∪ N[y]|",
            size: union.len(),
            limit: MAX_COND_PROB_VERTICES,
        });
    }
    let idx = |v: VertexId| union.iter().position(|&u| u == v).unwrap();
    let nx: Vec<usize> = g.neighbors(x).iter().map(|&v| idx(v)).collect();
    let ny: Vec<usize> = g.neighbors(y).iter().map(|&v| idx(v)).collect();

    let k = union.len();
    let mut rank: Vec<usize> = (0..k).collect();
    let mut total = 0u64;
    let mut count_x = 0u64;
    let mut count_xy = 0u64;
    let mut tally = |rank: &[usize]| {
        total += 1;
        let ax = nx.iter().all(|&w| rank[0] < rank[w]);
        if ax {
            count_x += 1;
            if ny.iter().all(|&w| rank[1] < rank[w]) {
                count_xy += 1;
            }
        }
    };
    // Heap's algorithm over rank assignments.
    let mut c = vec![0usize; k];
    tally(&rank);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                rank.swap(0, i);
            } else {
                rank.swap(c[i], i);
            }
            tally(&rank);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let frac = |a: u64, b: u64| BigRational::new(BigInt::from(a), BigInt::from(b));
    Ok((frac(count_xy, total), frac(count_xy, count_x)))
}

/// Non-adjacent `x = 1`, `y = 2` with `k` common neighbours, `l` private
/// neighbours of `x` and `r` private neighbours of `y`.
pub fn correlation_gadget(l: usize, k: usize, r: usize) -> Graph {
    let n = 2 + l + k + r;
    let mut edges = Vec::new();
    let mut next = 3 as VertexId;
    for _ in 0..k {
        edges.push((1, next));
        edges.push((2, next));
        next += 1;
    }
    for _ in 0..l {
        edges.push((1, next));
        next += 1;
    }
    for _ in 0..r {
        edges.push((2, next));
        next += 1;
    }
    Graph::new(n, &edges).expect("gadget is simple")
}
