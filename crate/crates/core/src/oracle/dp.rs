//! Rooted-tree dynamic programs on forests, optionally with per-vertex
//! membership constraints.

use super::Graph;
use crate::stream::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Free,
    ForcedIn,
    ForcedOut,
}

const NEG: i64 = i64::MIN / 4;
const INF: u64 = u64::MAX / 4;

fn add(a: u64, b: u64) -> u64 {
    (a + b).min(INF)
}

/// Maximum independent set size subject to `constraint`, or `None` if infeasible.
/// `g` must be a forest.
pub fn max_independent_set(g: &Graph, constraint: impl Fn(VertexId) -> Constraint) -> Option<u64> {
    let (order, parent) = g.rooted_order();
    let n = g.n();
    let mut inn = vec![0i64; n + 1];
    let mut out = vec![0i64; n + 1];
    for v in 1..=n {
        let c = constraint(v as VertexId);
        inn[v] = if c == Constraint::ForcedOut { NEG } else { 1 };
        out[v] = if c == Constraint::ForcedIn { NEG } else { 0 };
    }
    let mut total = 0i64;
    for &v in order.iter().rev() {
        let v = v as usize;
        let p = parent[v] as usize;
        if p == 0 {
            total += inn[v].max(out[v]);
        } else {
            inn[p] = (inn[p] + out[v]).max(NEG);
            out[p] = (out[p] + inn[v].max(out[v])).max(NEG);
        }
    }
    (total >= 0 && total > NEG / 2).then_some(total as u64)
}

/// Minimum dominating set size subject to `constraint`, or `None` if infeasible.
pub fn min_dominating_set(g: &Graph, constraint: impl Fn(VertexId) -> Constraint) -> Option<u64> {
    let (order, parent) = g.rooted_order();
    let n = g.n();
    // taken: v in D. covered: v not in D, dominated by a child. open: v not in D, not yet dominated.
    let mut taken = vec![0u64; n + 1];
    let mut covered_sum = vec![0u64; n + 1];
    let mut covered_fix = vec![INF; n + 1];
    let mut open = vec![0u64; n + 1];
    for v in 1..=n {
        if constraint(v as VertexId) == Constraint::ForcedOut {
            taken[v] = INF;
        } else {
            taken[v] = 1;
        }
    }
    let finish = |v: usize, taken: &[u64], covered_sum: &[u64], covered_fix: &[u64], open: &[u64]| {
        let forced_in = constraint(v as VertexId) == Constraint::ForcedIn;
        let t = taken[v];
        let c = if forced_in {
            INF
        } else {
            add(covered_sum[v], covered_fix[v])
        };
        let o = if forced_in { INF } else { open[v] };
        (t, c, o)
    };
    let mut total = 0u64;
    for &v in order.iter().rev() {
        let v = v as usize;
        let (t, c, o) = finish(v, &taken, &covered_sum, &covered_fix, &open);
        let p = parent[v] as usize;
        if p == 0 {
            total = add(total, t.min(c));
        } else {
            taken[p] = add(taken[p], t.min(c).min(o));
            let best = t.min(c);
            covered_sum[p] = add(covered_sum[p], best);
            // Extra cost of forcing this child into D so that it dominates p.
            let fix = if t >= INF { INF } else { t - best };
            covered_fix[p] = covered_fix[p].min(fix);
            open[p] = add(open[p], c);
        }
    }
    (total < INF).then_some(total)
}

/// Maximum matching size of a forest.
pub fn max_matching(g: &Graph) -> u64 {
    let (order, parent) = g.rooted_order();
    let n = g.n();
    // free[v]: best in subtree with v unmatched; gain[v]: best improvement from matching v to a child.
    let mut free = vec![0u64; n + 1];
    let mut gain = vec![0u64; n + 1];
    let mut total = 0;
    for &v in order.iter().rev() {
        let v = v as usize;
        let best = free[v] + gain[v];
        let p = parent[v] as usize;
        if p == 0 {
            total += best;
        } else {
            free[p] += best;
            // matching p with v: replace best[v] by free[v] + 1
            let g = (free[v] + 1).saturating_sub(best);
            gain[p] = gain[p].max(g);
        }
    }
    total
}

/// Size of a maximum matching that pairs every support vertex with one of its
/// leaves; the remaining vertices are matched optimally.
pub fn matching_with_support_leaf_edges(g: &Graph) -> u64 {
    let n = g.n();
    let leaf = |v: VertexId| g.degree(v) == 1;
    let mut removed = vec![false; n + 1];
    let mut forced = 0;
    for s in 1..=n as VertexId {
        if leaf(s) && g.neighbors(s).iter().any(|&w| leaf(w)) {
            // A single-edge component: both ends are support vertices.
            if s < g.neighbors(s)[0] {
                forced += 1;
            }
            removed[s as usize] = true;
            continue;
        }
        if g.neighbors(s).iter().any(|&w| leaf(w)) {
            forced += 1;
            removed[s as usize] = true;
            for &w in g.neighbors(s) {
                if leaf(w) {
                    removed[w as usize] = true;
                }
            }
        }
    }
    let keep: Vec<VertexId> = (1..=n as VertexId).filter(|&v| !removed[v as usize]).collect();
    forced + max_matching(&g.induced(&keep))
}
