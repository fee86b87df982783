//! Exhaustive search over vertex subsets; only for small graphs.

use super::Graph;
use crate::stream::VertexId;

pub const BRUTE_FORCE_LIMIT: usize = 20;

fn masks(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= BRUTE_FORCE_LIMIT, "brute force limited to n <= {BRUTE_FORCE_LIMIT}");
    (1..=g.n() as VertexId)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << (w - 1)))
        .collect()
}

pub fn brute_force_beta(g: &Graph) -> u64 {
    let adj = masks(g);
    let n = g.n();
    let mut best = 0;
    for s in 0u32..1 << n {
        let size = s.count_ones();
        if size <= best {
            continue;
        }
        if (0..n).all(|v| s & 1 << v == 0 || adj[v] & s == 0) {
            best = size;
        }
    }
    best as u64
}

pub fn brute_force_gamma(g: &Graph) -> u64 {
    let adj = masks(g);
    let n = g.n();
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = n as u32;
    for s in 0u32..1 << n {
        let size = s.count_ones();
        if size >= best {
            continue;
        }
        let covered = (0..n).filter(|&v| s & 1 << v != 0).fold(s, |c, v| c | adj[v]);
        if covered == all {
            best = size;
        }
    }
    best as u64
}

pub fn brute_force_phi(g: &Graph) -> u64 {
    fn go(adj: &[u32], used: u32, n: usize) -> u64 {
        let Some(v) = (0..n).find(|&v| used & 1 << v == 0) else {
            return 0;
        };
        let used = used | 1 << v;
        let mut best = go(adj, used, n);
        let mut options = adj[v] & !used;
        while options != 0 {
            let w = options.trailing_zeros();
            options &= options - 1;
            best = best.max(1 + go(adj, used | 1 << w, n));
        }
        best
    }
    let adj = masks(g);
    go(&adj, 0, g.n())
}
