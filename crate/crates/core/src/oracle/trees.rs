//! Labeled trees via Prüfer sequences.

use super::{Graph, OracleError};
use crate::stream::VertexId;

pub const MAX_ENUMERATION_N: usize = 9;

/// Decodes a Prüfer sequence of length `n - 2` over `[1, n]` into `n - 1` edges.
pub fn prufer_decode(seq: &[VertexId], n: usize) -> Result<Vec<(VertexId, VertexId)>, OracleError> {
    if n < 2 || seq.len() != n - 2 {
        return Err(OracleError::InvalidGraph(format!(
            "Prüfer sequence of length {} does not describe a tree on {n} vertices",
            seq.len()
        )));
    }
    if let Some(&bad) = seq.iter().find(|&&v| v == 0 || v as usize > n) {
        return Err(OracleError::InvalidGraph(format!("label {bad} outside [1, {n}]")));
    }
    let mut degree = vec![1usize; n + 1];
    for &v in seq {
        degree[v as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in seq {
        let v = v as usize;
        edges.push((leaf as VertexId, v as VertexId));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf as VertexId, n as VertexId));
    Ok(edges)
}

/// Iterator over every labeled tree on `n` vertices.
pub struct TreeIter {
    n: usize,
    seq: Vec<VertexId>,
    done: bool,
}

impl Iterator for TreeIter {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.done {
            return None;
        }
        let edges = prufer_decode(&self.seq, self.n).expect("odometer stays in range");
        let g = Graph::new(self.n, &edges).expect("decoded tree is simple");
        // advance the odometer
        let mut i = self.seq.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if (self.seq[i] as usize) < self.n {
                self.seq[i] += 1;
                break;
            }
            self.seq[i] = 1;
        }
        Some(g)
    }
}

/// All `n^(n-2)` labeled trees on `n` vertices, `2 <= n <= 9`.
pub fn enumerate_trees(n: usize) -> Result<TreeIter, OracleError> {
    if n > MAX_ENUMERATION_N {
        return Err(OracleError::TooLarge {
            what: "n",
            size: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    if n < 2 {
        return Err(OracleError::InvalidGraph("trees need n >= 2".into()));
    }
    Ok(TreeIter {
        n,
        seq: vec![1; n - 2],
        done: false,
    })
}
