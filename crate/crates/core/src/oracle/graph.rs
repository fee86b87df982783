use std::collections::HashSet;

use super::OracleError;
use crate::stream::VertexId;

/// Simple undirected graph on `[1, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<VertexId>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, OracleError> {
        let mut adj = vec![Vec::new(); n + 1];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == 0 || v == 0 || u as usize > n || v as usize > n {
                return Err(OracleError::InvalidGraph(format!("edge ({u}, {v}) outside [1, {n}]")));
            }
            if u == v {
                return Err(OracleError::InvalidGraph(format!("self-loop on {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(OracleError::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(Self {
            n,
            adj,
            m: edges.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (1..=self.n as VertexId).flat_map(move |u| {
            self.adj[u as usize]
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    /// Component label in `0..component_count()` for every vertex (index 0 unused).
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n + 1];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 1..=self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s as VertexId);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u as usize] {
                    if label[w as usize] == usize::MAX {
                        label[w as usize] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.component_labels()
            .iter()
            .skip(1)
            .max()
            .map_or(0, |&c| c + 1)
    }

    pub fn is_forest(&self) -> bool {
        self.m + self.component_count() == self.n
    }

    /// Vertices in DFS preorder with their parents (0 for roots).
    pub(crate) fn rooted_order(&self) -> (Vec<VertexId>, Vec<VertexId>) {
        let mut parent = vec![0 as VertexId; self.n + 1];
        let mut visited = vec![false; self.n + 1];
        let mut order = Vec::with_capacity(self.n);
        let mut stack = Vec::new();
        for s in 1..=self.n as VertexId {
            if visited[s as usize] {
                continue;
            }
            visited[s as usize] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                order.push(u);
                for &w in &self.adj[u as usize] {
                    if !visited[w as usize] {
                        visited[w as usize] = true;
                        parent[w as usize] = u;
                        stack.push(w);
                    }
                }
            }
        }
        (order, parent)
    }

    /// Induced subgraph on `keep`, relabeled to `1..=|keep|` in the given order.
    pub fn induced(&self, keep: &[VertexId]) -> Graph {
        let mut map = vec![0 as VertexId; self.n + 1];
        for (i, &v) in keep.iter().enumerate() {
            map[v as usize] = i as VertexId + 1;
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| map[u as usize] != 0 && map[v as usize] != 0)
            .map(|(u, v)| (map[u as usize], map[v as usize]))
            .collect();
        Graph::new(keep.len(), &edges).expect("induced subgraph is simple")
    }
}
