use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`, no loops or parallel edges.
///
/// Edges are stored normalized (`u < v`) in insertion order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl AsRef<Graph> for Graph {
    fn as_ref(&self) -> &Graph {
        self
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.add_edge(0, n - 1);
        }
        g
    }

    /// Hub `0` joined to every vertex of a rim cycle `1..n`.
    pub fn wheel(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 1..n {
            g.add_edge(0, u);
            let next = if u + 1 < n { u + 1 } else { 1 };
            if next != u {
                g.add_edge(u, next);
            }
        }
        g
    }

    /// Adds an edge; returns false when it already existed.
    ///
    /// Panics on self loops or out-of-range vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        self.try_add_edge(u, v).expect("valid edge")
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n {
            return Err(Error::VertexOutOfRange(u));
        }
        if v >= self.n {
            return Err(Error::VertexOutOfRange(v));
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Ok(false);
        }
        let (a, b) = (u.min(v), u.max(v));
        self.edges.push((a, b));
        self.adj[a].push(b);
        self.adj[b].push(a);
        Ok(true)
    }

    /// Adds a fresh isolated vertex and returns its index.
    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.adj.push(Vec::new());
        self.n - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let (small, other) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[small].contains(&other)
    }

    /// Copy of the graph without the given edge (by index).
    pub fn without_edge(&self, index: usize) -> Self {
        let mut g = Self::new(self.n);
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if i != index {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Subgraph induced by `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Self::new(vertices.len());
        for &(u, v) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                g.add_edge(index[u], index[v]);
            }
        }
        g
    }

    /// Number of edges with both endpoints in the subset encoded by `mask`.
    pub fn induced_edge_count_mask(&self, mask: u64) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count()
    }

    /// Connected components after deleting `removed`; each component is a
    /// sorted vertex list.
    pub fn components_without(&self, removed: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        for &r in removed {
            seen[r] = true;
        }
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&[]).len() <= 1
    }
}
