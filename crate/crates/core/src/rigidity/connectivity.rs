use crate::error::{Error, Result};
use crate::graph::{flow, Graph};

/// Exact vertex connectivity (`n - 1` for complete graphs).
pub fn vertex_connectivity(g: &impl AsRef<Graph>) -> usize {
    let g = g.as_ref();
    let n = g.vertex_count();
    if n <= 1 {
        return 0;
    }
    if !g.is_connected() {
        return 0;
    }
    let mut best = n - 1;
    // Even's scheme: some vertex among the first kappa + 1 lies outside a
    // minimum cut.
    let mut i = 0;
    while i <= best && i < n {
        for j in i + 1..n {
            if !g.has_edge(i, j) {
                best = best.min(flow::local_connectivity(g, i, j, best));
            }
        }
        i += 1;
    }
    best
}

fn stays_connected_removing(g: &Graph, size: usize) -> bool {
    let n = g.vertex_count();
    let mut removed = Vec::with_capacity(size);
    fn rec(g: &Graph, n: usize, size: usize, start: usize, removed: &mut Vec<usize>) -> bool {
        if removed.len() == size {
            return g.components_without(removed).len() <= 1;
        }
        for v in start..n {
            removed.push(v);
            let ok = rec(g, n, size, v + 1, removed);
            removed.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(g, n, size, 0, &mut removed)
}

/// True iff no set of fewer than `k` vertices disconnects the graph.
pub fn vertex_connectivity_at_least(g: &impl AsRef<Graph>, k: usize) -> Result<bool> {
    let g = g.as_ref();
    let n = g.vertex_count();
    if n < k + 1 {
        return Err(Error::TooSmallForConnectivity { got: n, k });
    }
    if k <= 3 {
        Ok((0..k).all(|size| stays_connected_removing(g, size)))
    } else {
        Ok(vertex_connectivity(g) >= k)
    }
}
