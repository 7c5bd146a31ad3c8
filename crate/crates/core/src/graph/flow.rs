//! Unit vertex-capacity max flow (vertex splitting + BFS augmentation).

use std::collections::VecDeque;

use super::Graph;

struct Residual {
    head: Vec<usize>,
    cap: Vec<i32>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(nodes: usize) -> Self {
        Self {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn arc(&mut self, from: usize, to: usize, cap: i32) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &a in &self.adj[u] {
                let w = self.head[a];
                if self.cap[a] > 0 && !seen[w] {
                    seen[w] = true;
                    via[w] = a;
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut w = t;
        while w != s {
            let a = via[w];
            self.cap[a] -= 1;
            self.cap[a ^ 1] += 1;
            w = self.head[a ^ 1];
        }
        true
    }

    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit && self.augment(s, t) {
            flow += 1;
        }
        flow
    }

    /// Follows saturated arcs from `u`, consuming them.
    fn next_hop(&mut self, u: usize) -> Option<usize> {
        for i in 0..self.adj[u].len() {
            let a = self.adj[u][i];
            // Forward arcs have even index; saturated ones carry flow.
            if a.is_multiple_of(2) && self.cap[a ^ 1] > 0 {
                self.cap[a ^ 1] -= 1;
                return Some(self.head[a]);
            }
        }
        None
    }
}

const BIG: i32 = 1 << 20;

fn split(g: &Graph, allowed: Option<&[bool]>, source: usize, open: &[usize]) -> Residual {
    let n = g.vertex_count();
    let mut net = Residual::new(2 * n + 1);
    for v in 0..n {
        let cap = if open.contains(&v) { BIG } else { 1 };
        net.arc(2 * v, 2 * v + 1, cap);
    }
    let ok = |v: usize| allowed.is_none_or(|a| a[v]);
    for &(u, v) in g.edges() {
        // Arcs back into the source would only create flow cycles.
        if ok(u) && ok(v) {
            if v != source {
                net.arc(2 * u + 1, 2 * v, 1);
            }
            if u != source {
                net.arc(2 * v + 1, 2 * u, 1);
            }
        }
    }
    net
}

/// Up to `limit` paths from `source` to distinct members of `targets` that
/// share no vertex other than `source`. Only vertices with `allowed[v]` are
/// used. Each path starts at `source` and ends at its first target.
pub fn disjoint_paths_to_targets(
    g: &Graph,
    source: usize,
    targets: &[usize],
    allowed: Option<&[bool]>,
    limit: usize,
) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let sink = 2 * n;
    let mut net = split(g, allowed, source, &[source]);
    for &t in targets {
        if t != source && allowed.is_none_or(|a| a[t]) {
            net.arc(2 * t + 1, sink, 1);
        }
    }
    let flow = net.max_flow(2 * source, sink, limit);
    let is_target = {
        let mut mark = vec![false; n];
        for &t in targets {
            mark[t] = true;
        }
        mark
    };
    let mut paths = Vec::with_capacity(flow);
    for _ in 0..flow {
        let mut path = vec![source];
        let mut node = 2 * source + 1;
        while let Some(next) = net.next_hop(node) {
            if next == sink {
                break;
            }
            // `next` is an in-node; step through its vertex.
            let v = next / 2;
            let _ = net.next_hop(next);
            path.push(v);
            node = 2 * v + 1;
        }
        paths.push(path);
    }
    for path in &mut paths {
        if let Some(cut) = path.iter().skip(1).position(|&v| is_target[v]) {
            path.truncate(cut + 2);
        }
    }
    paths
}

/// Number of internally vertex-disjoint `s`–`t` paths, capped at `limit`.
/// A direct edge counts as one path.
pub fn local_connectivity(g: &Graph, s: usize, t: usize, limit: usize) -> usize {
    let mut net = split(g, None, s, &[s, t]);
    net.max_flow(2 * s, 2 * t + 1, limit)
}
