//! The (2,3) pebble game.

use std::collections::HashMap;

use crate::graph::Graph;

/// Pebble-game state over a growing set of independent edges.
#[derive(Clone, Debug)]
pub struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
    stamp: Vec<u32>,
    epoch: u32,
    parent: Vec<usize>,
    trail: Vec<usize>,
}

impl PebbleGame {
    pub fn new(n: usize) -> Self {
        Self {
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
            stamp: vec![0; n],
            epoch: 0,
            parent: vec![usize::MAX; n],
            trail: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.pebbles.len()
    }

    pub fn free_pebbles(&self, v: usize) -> u8 {
        self.pebbles[v]
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Depth-first search from `start` along directed edges for a vertex
    /// outside `locked` holding a free pebble. Locked vertices may be
    /// traversed.
    fn search(&mut self, start: usize, locked: [usize; 2]) -> Option<usize> {
        let epoch = self.next_epoch();
        self.stamp[start] = epoch;
        self.parent[start] = usize::MAX;
        self.trail.clear();
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            self.trail.push(x);
            if x != start && !locked.contains(&x) && self.pebbles[x] > 0 {
                return Some(x);
            }
            for i in 0..self.out[x].len() {
                let y = self.out[x][i];
                if self.stamp[y] != epoch {
                    self.stamp[y] = epoch;
                    self.parent[y] = x;
                    stack.push(y);
                }
            }
        }
        None
    }

    /// Moves one pebble to `start`, reversing the path it travelled.
    fn pull(&mut self, start: usize, locked: [usize; 2]) -> bool {
        let Some(found) = self.search(start, locked) else {
            return false;
        };
        let mut y = found;
        while y != start {
            let x = self.parent[y];
            let pos = self.out[x].iter().position(|&t| t == y).expect("edge on path");
            self.out[x].swap_remove(pos);
            self.out[y].push(x);
            y = x;
        }
        self.pebbles[found] -= 1;
        self.pebbles[start] += 1;
        true
    }

    /// Collects as many pebbles as possible on `u` and `v` (at most two each)
    /// and returns the total.
    pub fn gather(&mut self, u: usize, v: usize) -> u8 {
        while self.pebbles[u] < 2 && self.pull(u, [u, v]) {}
        while self.pebbles[v] < 2 && self.pull(v, [u, v]) {}
        self.pebbles[u] + self.pebbles[v]
    }

    /// Whether `uv` would be independent of the current edges.
    pub fn independent_of(&mut self, u: usize, v: usize) -> bool {
        u != v && self.gather(u, v) == 4
    }

    /// Inserts `uv` if independent; returns whether it was accepted.
    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        if !self.independent_of(u, v) {
            return false;
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        true
    }

    /// Removes a previously accepted edge, returning its pebble.
    pub fn remove(&mut self, u: usize, v: usize) -> bool {
        for (a, b) in [(u, v), (v, u)] {
            if let Some(pos) = self.out[a].iter().position(|&t| t == b) {
                self.out[a].swap_remove(pos);
                self.pebbles[a] += 1;
                return true;
            }
        }
        false
    }

    /// Vertices reachable from `u` or `v` along directed edges.
    fn reach(&mut self, u: usize, v: usize) -> Vec<usize> {
        let epoch = self.next_epoch();
        let mut seen = Vec::new();
        let mut stack = vec![u, v];
        self.stamp[u] = epoch;
        self.stamp[v] = epoch;
        while let Some(x) = stack.pop() {
            seen.push(x);
            for &y in &self.out[x] {
                if self.stamp[y] != epoch {
                    self.stamp[y] = epoch;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Accepted edges as `(tail, head)` pairs.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }
}

/// Result of running the pebble game over a whole graph.
#[derive(Clone, Debug)]
pub struct PebbleResult {
    pub game: PebbleGame,
    /// `independent[i]` for the graph's `i`-th edge.
    pub independent: Vec<bool>,
    pub rank: usize,
}

impl PebbleResult {
    pub fn run(g: &Graph) -> Self {
        let mut game = PebbleGame::new(g.vertex_count());
        let independent: Vec<bool> = g.edges().iter().map(|&(u, v)| game.insert(u, v)).collect();
        let rank = independent.iter().filter(|&&b| b).count();
        Self {
            game,
            independent,
            rank,
        }
    }

    pub fn is_rigid(&self) -> bool {
        let n = self.game.vertex_count();
        n <= 1 || self.rank == 2 * n - 3
    }

    /// Edges contained in no circuit, flagged by edge index. An independent
    /// edge lies in some circuit iff it is inside the minimal tight set
    /// spanned by a rejected edge.
    pub fn coloops(&mut self, g: &Graph) -> Vec<bool> {
        let index: HashMap<(usize, usize), usize> =
            g.edges().iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut in_circuit = vec![false; g.edge_count()];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            if self.independent[i] {
                continue;
            }
            in_circuit[i] = true;
            let total = self.game.gather(u, v);
            debug_assert_eq!(total, 3);
            for x in self.game.reach(u, v) {
                for &y in &self.game.out[x] {
                    in_circuit[index[&(x.min(y), x.max(y))]] = true;
                }
            }
        }
        in_circuit.into_iter().map(|c| !c).collect()
    }

    /// Vertex sets of the rigid components (maximal rigid subgraphs with at
    /// least one edge). Isolated vertices are not reported.
    pub fn rigid_components(&mut self, g: &Graph) -> Vec<Vec<usize>> {
        let n = g.vertex_count();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        // Component membership per vertex, to skip edges already covered.
        let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut mark = vec![usize::MAX; n];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            if !self.independent[i] {
                continue;
            }
            if member_of[u].iter().any(|c| member_of[v].contains(c)) {
                continue;
            }
            let id = comps.len();
            let total = self.game.gather(u, v);
            debug_assert!(total >= 3);
            let mut comp = vec![u, v];
            mark[u] = id;
            mark[v] = id;
            let mut rejected = vec![false; n];
            let mut k = 0;
            while k < comp.len() {
                let x = comp[k];
                k += 1;
                for &w in g.neighbors(x) {
                    if mark[w] == id || rejected[w] {
                        continue;
                    }
                    if self.game.pebbles[w] == 0 && self.game.search(w, [u, v]).is_none() {
                        // Everything visited by the failed search is rigid
                        // with respect to uv as well.
                        for &y in &self.game.trail {
                            if mark[y] != id {
                                mark[y] = id;
                                comp.push(y);
                            }
                        }
                    } else {
                        rejected[w] = true;
                    }
                }
            }
            comp.sort_unstable();
            for &x in &comp {
                member_of[x].push(id);
            }
            comps.push(comp);
        }
        comps
    }
}

/// `(rigid, redundantly rigid)` for the whole graph.
pub fn pebble_game_rigid(g: &impl AsRef<Graph>) -> (bool, bool) {
    let g = g.as_ref();
    let mut result = PebbleResult::run(g);
    let rigid = result.is_rigid();
    if !rigid {
        return (false, false);
    }
    let redundant = !result.coloops(g).into_iter().any(|c| c);
    (rigid, redundant)
}

/// Rank of the generic 2D rigidity matroid on the graph's edges.
pub fn rigidity_rank(g: &impl AsRef<Graph>) -> usize {
    PebbleResult::run(g.as_ref()).rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rigidity() {
        assert_eq!(pebble_game_rigid(&Graph::complete(4)), (true, true));
        assert_eq!(pebble_game_rigid(&Graph::complete(3)), (true, false));
        assert_eq!(pebble_game_rigid(&Graph::path(4)), (false, false));
        assert_eq!(pebble_game_rigid(&Graph::complete(2)), (true, false));
        assert_eq!(rigidity_rank(&Graph::complete(6)), 9);
    }

    #[test]
    fn rejected_edge_keeps_three_pebbles() {
        let g = Graph::complete(4);
        let mut r = PebbleResult::run(&g);
        assert_eq!(r.rank, 5);
        assert_eq!(r.game.gather(0, 1), 3);
        assert!(!r.game.independent_of(2, 3));
        assert!(r.coloops(&g).iter().all(|&c| !c));
    }

    #[test]
    fn removal_restores_independence() {
        let g = Graph::complete(4);
        let mut r = PebbleResult::run(&g);
        let last = *g.edges().last().unwrap();
        assert!(!r.independent[5]);
        let (a, b) = g.edges()[0];
        assert!(r.game.remove(a, b));
        assert!(r.game.independent_of(last.0, last.1));
    }

    #[test]
    fn components_of_two_triangles_sharing_a_vertex() {
        // Bow tie: rigid components are the two triangles.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let mut r = PebbleResult::run(&g);
        let mut comps = r.rigid_components(&g);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert!(r.coloops(&g).iter().all(|&c| c));
    }

    #[test]
    fn pendant_edge_is_a_coloop() {
        let mut g = Graph::complete(4);
        let x = g.add_vertex();
        g.add_edge(0, x);
        let mut r = PebbleResult::run(&g);
        let coloops = r.coloops(&g);
        assert_eq!(coloops.iter().filter(|&&c| c).count(), 1);
        assert!(coloops[g.edge_count() - 1]);
        let mut comps = r.rigid_components(&g);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1, 2, 3], vec![0, 4]]);
    }
}
