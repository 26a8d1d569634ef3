//! Plain undirected node-weighted graphs.
//!
//! [`NodeWeightedGraph`] is the combinatorial view the solvers work on: no
//! embedding, no parallel edges, no self-loops. Embeddings flatten into it via
//! [`crate::planar::PlanarEmbedding::to_graph`].

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};

/// Cost used for unreachable pairs and infeasible table entries.
pub const INFINITY: f64 = f64::INFINITY;

#[derive(Clone, Debug, PartialEq)]
pub struct NodeWeightedGraph {
    adj: Vec<Vec<usize>>,
    weights: Vec<f64>,
}

impl NodeWeightedGraph {
    /// Builds a simple graph; loops are dropped and parallel edges collapsed.
    pub fn new(weights: Vec<f64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let n = weights.len();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u},{v}) out of range for {n} vertices");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        NodeWeightedGraph { adj, weights }
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn set_weight(&mut self, v: usize, w: f64) {
        self.weights[v] = w;
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Subgraph induced by `keep`, plus the old-index list of the new vertices.
    pub fn induced(&self, keep: &[bool]) -> (NodeWeightedGraph, Vec<usize>) {
        let mut new_index = vec![usize::MAX; self.num_vertices()];
        let mut old = Vec::new();
        for v in 0..self.num_vertices() {
            if keep[v] {
                new_index[v] = old.len();
                old.push(v);
            }
        }
        let weights = old.iter().map(|&v| self.weights[v]).collect();
        let edges = self
            .edges()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (new_index[u], new_index[v]));
        (NodeWeightedGraph::new(weights, edges), old)
    }

    /// Component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        components_of(self.num_vertices(), |v| self.adj[v].iter().copied())
    }

    /// Hop distances from `src`; `usize::MAX` marks unreachable vertices.
    pub fn hop_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_vertices()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Node-weighted shortest-path costs from `src`, counting both endpoints.
    pub fn node_weighted_distances(&self, src: usize) -> Vec<f64> {
        self.node_weighted_tree(&[(src, self.weights[src])]).0
    }

    /// Multi-source node-weighted Dijkstra. Each source starts at the given
    /// label; stepping onto `v` adds `w(v)`. Returns labels and parents.
    pub fn node_weighted_tree(&self, sources: &[(usize, f64)]) -> (Vec<f64>, Vec<usize>) {
        let n = self.num_vertices();
        let mut dist = vec![INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        for &(s, label) in sources {
            if label < dist[s] {
                dist[s] = label;
                heap.push(HeapItem { cost: label, vertex: s });
            }
        }
        while let Some(HeapItem { cost, vertex: u }) = heap.pop() {
            if cost > dist[u] {
                continue;
            }
            for &v in &self.adj[u] {
                let nd = cost + self.weights[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    parent[v] = u;
                    heap.push(HeapItem { cost: nd, vertex: v });
                }
            }
        }
        (dist, parent)
    }

    /// Whether the vertices marked in `set` induce a connected subgraph
    /// (vacuously true for the empty set).
    pub fn is_connected_subset(&self, set: &[bool]) -> bool {
        let Some(start) = set.iter().position(|&b| b) else {
            return true;
        };
        let mut seen = vec![false; self.num_vertices()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if set[v] && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == set.iter().filter(|&&b| b).count()
    }
}

/// Min-heap entry ordered by cost, then vertex id.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct HeapItem {
    pub cost: f64,
    pub vertex: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn components_of<I, F>(n: usize, neighbors: F) -> (Vec<usize>, usize)
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for v in neighbors(u) {
                if comp[v] == usize::MAX {
                    comp[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Breadth-first levels from `root` over an adjacency function.
///
/// Fails if some vertex is unreachable; callers restrict to a component first.
pub fn bfs_levels_with<I, F>(n: usize, root: usize, neighbors: F) -> Result<Vec<usize>>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    if root >= n {
        return Err(Error::OutOfRange { index: root, len: n });
    }
    let mut level = vec![usize::MAX; n];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for v in neighbors(u) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if let Some(v) = level.iter().position(|&l| l == usize::MAX) {
        return Err(Error::Unreachable(v));
    }
    Ok(level)
}

/// Groups a level map into `L_0, L_1, ...`.
pub fn level_sets(levels: &[usize]) -> Vec<Vec<usize>> {
    let depth = levels.iter().copied().filter(|&l| l != usize::MAX).max().map_or(0, |d| d + 1);
    let mut sets = vec![Vec::new(); depth];
    for (v, &l) in levels.iter().enumerate() {
        if l != usize::MAX {
            sets[l].push(v);
        }
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> NodeWeightedGraph {
        NodeWeightedGraph::new(vec![1.0, 0.0, 1.0], [(0, 1), (1, 2)])
    }

    #[test]
    fn simple_graph_collapses_multi_edges() {
        let g = NodeWeightedGraph::new(vec![0.0; 3], [(0, 1), (1, 0), (1, 1), (1, 2)]);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn node_weighted_distance_counts_both_endpoints() {
        let g = path3();
        assert_eq!(g.node_weighted_distances(0), vec![1.0, 1.0, 2.0]);
        assert_eq!(g.hop_distances(0), vec![0, 1, 2]);
    }

    #[test]
    fn bfs_levels_on_path_and_star() {
        let g = path3();
        let lv = bfs_levels_with(3, 0, |v| g.neighbors(v).iter().copied()).unwrap();
        assert_eq!(lv, vec![0, 1, 2]);

        let star = NodeWeightedGraph::new(vec![0.0; 5], (1..5).map(|v| (0, v)));
        let lv = bfs_levels_with(5, 0, |v| star.neighbors(v).iter().copied()).unwrap();
        assert_eq!(lv, vec![0, 1, 1, 1, 1]);
    }

    #[test]
    fn bfs_levels_grid_from_corner() {
        let idx = |r: usize, c: usize| r * 3 + c;
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                if c + 1 < 3 {
                    edges.push((idx(r, c), idx(r, c + 1)));
                }
                if r + 1 < 3 {
                    edges.push((idx(r, c), idx(r + 1, c)));
                }
            }
        }
        let g = NodeWeightedGraph::new(vec![0.0; 9], edges);
        let lv = bfs_levels_with(9, 0, |v| g.neighbors(v).iter().copied()).unwrap();
        let sizes: Vec<usize> = level_sets(&lv).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 3, 2, 1]);
    }

    #[test]
    fn bfs_levels_rejects_unreachable() {
        let g = NodeWeightedGraph::new(vec![0.0; 3], [(0, 1)]);
        let err = bfs_levels_with(3, 0, |v| g.neighbors(v).iter().copied()).unwrap_err();
        assert!(matches!(err, Error::Unreachable(2)));
    }

    #[test]
    fn connected_subset() {
        let g = path3();
        assert!(g.is_connected_subset(&[true, true, false]));
        assert!(!g.is_connected_subset(&[true, false, true]));
    }
}
