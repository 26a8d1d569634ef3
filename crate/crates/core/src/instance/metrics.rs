use crate::graph::{NodeWeightedGraph, INFINITY};

/// Node-weighted cost `d` (both endpoints counted) and hop length `ℓ`.
#[derive(Clone, Debug)]
pub struct PathMetrics {
    graph: NodeWeightedGraph,
}

impl PathMetrics {
    pub fn new(graph: NodeWeightedGraph) -> Self {
        PathMetrics { graph }
    }

    pub fn graph(&self) -> &NodeWeightedGraph {
        &self.graph
    }

    /// Shortest node-weighted cost; `INFINITY` if disconnected.
    pub fn cost(&self, u: usize, v: usize) -> f64 {
        self.graph.node_weighted_distances(u)[v]
    }

    /// Cost from `u` to the nearest vertex of `targets`.
    pub fn cost_to_set(&self, u: usize, targets: &[usize]) -> f64 {
        let d = self.graph.node_weighted_distances(u);
        targets.iter().map(|&t| d[t]).fold(INFINITY, f64::min)
    }

    /// Shortest hop length; `None` if disconnected.
    pub fn hops(&self, u: usize, v: usize) -> Option<usize> {
        let d = self.graph.hop_distances(u)[v];
        (d != usize::MAX).then_some(d)
    }

    pub fn path_cost(&self, path: &[usize]) -> f64 {
        path.iter().map(|&v| self.graph.weight(v)).sum()
    }

    pub fn path_len(path: &[usize]) -> usize {
        path.len().saturating_sub(1)
    }

    /// `ℓ(P) − 2c(P)` for any path between `u` and `v` in a 0/1 alternating
    /// graph; it depends only on the endpoints.
    pub fn offset(&self, u: usize, v: usize) -> i64 {
        -((self.graph.weight(u) + self.graph.weight(v)) as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> PathMetrics {
        PathMetrics::new(NodeWeightedGraph::new(vec![1.0, 0.0, 1.0], [(0, 1), (1, 2)]))
    }

    #[test]
    fn single_edge_and_two_edge_paths() {
        let m = path();
        assert_eq!((m.cost(0, 1), m.hops(0, 1)), (1.0, Some(1)));
        assert_eq!(1 - 2 * m.path_cost(&[0, 1]) as i64, m.offset(0, 1));
        assert_eq!((m.cost(0, 2), m.hops(0, 2)), (2.0, Some(2)));
        assert_eq!(m.offset(0, 2), -2);
    }

    #[test]
    fn singleton_path() {
        let m = path();
        assert_eq!(m.cost(0, 0), 1.0);
        assert_eq!(m.hops(0, 0), Some(0));
        assert_eq!(m.cost(1, 1), 0.0);
    }

    #[test]
    fn disconnected_pair_is_infinite() {
        let m = PathMetrics::new(NodeWeightedGraph::new(vec![1.0, 1.0], []));
        assert_eq!(m.cost(0, 1), INFINITY);
        assert_eq!(m.hops(0, 1), None);
    }
}
