//! Map-weighted instances: a bipartite plane witness with weight 1 on the
//! region side and 0 on the point side, plus terminals on the region side.

mod generate;
mod metrics;
mod validate;

pub use generate::{gen_grid_map, GridMapParams};
pub use metrics::PathMetrics;
pub use validate::Violation;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NodeWeightedGraph;
use crate::planar::PlanarEmbedding;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Regions, weight 1.
    V,
    /// Points where regions touch, weight 0.
    U,
}

impl Side {
    pub fn weight(self) -> f64 {
        match self {
            Side::V => 1.0,
            Side::U => 0.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MapWeightedInstance {
    pub witness: PlanarEmbedding,
    pub sides: Vec<Side>,
    /// Sorted witness vertex indices.
    pub terminals: Vec<usize>,
}

impl MapWeightedInstance {
    /// Builds an instance from a witness, assigning 0/1 weights from the sides.
    pub fn from_uniform_map_graph(witness: PlanarEmbedding, sides: Vec<Side>, terminals: &[usize]) -> Result<Self> {
        let n = witness.num_vertices();
        if sides.len() != n {
            return Err(Error::InvalidParameter(format!("{} side labels for {} vertices", sides.len(), n)));
        }
        for e in 0..witness.num_edges() {
            let (a, b) = witness.edge_endpoints(e);
            if sides[a] == sides[b] {
                return Err(Error::NotBipartite(witness.id(a), witness.id(b)));
            }
        }
        let mut terms = terminals.to_vec();
        terms.sort_unstable();
        terms.dedup();
        if terms.is_empty() {
            return Err(Error::NoTerminals);
        }
        for &t in &terms {
            if t >= n {
                return Err(Error::OutOfRange { index: t, len: n });
            }
            if sides[t] == Side::U {
                return Err(Error::TerminalOnWeightZeroSide(witness.id(t)));
            }
        }
        let weights = sides.iter().map(|s| s.weight()).collect();
        Ok(MapWeightedInstance { witness: witness.with_weights(weights), sides, terminals: terms })
    }

    pub fn num_vertices(&self) -> usize {
        self.witness.num_vertices()
    }

    pub fn graph(&self) -> NodeWeightedGraph {
        self.witness.to_graph()
    }

    pub fn region_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| self.sides[v] == Side::V).collect()
    }

    pub fn metrics(&self) -> PathMetrics {
        PathMetrics::new(self.graph())
    }

    /// Itemized invariant violations; empty for a valid instance.
    pub fn validate(&self, path_samples: usize, seed: u64) -> Vec<Violation> {
        validate::validate(self, path_samples, seed)
    }

    /// Map-graph edge count of the map tree spanned by the regions of a
    /// witness tree with vertex set `tree`.
    pub fn map_tree_cost(&self, tree: &[usize]) -> usize {
        tree.iter().filter(|&&v| self.sides[v] == Side::V).count().saturating_sub(1)
    }
}

/// The half-square of the witness on the region side: regions at witness
/// distance two are adjacent.
#[derive(Clone, Debug)]
pub struct MapGraph {
    /// Witness index of each map vertex.
    pub regions: Vec<usize>,
    /// Unit-weight graph on map vertices.
    pub graph: NodeWeightedGraph,
}

pub fn half_square(inst: &MapWeightedInstance) -> MapGraph {
    let regions = inst.region_vertices();
    let mut index = vec![usize::MAX; inst.num_vertices()];
    for (i, &v) in regions.iter().enumerate() {
        index[v] = i;
    }
    let w = inst.graph();
    let mut edges = Vec::new();
    for p in (0..inst.num_vertices()).filter(|&v| inst.sides[v] == Side::U) {
        let nb = w.neighbors(p);
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                edges.push((index[a], index[b]));
            }
        }
    }
    MapGraph { graph: NodeWeightedGraph::new(vec![1.0; regions.len()], edges), regions }
}
