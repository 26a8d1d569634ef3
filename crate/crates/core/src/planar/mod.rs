//! Plane embeddings and the operations the pipeline performs on them.

mod contract;
mod dual;
mod embedding;
pub mod treedec;

pub use contract::{contract_and_zero, contract_edges, Contraction};
pub use dual::{dual, stellate_faces, triangulate_dual, DualGraph, TriangulatedDual};
pub use embedding::{twin, PlanarEmbedding, NO_DART};

use crate::error::Result;

/// BFS levels of the embedded graph from `root`.
pub fn bfs_levels(emb: &PlanarEmbedding, root: usize) -> Result<Vec<usize>> {
    crate::graph::bfs_levels_with(emb.num_vertices(), root, |v| {
        emb.rotation(v).into_iter().map(|d| emb.head(d)).collect::<Vec<_>>().into_iter()
    })
}
