//! Node-weighted contraction decomposition.
//!
//! The dual is stellated (one artificial vertex per dual face) and layered by
//! BFS. A primal edge whose dual endpoints sit on levels `p` and `p + 1` goes
//! into `E_{p mod k}`. The artificial vertices keep the faces around every
//! primal vertex within three consecutive levels, so each vertex meets at
//! most two sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::planar::treedec::{exact_treewidth, tree_decomposition};
use crate::planar::{bfs_levels, contract_and_zero, dual, stellate_faces, Contraction, PlanarEmbedding};

pub const DEFAULT_C_TW: usize = 6;
pub const EXACT_WIDTH_CHECK_CAP: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum RootChoice {
    /// The dual vertex of the outer face, or face 0 when no outer face is set.
    #[default]
    OuterFace,
    /// A given face of a connected embedding.
    Face(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeLayerDecomposition {
    pub k: usize,
    /// Lower dual level `p` of each primal edge joining levels `p` and `p + 1`.
    pub edge_level: Vec<Option<usize>>,
    /// BFS levels of the stellated dual, one list per component.
    pub dual_levels: Vec<Vec<usize>>,
    /// `E_0..E_{k−1}` as sorted primal edge ids.
    pub sets: Vec<Vec<usize>>,
    /// Total weight of the vertices incident to each set.
    pub costs: Vec<f64>,
    /// Artificial edges added by stellation; none of them enters a set.
    pub artificial_edges: usize,
}

/// Layers `emb` into `k` edge sets. Components are layered independently.
pub fn decompose(emb: &PlanarEmbedding, k: usize, root: RootChoice) -> Result<EdgeLayerDecomposition> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let (comp, count) = emb.components();
    if count > 1 && root != RootChoice::OuterFace {
        return Err(Error::Disconnected { components: count });
    }
    let mut edge_level = vec![None; emb.num_edges()];
    let mut dual_levels = Vec::new();
    let mut artificial_edges = 0;
    for c in 0..count {
        let (part, _, emap) = if count == 1 {
            (emb.clone(), (0..emb.num_vertices()).collect(), (0..emb.num_edges()).collect::<Vec<_>>())
        } else {
            let drop: Vec<bool> = comp.iter().map(|&x| x != c).collect();
            emb.remove_vertices(&drop)
        };
        if part.num_edges() == 0 {
            continue;
        }
        let start = match root {
            RootChoice::OuterFace => part.outer_face().unwrap_or(0),
            RootChoice::Face(f) if f < part.num_faces() => f,
            RootChoice::Face(f) => return Err(Error::OutOfRange { index: f, len: part.num_faces() }),
        };
        let d = dual(&part)?;
        let j = stellate_faces(&d.embedding);
        artificial_edges += j.num_artificial_edges();
        let levels = bfs_levels(&j.embedding, start)?;
        for e in 0..part.num_edges() {
            // dual vertices of edge e are the faces on its two sides
            let (a, b) = (levels[part.face_of(2 * e)], levels[part.face_of(2 * e + 1)]);
            if a.abs_diff(b) == 1 {
                edge_level[emap[e]] = Some(a.min(b));
            }
        }
        dual_levels.push(levels);
    }
    let mut sets = vec![Vec::new(); k];
    for (e, lvl) in edge_level.iter().enumerate() {
        if let Some(p) = lvl {
            sets[p % k].push(e);
        }
    }
    let costs = sets.iter().map(|s| incident_weight(emb, s)).collect();
    Ok(EdgeLayerDecomposition { k, edge_level, dual_levels, sets, costs, artificial_edges })
}

fn incident_weight(emb: &PlanarEmbedding, edges: &[usize]) -> f64 {
    let mut seen = vec![false; emb.num_vertices()];
    for &e in edges {
        let (u, v) = emb.edge_endpoints(e);
        seen[u] = true;
        seen[v] = true;
    }
    (0..emb.num_vertices()).filter(|&v| seen[v]).map(|v| emb.weight(v)).sum()
}

impl EdgeLayerDecomposition {
    pub fn set_cost(&self, i: usize) -> Result<f64> {
        self.costs.get(i).copied().ok_or(Error::OutOfRange { index: i, len: self.k })
    }

    /// Cheapest set, lowest index on ties.
    pub fn choose_cheapest(&self) -> (usize, &[usize]) {
        let mut best = 0;
        for i in 1..self.k {
            if self.costs[i] < self.costs[best] {
                best = i;
            }
        }
        (best, &self.sets[best])
    }

    /// Largest number of distinct sets met by the edges around one vertex.
    pub fn max_sets_per_vertex(&self, emb: &PlanarEmbedding) -> usize {
        let mut set_of = vec![usize::MAX; emb.num_edges()];
        for (i, s) in self.sets.iter().enumerate() {
            for &e in s {
                set_of[e] = i;
            }
        }
        (0..emb.num_vertices())
            .map(|v| {
                let mut ids: Vec<usize> =
                    emb.rotation(v).into_iter().map(|d| set_of[d / 2]).filter(|&i| i != usize::MAX).collect();
                ids.sort_unstable();
                ids.dedup();
                ids.len()
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest number of sets holding one edge.
    pub fn max_sets_per_edge(&self, num_edges: usize) -> usize {
        let mut count = vec![0; num_edges];
        for s in &self.sets {
            for &e in s {
                count[e] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractedWidth {
    pub vertices: usize,
    pub heuristic: usize,
    /// Exact treewidth when the contracted graph is small enough.
    pub exact: Option<usize>,
}

/// Contracts `E_i` with weight zeroing and measures the treewidth left.
pub fn contracted_width(emb: &PlanarEmbedding, edges: &[usize]) -> Result<(Contraction, ContractedWidth)> {
    let c = contract_and_zero(emb, edges)?;
    let g = c.embedding.to_graph();
    let heuristic = tree_decomposition(&g).width();
    let exact = if g.num_vertices() <= EXACT_WIDTH_CHECK_CAP { Some(exact_treewidth(&g)?) } else { None };
    let report = ContractedWidth { vertices: g.num_vertices(), heuristic, exact };
    Ok((c, report))
}
