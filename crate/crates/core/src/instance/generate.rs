use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{MapWeightedInstance, Side};
use crate::error::{Error, Result};
use crate::planar::{contract_edges, PlanarEmbedding};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMapParams {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    /// Probability that two side-adjacent cells belong to the same region.
    pub merge_prob: f64,
    /// Number of terminals, capped at the number of regions.
    pub terminals: usize,
}

impl Default for GridMapParams {
    fn default() -> Self {
        GridMapParams { rows: 3, cols: 3, seed: 0, merge_prob: 0.0, terminals: 3 }
    }
}

/// Grid-of-cells map instance.
///
/// Cells are regions, grid corners are the touching points. Each cell is
/// joined to its four corners; merged cells are contracted into one region.
/// Regions come first in the vertex order, ids are `0..n`.
pub fn gen_grid_map(p: &GridMapParams) -> Result<MapWeightedInstance> {
    let (rows, cols) = (p.rows, p.cols);
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("grid needs at least one row and one column".into()));
    }
    if !(0.0..=1.0).contains(&p.merge_prob) {
        return Err(Error::InvalidParameter(format!("merge probability {} outside [0, 1]", p.merge_prob)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let ncell = rows * cols;
    let cell = |i: usize, j: usize| i * cols + j;
    let corner = |i: usize, j: usize| ncell + i * (cols + 1) + j;
    let n = ncell + (rows + 1) * (cols + 1);
    let mut pos = vec![(0.0f64, 0.0f64); n];
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..rows {
        for j in 0..cols {
            let c = cell(i, j);
            pos[c] = (j as f64 + 0.5, -(i as f64 + 0.5));
            for (a, b) in [(i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1)] {
                nbrs[c].push(corner(a, b));
                nbrs[corner(a, b)].push(c);
            }
            if j + 1 < cols {
                nbrs[c].push(cell(i, j + 1));
                nbrs[cell(i, j + 1)].push(c);
            }
            if i + 1 < rows {
                nbrs[c].push(cell(i + 1, j));
                nbrs[cell(i + 1, j)].push(c);
            }
        }
    }
    for i in 0..=rows {
        for j in 0..=cols {
            pos[corner(i, j)] = (j as f64, -(i as f64));
        }
    }
    for v in 0..n {
        let (x, y) = pos[v];
        nbrs[v].sort_by(|&a, &b| {
            let ta = (pos[a].1 - y).atan2(pos[a].0 - x);
            let tb = (pos[b].1 - y).atan2(pos[b].0 - x);
            ta.total_cmp(&tb)
        });
    }
    let emb = PlanarEmbedding::from_rotations((0..n as u64).collect(), vec![0.0; n], &nbrs)?;
    // the top-left corner touches only the outside
    let outer = emb.find_dart(corner(0, 0), cell(0, 0));
    let emb = emb.with_outer_dart(outer);

    let mut merge = vec![false; emb.num_edges()];
    let mut drop = vec![false; emb.num_edges()];
    for e in 0..emb.num_edges() {
        let (a, b) = emb.edge_endpoints(e);
        if a < ncell && b < ncell {
            if rng.gen_bool(p.merge_prob) {
                merge[e] = true;
            } else {
                drop[e] = true;
            }
        }
    }
    let (emb, kept) = emb.delete_edges(&drop);
    let merged: Vec<usize> = (0..kept.len()).filter(|&e| merge[kept[e]]).collect();
    let contracted = contract_edges(&emb, &merged)?;
    let (emb, _) = contracted.embedding.simplify();
    let sides: Vec<Side> = contracted
        .classes
        .iter()
        .map(|c| if c[0] < ncell { Side::V } else { Side::U })
        .collect();
    let nv = sides.iter().filter(|&&s| s == Side::V).count();
    let count = emb.num_vertices() as u64;
    let emb = emb.with_ids((0..count).collect())?;
    let k = p.terminals.clamp(1, nv);
    let mut terminals = rand::seq::index::sample(&mut rng, nv, k).into_vec();
    terminals.sort_unstable();
    MapWeightedInstance::from_uniform_map_graph(emb, sides, &terminals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::half_square;

    fn params(rows: usize, cols: usize, merge_prob: f64, seed: u64) -> GridMapParams {
        GridMapParams { rows, cols, seed, merge_prob, terminals: 2 }
    }

    #[test]
    fn one_cell_is_a_star() {
        let inst = gen_grid_map(&params(1, 1, 0.0, 0)).unwrap();
        assert_eq!(inst.num_vertices(), 5);
        assert_eq!(inst.region_vertices(), vec![0]);
        assert_eq!(inst.witness.degree(0), 4);
        assert_eq!(inst.terminals, vec![0]);
        assert_eq!(inst.witness.num_faces(), 1);
    }

    #[test]
    fn two_by_two_centre_gives_k4() {
        let inst = gen_grid_map(&params(2, 2, 0.0, 0)).unwrap();
        let m = half_square(&inst);
        assert_eq!(m.graph.num_vertices(), 4);
        assert_eq!(m.graph.num_edges(), 6);
        // cells meet at the centre point, which has degree 4
        let max_u = (0..inst.num_vertices())
            .filter(|&v| inst.sides[v] == Side::U)
            .map(|v| inst.witness.degree(v))
            .max();
        assert_eq!(max_u, Some(4));
    }

    #[test]
    fn outer_face_holds_the_boundary() {
        let inst = gen_grid_map(&params(3, 4, 0.0, 1)).unwrap();
        let f = inst.witness.outer_face().unwrap();
        // 14 boundary corners and 10 boundary cells, each corner-cell step
        // counted in both directions around pendant corners
        let walk = inst.witness.face(f);
        assert!(walk.len() >= 2 * 10);
        let corners: std::collections::BTreeSet<usize> =
            walk.iter().map(|&d| inst.witness.origin(d)).filter(|&v| inst.sides[v] == Side::U).collect();
        assert_eq!(corners.len(), 14);
    }

    #[test]
    fn merging_everything_gives_one_region() {
        let inst = gen_grid_map(&params(3, 3, 1.0, 5)).unwrap();
        assert_eq!(inst.region_vertices(), vec![0]);
        assert_eq!(inst.num_vertices(), 1 + 16);
        inst.witness.check_invariants().unwrap();
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_grid_map(&params(4, 4, 0.3, 9)).unwrap();
        let b = gen_grid_map(&params(4, 4, 0.3, 9)).unwrap();
        assert_eq!(a.terminals, b.terminals);
        assert_eq!(a.witness.rotation_lists(), b.witness.rotation_lists());
        assert_eq!(a.sides, b.sides);
    }

    #[test]
    fn zero_rows_rejected() {
        assert!(gen_grid_map(&params(0, 3, 0.0, 0)).is_err());
    }
}
