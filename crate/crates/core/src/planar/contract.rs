use crate::error::{Error, Result};
use crate::planar::embedding::{twin, PlanarEmbedding};

/// Result of contracting an edge set.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub embedding: PlanarEmbedding,
    /// Old vertex index -> new vertex index.
    pub vertex_map: Vec<usize>,
    /// New edge id -> old edge id.
    pub edge_map: Vec<usize>,
    /// Old vertices merged into each new vertex, ascending.
    pub classes: Vec<Vec<usize>>,
}

impl Contraction {
    /// Old vertices represented by the new vertex set `vs`.
    pub fn expand(&self, vs: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut out: Vec<usize> = vs.into_iter().flat_map(|v| self.classes[v].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Contracts every edge in `edges`.
///
/// Each connected class of contracted edges becomes one vertex whose id and
/// weight are those of its lowest-index member. Edges that would become
/// self-loops are deleted; parallel edges survive. The rotation around a
/// merged vertex is the walk around the contracted spanning forest.
pub fn contract_edges(emb: &PlanarEmbedding, edges: &[usize]) -> Result<Contraction> {
    let n = emb.num_vertices();
    let ne = emb.num_edges();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut forest = vec![false; ne];
    let mut in_set = vec![false; ne];
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &e in &sorted {
        if e >= ne {
            return Err(Error::UnknownEdge(e));
        }
        in_set[e] = true;
        let (u, v) = emb.edge_endpoints(e);
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
            forest[e] = true;
        }
    }
    let mut vertex_map = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut rep_class = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if rep_class[r] == usize::MAX {
            rep_class[r] = classes.len();
            classes.push(Vec::new());
        }
        vertex_map[v] = rep_class[r];
        classes[rep_class[r]].push(v);
    }
    // surviving edges: not contracted and not a loop after merging
    let deleted: Vec<bool> = (0..ne)
        .map(|e| {
            let (u, v) = emb.edge_endpoints(e);
            !forest[e] && (in_set[e] || vertex_map[u] == vertex_map[v])
        })
        .collect();
    let mut emap = vec![usize::MAX; ne];
    let mut edge_map = Vec::new();
    for e in 0..ne {
        if !forest[e] && !deleted[e] {
            emap[e] = edge_map.len();
            edge_map.push(e);
        }
    }
    let new_dart = |d: usize| 2 * emap[d / 2] + (d & 1);
    let mut origin = vec![0; 2 * edge_map.len()];
    let mut next = vec![0; 2 * edge_map.len()];
    for &e in &edge_map {
        for d in [2 * e, 2 * e + 1] {
            let mut x = emb.next(d);
            loop {
                if forest[x / 2] {
                    x = emb.next(twin(x));
                } else if deleted[x / 2] {
                    x = emb.next(x);
                } else {
                    break;
                }
            }
            origin[new_dart(d)] = vertex_map[emb.origin(d)];
            next[new_dart(d)] = new_dart(x);
        }
    }
    let outer = emb.outer_dart().and_then(|o| {
        emb.face(emb.face_of(o)).iter().copied().find(|&d| emap[d / 2] != usize::MAX).map(new_dart)
    });
    let ids = classes.iter().map(|c| emb.id(c[0])).collect();
    let weights = classes.iter().map(|c| emb.weight(c[0])).collect();
    let embedding = PlanarEmbedding::from_darts(ids, weights, origin, next, outer)?;
    Ok(Contraction { embedding, vertex_map, edge_map, classes })
}

/// Contracts `edges` and sets the weight of every merged vertex to zero.
pub fn contract_and_zero(emb: &PlanarEmbedding, edges: &[usize]) -> Result<Contraction> {
    let mut c = contract_edges(emb, edges)?;
    let mut touched = vec![false; c.classes.len()];
    for &e in edges {
        let (u, _) = emb.edge_endpoints(e);
        touched[c.vertex_map[u]] = true;
    }
    let weights = c
        .embedding
        .weights()
        .iter()
        .zip(&touched)
        .map(|(&w, &t)| if t { 0.0 } else { w })
        .collect();
    c.embedding = c.embedding.with_weights(weights);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(rot: &[&[usize]]) -> PlanarEmbedding {
        let n = rot.len();
        let lists: Vec<Vec<usize>> = rot.iter().map(|r| r.to_vec()).collect();
        PlanarEmbedding::from_rotations((0..n as u64).collect(), (1..=n).map(|w| w as f64).collect(), &lists)
            .unwrap()
    }

    fn grid(rows: usize, cols: usize) -> PlanarEmbedding {
        let idx = |r: usize, c: usize| r * cols + c;
        let mut rot = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                // ccw with rows growing downward: right, up, left, down
                let mut l = Vec::new();
                if c + 1 < cols {
                    l.push(idx(r, c + 1));
                }
                if r > 0 {
                    l.push(idx(r - 1, c));
                }
                if c > 0 {
                    l.push(idx(r, c - 1));
                }
                if r + 1 < rows {
                    l.push(idx(r + 1, c));
                }
                rot.push(l);
            }
        }
        let n = rows * cols;
        PlanarEmbedding::from_rotations((0..n as u64).collect(), vec![1.0; n], &rot).unwrap()
    }

    #[test]
    fn contracting_triangle_edge_leaves_parallel_pair() {
        let t = emb(&[&[1, 2], &[2, 0], &[0, 1]]);
        let e = (0..3).find(|&e| t.edge_endpoints(e) == (0, 1)).unwrap();
        let c = contract_edges(&t, &[e]).unwrap();
        assert_eq!(c.embedding.num_vertices(), 2);
        assert_eq!(c.embedding.num_edges(), 2);
        assert_eq!(c.vertex_map[0], c.vertex_map[1]);
        assert_eq!(c.embedding.num_faces(), 2);
        assert_eq!(c.embedding.weight(c.vertex_map[0]), 1.0);
    }

    #[test]
    fn contracting_a_cycle_deletes_the_closing_edge() {
        let t = emb(&[&[1, 2], &[2, 0], &[0, 1]]);
        let c = contract_edges(&t, &[0, 1, 2]).unwrap();
        assert_eq!(c.embedding.num_vertices(), 1);
        assert_eq!(c.embedding.num_edges(), 0);
        assert_eq!(c.classes, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn contracting_grid_row_keeps_planarity() {
        let g = grid(3, 3);
        let row: Vec<usize> = (0..g.num_edges())
            .filter(|&e| {
                let (u, v) = g.edge_endpoints(e);
                u / 3 == 1 && v / 3 == 1
            })
            .collect();
        let c = contract_and_zero(&g, &row).unwrap();
        assert_eq!(c.embedding.num_vertices(), 7);
        // 12 edges, 2 contracted, none becomes a loop
        assert_eq!(c.embedding.num_edges(), 10);
        c.embedding.check_invariants().unwrap();
        let mid = c.vertex_map[4];
        assert_eq!(c.embedding.weight(mid), 0.0);
        assert_eq!(c.embedding.weight(c.vertex_map[0]), 1.0);
        assert_eq!(c.expand([mid]), vec![3, 4, 5]);
        // merged vertex sees 0,1,2 above and 6,7,8 below
        assert_eq!(c.embedding.degree(mid), 6);
    }

    #[test]
    fn edge_map_points_to_surviving_edges() {
        let g = grid(2, 3);
        let c = contract_edges(&g, &[0]).unwrap();
        for (new, &old) in c.edge_map.iter().enumerate() {
            let (a, b) = g.edge_endpoints(old);
            let (x, y) = c.embedding.edge_endpoints(new);
            assert_eq!((c.vertex_map[a], c.vertex_map[b]), (x, y));
        }
    }

    #[test]
    fn unknown_edge_is_an_error() {
        let g = grid(2, 2);
        assert!(matches!(contract_edges(&g, &[99]), Err(Error::UnknownEdge(99))));
    }
}
