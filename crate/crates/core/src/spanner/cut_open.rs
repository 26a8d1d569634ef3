use crate::error::{Error, Result};
use crate::exact::SteinerSolution;
use crate::planar::PlanarEmbedding;

/// The witness cut open along a tree: every tree vertex of tree degree `d`
/// becomes `d` copies, and the tree turns into the boundary of a new face.
#[derive(Clone, Debug)]
pub struct CutOpenGraph {
    pub embedding: PlanarEmbedding,
    /// Original vertex of each copy.
    pub copy_of: Vec<usize>,
    /// Original edge of each edge.
    pub edge_origin: Vec<usize>,
    /// Darts of the boundary cycle in walk order; empty for a one-vertex tree.
    pub boundary: Vec<usize>,
    /// Boundary vertices in walk order.
    pub boundary_vertices: Vec<usize>,
    /// Face enclosed by the boundary cycle, if there is one.
    pub hole: Option<usize>,
    /// Number of copies per original vertex.
    pub copies: Vec<usize>,
}

impl CutOpenGraph {
    /// Total weight of the boundary, counting each copy.
    pub fn boundary_cost(&self) -> f64 {
        self.boundary_vertices.iter().map(|&v| self.embedding.weight(v)).sum()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    /// Original vertices that have a copy on the boundary.
    pub fn originals_on_boundary(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.boundary_vertices.iter().map(|&v| self.copy_of[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Edge id of each tree edge, using the first parallel copy in rotation order.
pub(crate) fn tree_edge_ids(emb: &PlanarEmbedding, tree: &SteinerSolution) -> Result<Vec<usize>> {
    tree.edges
        .iter()
        .map(|&(u, v)| {
            if u >= emb.num_vertices() || v >= emb.num_vertices() {
                return Err(Error::NotASubtree(format!("edge {u}-{v} out of range")));
            }
            emb.find_dart(u, v)
                .map(|d| d / 2)
                .ok_or_else(|| Error::NotASubtree(format!("{u}-{v} is not a witness edge")))
        })
        .collect()
}

pub fn cut_open(emb: &PlanarEmbedding, tree: &SteinerSolution) -> Result<CutOpenGraph> {
    let n = emb.num_vertices();
    let ne = emb.num_edges();
    let tree_edges = tree_edge_ids(emb, tree)?;
    if tree.vertices.is_empty() || tree_edges.len() + 1 != tree.vertices.len() {
        return Err(Error::NotASubtree("not a tree".into()));
    }
    let mut is_tree = vec![false; ne];
    for &e in &tree_edges {
        is_tree[e] = true;
    }
    if tree_edges.is_empty() {
        let v = tree.vertices[0];
        return Ok(CutOpenGraph {
            embedding: emb.clone(),
            copy_of: (0..n).collect(),
            edge_origin: (0..ne).collect(),
            boundary: Vec::new(),
            boundary_vertices: vec![v],
            hole: None,
            copies: vec![1; n],
        });
    }
    let tree_dart = |d: usize| is_tree[d / 2];

    // vertices: one per non-tree vertex, one per sector of a tree vertex
    let mut copy_of = Vec::new();
    let mut sector_start = vec![usize::MAX; 2 * ne]; // copy starting at tree dart
    let mut plain = vec![usize::MAX; n];
    for v in 0..n {
        let rot = emb.rotation(v);
        let Some(k) = rot.iter().position(|&d| tree_dart(d)) else {
            plain[v] = copy_of.len();
            copy_of.push(v);
            continue;
        };
        for i in 0..rot.len() {
            let d = rot[(k + i) % rot.len()];
            if tree_dart(d) {
                sector_start[d] = copy_of.len();
                copy_of.push(v);
            }
        }
    }

    // edges: non-tree edges keep one edge, tree edges split in two
    let mut edge_origin = Vec::new();
    let mut plain_dart = vec![usize::MAX; 2 * ne];
    let mut start_dart = vec![usize::MAX; 2 * ne];
    let mut end_dart = vec![usize::MAX; 2 * ne];
    for e in 0..ne {
        let (a, b) = (2 * e, 2 * e + 1);
        if is_tree[e] {
            let ea = edge_origin.len();
            edge_origin.push(e);
            let eb = edge_origin.len();
            edge_origin.push(e);
            start_dart[a] = 2 * ea;
            end_dart[b] = 2 * ea + 1;
            end_dart[a] = 2 * eb;
            start_dart[b] = 2 * eb + 1;
        } else {
            let ea = edge_origin.len();
            edge_origin.push(e);
            plain_dart[a] = 2 * ea;
            plain_dart[b] = 2 * ea + 1;
        }
    }
    let m = 2 * edge_origin.len();
    let mut origin = vec![usize::MAX; m];
    let mut next = vec![usize::MAX; m];
    for v in 0..n {
        let rot = emb.rotation(v);
        if plain[v] != usize::MAX {
            for (i, &d) in rot.iter().enumerate() {
                origin[plain_dart[d]] = plain[v];
                next[plain_dart[d]] = plain_dart[rot[(i + 1) % rot.len()]];
            }
            continue;
        }
        for &t in rot.iter().filter(|&&d| tree_dart(d)) {
            let copy = sector_start[t];
            let mut seq = vec![start_dart[t]];
            let mut x = emb.next(t);
            while !tree_dart(x) {
                seq.push(plain_dart[x]);
                x = emb.next(x);
            }
            seq.push(end_dart[x]);
            for (i, &d) in seq.iter().enumerate() {
                origin[d] = copy;
                next[d] = seq[(i + 1) % seq.len()];
            }
        }
    }
    let outer = start_dart[2 * tree_edges[0]];
    let ids = (0..copy_of.len() as u64).collect();
    let weights = copy_of.iter().map(|&v| emb.weight(v)).collect();
    let embedding = PlanarEmbedding::from_darts(ids, weights, origin, next, Some(outer))?;
    let hole = embedding.face_of(outer);
    let walk = embedding.face(hole);
    let at = walk.iter().position(|&d| d == outer).unwrap();
    let boundary: Vec<usize> = walk[at..].iter().chain(&walk[..at]).copied().collect();
    let mut is_start = vec![false; m];
    for &d in &start_dart {
        if d != usize::MAX {
            is_start[d] = true;
        }
    }
    if boundary.len() != 2 * tree_edges.len() || boundary.iter().any(|&d| !is_start[d]) {
        return Err(Error::MalformedEmbedding("cut-open boundary is not the tree's Euler tour".into()));
    }
    let boundary_vertices = boundary.iter().map(|&d| embedding.origin(d)).collect();
    let mut copies = vec![0; n];
    for &v in &copy_of {
        copies[v] += 1;
    }
    Ok(CutOpenGraph { embedding, copy_of, edge_origin, boundary, boundary_vertices, hole: Some(hole), copies })
}
