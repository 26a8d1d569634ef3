use crate::error::{Error, Result};
use crate::planar::embedding::{twin, PlanarEmbedding};

/// Planar dual of a connected embedding.
///
/// Dual vertex `f` is primal face `f`; dual dart `d` crosses primal dart `d`,
/// so edge ids coincide and the primal/dual edge correspondence is the
/// identity. The dual carries its own rotation system: around dual vertex `f`
/// the darts appear in face-walk order.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub embedding: PlanarEmbedding,
}

impl DualGraph {
    pub fn num_vertices(&self) -> usize {
        self.embedding.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.embedding.num_edges()
    }

    /// Primal edge crossed by dual edge `e`.
    pub fn primal_edge(&self, e: usize) -> usize {
        e
    }

    /// Dual edge crossing primal edge `e`.
    pub fn dual_edge(&self, e: usize) -> usize {
        e
    }
}

pub fn dual(emb: &PlanarEmbedding) -> Result<DualGraph> {
    let (_, comps) = emb.components();
    if comps > 1 {
        return Err(Error::Disconnected { components: comps });
    }
    let m = emb.num_darts();
    let origin: Vec<usize> = (0..m).map(|d| emb.face_of(d)).collect();
    let next: Vec<usize> = (0..m).map(|d| emb.face_next(d)).collect();
    let nf = emb.num_faces();
    let embedding = PlanarEmbedding::from_darts((0..nf as u64).collect(), vec![0.0; nf], origin, next, None)?;
    Ok(DualGraph { embedding })
}

/// A dual graph with one artificial vertex stellating each of its faces.
#[derive(Clone, Debug)]
pub struct TriangulatedDual {
    pub embedding: PlanarEmbedding,
    /// Number of original (dual) vertices; artificial vertices follow them.
    pub num_original_vertices: usize,
    /// Number of original edges; artificial edges follow them.
    pub num_original_edges: usize,
    /// Artificial vertex placed in each face of the input.
    pub face_vertex: Vec<usize>,
}

impl TriangulatedDual {
    pub fn is_artificial_edge(&self, e: usize) -> bool {
        e >= self.num_original_edges
    }

    pub fn is_artificial_vertex(&self, v: usize) -> bool {
        v >= self.num_original_vertices
    }

    pub fn num_artificial_edges(&self) -> usize {
        self.embedding.num_edges() - self.num_original_edges
    }
}

pub fn triangulate_dual(d: &DualGraph) -> TriangulatedDual {
    stellate_faces(&d.embedding)
}

/// Adds a vertex inside every face, joined to each corner of the face walk.
///
/// Edge `e` of the input keeps its id; the artificial edge for the corner in
/// front of dart `x` gets id `E + x`, its dart at the old vertex is `2E + 2x`.
pub fn stellate_faces(emb: &PlanarEmbedding) -> TriangulatedDual {
    let m = emb.num_darts();
    let n = emb.num_vertices();
    let nf = emb.num_faces();
    let total = 3 * m;
    let mut origin = vec![0; total];
    let mut next = vec![0; total];
    for d in 0..m {
        origin[d] = emb.origin(d);
        // corner dart inserted in front of next(d)
        next[d] = m + 2 * emb.next(d);
        let a = m + 2 * d;
        origin[a] = emb.origin(d);
        next[a] = d;
        origin[twin(a)] = n + emb.face_of(d);
    }
    for f in 0..nf {
        let walk = emb.face(f);
        let len = walk.len();
        for i in 0..len {
            let here = m + 2 * walk[i] + 1;
            let before = m + 2 * walk[(i + len - 1) % len] + 1;
            next[here] = before;
        }
    }
    let base = emb.ids().iter().copied().max().map_or(0, |x| x + 1);
    let mut ids = emb.ids().to_vec();
    ids.extend((0..nf as u64).map(|f| base + f));
    let mut weights = emb.weights().to_vec();
    weights.extend(std::iter::repeat(0.0).take(nf));
    let embedding = PlanarEmbedding::from_darts(ids, weights, origin, next, None)
        .expect("stellating faces preserves planarity");
    TriangulatedDual {
        embedding,
        num_original_vertices: n,
        num_original_edges: m / 2,
        face_vertex: (n..n + nf).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(rot: &[&[usize]]) -> PlanarEmbedding {
        let n = rot.len();
        let lists: Vec<Vec<usize>> = rot.iter().map(|r| r.to_vec()).collect();
        PlanarEmbedding::from_rotations((0..n as u64).collect(), vec![1.0; n], &lists).unwrap()
    }

    #[test]
    fn triangle_dual_is_two_vertices_three_parallel_edges() {
        let t = emb(&[&[1, 2], &[2, 0], &[0, 1]]);
        let d = dual(&t).unwrap();
        assert_eq!(d.num_vertices(), 2);
        assert_eq!(d.num_edges(), 3);
        for e in 0..3 {
            let (a, b) = d.embedding.edge_endpoints(e);
            assert_ne!(a, b);
        }
        // dual degree equals primal face length
        for f in 0..2 {
            assert_eq!(d.embedding.degree(f), t.face(f).len());
        }
    }

    #[test]
    fn single_edge_dual_is_a_loop() {
        let t = emb(&[&[1], &[0]]);
        let d = dual(&t).unwrap();
        assert_eq!(d.num_vertices(), 1);
        assert_eq!(d.num_edges(), 1);
        let (a, b) = d.embedding.edge_endpoints(0);
        assert_eq!(a, b);
    }

    fn cube() -> PlanarEmbedding {
        // bottom square 0..3 (ccw), top square 4..7 drawn inside
        emb(&[
            &[1, 4, 3],
            &[2, 5, 0],
            &[3, 6, 1],
            &[0, 7, 2],
            &[0, 5, 7],
            &[1, 6, 4],
            &[2, 7, 5],
            &[3, 4, 6],
        ])
    }

    #[test]
    fn cube_dual_has_six_vertices() {
        let c = cube();
        assert_eq!(c.num_faces(), 6);
        let d = dual(&c).unwrap();
        assert_eq!((d.num_vertices(), d.num_edges()), (6, 12));
        // octahedron: every vertex has degree 4
        for v in 0..6 {
            assert_eq!(d.embedding.degree(v), 4);
        }
    }

    #[test]
    fn dual_of_dual_recovers_rotation() {
        let c = cube();
        let dd = dual(&dual(&c).unwrap().embedding).unwrap();
        assert_eq!(dd.num_vertices(), c.num_vertices());
        for d in 0..c.num_darts() {
            assert_eq!(dd.embedding.next(d), c.next(d));
        }
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let t = emb(&[&[1], &[0], &[]]);
        assert!(matches!(dual(&t), Err(Error::Disconnected { components: 2 })));
    }

    #[test]
    fn stellating_loop_vertex() {
        // dual of a single edge: one vertex with one self-loop, two faces
        let t = emb(&[&[1], &[0]]);
        let d = dual(&t).unwrap();
        assert_eq!(d.embedding.num_faces(), 2);
        let tri = triangulate_dual(&d);
        assert_eq!(tri.embedding.num_vertices() - tri.num_original_vertices, 2);
        // one corner per face walk, so one artificial edge per face
        assert_eq!(tri.num_artificial_edges(), 2);
        assert!(tri.embedding.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn stellating_three_cycle() {
        let c3 = emb(&[&[1, 2], &[2, 0], &[0, 1]]);
        let tri = stellate_faces(&c3);
        assert_eq!(tri.embedding.num_vertices(), 5);
        assert_eq!(tri.num_artificial_edges(), 6);
        assert_eq!(tri.embedding.num_faces(), 6);
        assert!(tri.embedding.faces().iter().all(|f| f.len() == 3));
        assert!((0..3).all(|e| !tri.is_artificial_edge(e)));
        assert!((3..9).all(|e| tri.is_artificial_edge(e)));
    }

    #[test]
    fn stellating_is_unconditional() {
        let c3 = emb(&[&[1, 2], &[2, 0], &[0, 1]]);
        let once = stellate_faces(&c3);
        let twice = stellate_faces(&once.embedding);
        assert_eq!(twice.embedding.num_vertices(), once.embedding.num_vertices() + once.embedding.num_faces());
        assert!(twice.embedding.faces().iter().all(|f| f.len() == 3));
    }
}
