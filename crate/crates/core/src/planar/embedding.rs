use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{components_of, NodeWeightedGraph};

/// A combinatorial embedding of a planar multigraph as a rotation system.
///
/// Edge `e` owns darts `2e` and `2e + 1`; `twin(d) = d ^ 1`. `next(d)` is the
/// counter-clockwise successor of `d` around its origin. Faces are the orbits
/// of `d -> next(twin(d))`. Every constructor checks Euler's formula per
/// connected component, so a value of this type is always a valid plane
/// embedding.
#[derive(Clone, Debug)]
pub struct PlanarEmbedding {
    ids: Vec<u64>,
    weights: Vec<f64>,
    origin: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    first: Vec<usize>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
    outer: Option<usize>,
    index: HashMap<u64, usize>,
}

pub const NO_DART: usize = usize::MAX;

#[inline]
pub fn twin(d: usize) -> usize {
    d ^ 1
}

impl PlanarEmbedding {
    /// Builds an embedding from raw dart data.
    ///
    /// `origin[d]` is the tail of dart `d`, `next[d]` its ccw successor
    /// around that tail.
    pub fn from_darts(
        ids: Vec<u64>,
        weights: Vec<f64>,
        origin: Vec<usize>,
        next: Vec<usize>,
        outer: Option<usize>,
    ) -> Result<Self> {
        let n = ids.len();
        let m = origin.len();
        if weights.len() != n {
            return Err(Error::MalformedEmbedding(format!(
                "{} weights for {} vertices",
                weights.len(),
                n
            )));
        }
        if m % 2 != 0 || next.len() != m {
            return Err(Error::MalformedEmbedding("dart arrays have inconsistent lengths".into()));
        }
        if let Some(&v) = origin.iter().find(|&&v| v >= n) {
            return Err(Error::MalformedEmbedding(format!("dart origin {v} out of range")));
        }
        let mut prev = vec![NO_DART; m];
        for d in 0..m {
            let nx = next[d];
            if nx >= m || prev[nx] != NO_DART {
                return Err(Error::MalformedEmbedding("next is not a permutation of darts".into()));
            }
            if origin[nx] != origin[d] {
                return Err(Error::MalformedEmbedding(format!(
                    "next({d}) leaves vertex {}",
                    origin[d]
                )));
            }
            prev[nx] = d;
        }
        let mut first = vec![NO_DART; n];
        for d in 0..m {
            if first[origin[d]] == NO_DART {
                first[origin[d]] = d;
            }
        }
        // one rotation cycle per vertex
        let mut deg = vec![0usize; n];
        for &o in &origin {
            deg[o] += 1;
        }
        for v in 0..n {
            if first[v] == NO_DART {
                continue;
            }
            let mut len = 0;
            let mut d = first[v];
            loop {
                len += 1;
                d = next[d];
                if d == first[v] {
                    break;
                }
            }
            if len != deg[v] {
                return Err(Error::MalformedEmbedding(format!(
                    "rotation at vertex {v} splits into several cycles"
                )));
            }
        }
        if let Some(o) = outer {
            if o >= m {
                return Err(Error::UnknownEdge(o / 2));
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (i, &id) in ids.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::MalformedEmbedding(format!("duplicate vertex id {id}")));
            }
        }
        let (face_of, faces) = trace_faces(&next);
        let emb = PlanarEmbedding { ids, weights, origin, next, prev, first, face_of, faces, outer, index };
        emb.check_euler()?;
        Ok(emb)
    }

    /// Builds an embedding from per-vertex ccw neighbour lists (vertex indices).
    ///
    /// With parallel edges between `u` and `v`, the `j`-th occurrence of `v`
    /// around `u` is paired with the `j`-th occurrence of `u` around `v`
    /// counted from the end, which is the pairing a plane drawing produces.
    /// A self-loop appears twice in its vertex's list; occurrences are paired
    /// outermost-first.
    pub fn from_rotations(ids: Vec<u64>, weights: Vec<f64>, rotations: &[Vec<usize>]) -> Result<Self> {
        let n = ids.len();
        if rotations.len() != n {
            return Err(Error::InconsistentRotation(format!(
                "{} rotation lists for {} vertices",
                rotations.len(),
                n
            )));
        }
        // slot (u, i) -> dart
        let offsets: Vec<usize> = rotations
            .iter()
            .scan(0, |acc, r| {
                let o = *acc;
                *acc += r.len();
                Some(o)
            })
            .collect();
        let total: usize = rotations.iter().map(Vec::len).sum();
        let mut slot_dart = vec![NO_DART; total];
        let mut origin = vec![0; total];
        let mut edges = 0usize;

        // occurrence positions of each neighbour, per vertex
        let mut occurrences: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); n];
        for (u, rot) in rotations.iter().enumerate() {
            for (i, &v) in rot.iter().enumerate() {
                if v >= n {
                    return Err(Error::InconsistentRotation(format!("vertex {u} lists unknown neighbour {v}")));
                }
                occurrences[u].entry(v).or_default().push(i);
            }
        }
        for u in 0..n {
            let mut nbrs: Vec<usize> = occurrences[u].keys().copied().collect();
            nbrs.sort_unstable();
            for v in nbrs {
                let here = &occurrences[u][&v];
                if v == u {
                    if here.len() % 2 != 0 {
                        return Err(Error::InconsistentRotation(format!(
                            "self-loop at {} listed an odd number of times",
                            ids[u]
                        )));
                    }
                    let k = here.len();
                    for j in 0..k / 2 {
                        let a = offsets[u] + here[j];
                        let b = offsets[u] + here[k - 1 - j];
                        slot_dart[a] = 2 * edges;
                        slot_dart[b] = 2 * edges + 1;
                        origin[2 * edges] = u;
                        origin[2 * edges + 1] = u;
                        edges += 1;
                    }
                } else if u < v {
                    let there = occurrences[v].get(&u).map_or(&[][..], Vec::as_slice);
                    if there.len() != here.len() {
                        return Err(Error::InconsistentRotation(format!(
                            "{} lists {} {} times but {} lists {} {} times",
                            ids[u],
                            ids[v],
                            here.len(),
                            ids[v],
                            ids[u],
                            there.len()
                        )));
                    }
                    let k = here.len();
                    for j in 0..k {
                        let a = offsets[u] + here[j];
                        let b = offsets[v] + there[k - 1 - j];
                        slot_dart[a] = 2 * edges;
                        slot_dart[b] = 2 * edges + 1;
                        origin[2 * edges] = u;
                        origin[2 * edges + 1] = v;
                        edges += 1;
                    }
                } else if !occurrences[v].contains_key(&u) {
                    return Err(Error::InconsistentRotation(format!(
                        "{} lists {} but not vice versa",
                        ids[u], ids[v]
                    )));
                }
            }
        }
        let mut next = vec![NO_DART; total];
        for (u, rot) in rotations.iter().enumerate() {
            let len = rot.len();
            for i in 0..len {
                let d = slot_dart[offsets[u] + i];
                next[d] = slot_dart[offsets[u] + (i + 1) % len];
            }
        }
        Self::from_darts(ids, weights, origin, next, None)
    }

    fn check_euler(&self) -> Result<()> {
        let n = self.num_vertices();
        let (comp, count) = self.components();
        let mut v = vec![0i64; count];
        let mut e = vec![0i64; count];
        let mut f = vec![0i64; count];
        let mut rep = vec![usize::MAX; count];
        for x in 0..n {
            v[comp[x]] += 1;
            if rep[comp[x]] == usize::MAX {
                rep[comp[x]] = x;
            }
        }
        for d in (0..self.num_darts()).step_by(2) {
            e[comp[self.origin[d]]] += 1;
        }
        for walk in &self.faces {
            f[comp[self.origin[walk[0]]]] += 1;
        }
        for c in 0..count {
            let faces = if e[c] == 0 { 1 } else { f[c] };
            let euler = v[c] - e[c] + faces;
            if euler != 2 {
                return Err(Error::NonPlanar { vertex: rep[c], euler });
            }
        }
        Ok(())
    }

    /// Re-checks every structural invariant from scratch.
    pub fn check_invariants(&self) -> Result<()> {
        for d in 0..self.num_darts() {
            if twin(twin(d)) != d || twin(d) == d {
                return Err(Error::MalformedEmbedding("twin is not a fixed-point-free involution".into()));
            }
            if self.prev[self.next[d]] != d {
                return Err(Error::MalformedEmbedding("next/prev disagree".into()));
            }
        }
        let mut seen = vec![false; self.num_darts()];
        for walk in &self.faces {
            for &d in walk {
                if std::mem::replace(&mut seen[d], true) {
                    return Err(Error::MalformedEmbedding("dart lies on two faces".into()));
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::MalformedEmbedding("dart lies on no face".into()));
        }
        self.check_euler()
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn num_darts(&self) -> usize {
        self.origin.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), self.num_vertices());
        self.weights = weights;
        self
    }

    pub fn with_ids(mut self, ids: Vec<u64>) -> Result<Self> {
        assert_eq!(ids.len(), self.num_vertices());
        let mut index = HashMap::with_capacity(ids.len());
        for (i, &id) in ids.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::MalformedEmbedding(format!("duplicate vertex id {id}")));
            }
        }
        self.ids = ids;
        self.index = index;
        Ok(self)
    }

    pub fn origin(&self, d: usize) -> usize {
        self.origin[d]
    }

    pub fn head(&self, d: usize) -> usize {
        self.origin[twin(d)]
    }

    /// Counter-clockwise successor of `d` around its origin.
    pub fn next(&self, d: usize) -> usize {
        self.next[d]
    }

    pub fn prev(&self, d: usize) -> usize {
        self.prev[d]
    }

    /// Successor of `d` along its face boundary.
    pub fn face_next(&self, d: usize) -> usize {
        self.next[twin(d)]
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    /// Dart walk of face `f`.
    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        (self.origin[2 * e], self.origin[2 * e + 1])
    }

    /// Darts leaving `v`, in ccw order.
    pub fn rotation(&self, v: usize) -> Vec<usize> {
        let start = self.first[v];
        if start == NO_DART {
            return Vec::new();
        }
        let mut out = vec![start];
        let mut d = self.next[start];
        while d != start {
            out.push(d);
            d = self.next[d];
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation(v).len()
    }

    pub fn outer_dart(&self) -> Option<usize> {
        self.outer
    }

    pub fn outer_face(&self) -> Option<usize> {
        self.outer.map(|d| self.face_of[d])
    }

    pub fn with_outer_dart(mut self, outer: Option<usize>) -> Self {
        if let Some(d) = outer {
            assert!(d < self.num_darts());
        }
        self.outer = outer;
        self
    }

    /// First dart from `u` to `v` in rotation order.
    pub fn find_dart(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation(u).into_iter().find(|&d| self.head(d) == v)
    }

    /// Component label per vertex.
    pub fn components(&self) -> (Vec<usize>, usize) {
        components_of(self.num_vertices(), |v| {
            self.rotation(v).into_iter().map(|d| self.head(d)).collect::<Vec<_>>().into_iter()
        })
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    pub fn to_graph(&self) -> NodeWeightedGraph {
        NodeWeightedGraph::new(self.weights.clone(), (0..self.num_edges()).map(|e| self.edge_endpoints(e)))
    }

    /// Per-vertex ccw neighbour lists, as accepted by [`Self::from_rotations`].
    pub fn rotation_lists(&self) -> Vec<Vec<usize>> {
        (0..self.num_vertices())
            .map(|v| self.rotation(v).into_iter().map(|d| self.head(d)).collect())
            .collect()
    }

    /// Removes the marked edges. Returns the new embedding and, per new edge,
    /// the old edge id.
    pub fn delete_edges(&self, remove: &[bool]) -> (PlanarEmbedding, Vec<usize>) {
        assert_eq!(remove.len(), self.num_edges());
        let keep_vertex = vec![true; self.num_vertices()];
        let (emb, _, edge_map) = self.restrict(&keep_vertex, remove);
        (emb, edge_map)
    }

    /// Removes the marked vertices with their incident edges. Returns the new
    /// embedding, old index per new vertex, and old edge per new edge.
    pub fn remove_vertices(&self, remove: &[bool]) -> (PlanarEmbedding, Vec<usize>, Vec<usize>) {
        assert_eq!(remove.len(), self.num_vertices());
        let keep: Vec<bool> = remove.iter().map(|&r| !r).collect();
        let remove_edge: Vec<bool> = (0..self.num_edges())
            .map(|e| {
                let (u, v) = self.edge_endpoints(e);
                remove[u] || remove[v]
            })
            .collect();
        self.restrict(&keep, &remove_edge)
    }

    /// Drops self-loops and all but the lowest-id copy of each parallel class.
    pub fn simplify(&self) -> (PlanarEmbedding, Vec<usize>) {
        let mut seen = std::collections::HashSet::new();
        let remove: Vec<bool> = (0..self.num_edges())
            .map(|e| {
                let (u, v) = self.edge_endpoints(e);
                u == v || !seen.insert((u.min(v), u.max(v)))
            })
            .collect();
        self.delete_edges(&remove)
    }

    fn restrict(&self, keep_vertex: &[bool], remove_edge: &[bool]) -> (PlanarEmbedding, Vec<usize>, Vec<usize>) {
        let mut vmap = vec![usize::MAX; self.num_vertices()];
        let mut old_vertices = Vec::new();
        for v in 0..self.num_vertices() {
            if keep_vertex[v] {
                vmap[v] = old_vertices.len();
                old_vertices.push(v);
            }
        }
        let mut emap = vec![usize::MAX; self.num_edges()];
        let mut old_edges = Vec::new();
        for e in 0..self.num_edges() {
            if !remove_edge[e] {
                emap[e] = old_edges.len();
                old_edges.push(e);
            }
        }
        let new_dart = |d: usize| 2 * emap[d / 2] + (d & 1);
        let mut origin = vec![0; 2 * old_edges.len()];
        let mut next = vec![0; 2 * old_edges.len()];
        for &e in &old_edges {
            for d in [2 * e, 2 * e + 1] {
                let mut x = self.next[d];
                while remove_edge[x / 2] {
                    x = self.next[x];
                }
                origin[new_dart(d)] = vmap[self.origin[d]];
                next[new_dart(d)] = new_dart(x);
            }
        }
        let outer = self.outer.and_then(|o| {
            let f = self.face_of[o];
            self.faces[f].iter().copied().find(|&d| !remove_edge[d / 2]).map(new_dart)
        });
        let ids = old_vertices.iter().map(|&v| self.ids[v]).collect();
        let weights = old_vertices.iter().map(|&v| self.weights[v]).collect();
        let emb = PlanarEmbedding::from_darts(ids, weights, origin, next, outer)
            .expect("deleting edges or vertices preserves planarity");
        (emb, old_vertices, old_edges)
    }
}

fn trace_faces(next: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let m = next.len();
    let mut face_of = vec![usize::MAX; m];
    let mut faces = Vec::new();
    for start in 0..m {
        if face_of[start] != usize::MAX {
            continue;
        }
        let f = faces.len();
        let mut walk = Vec::new();
        let mut d = start;
        while face_of[d] == usize::MAX {
            face_of[d] = f;
            walk.push(d);
            d = next[twin(d)];
        }
        faces.push(walk);
    }
    (face_of, faces)
}
