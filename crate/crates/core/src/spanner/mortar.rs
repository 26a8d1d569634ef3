//! Strips, columns and bricks of the cut-open graph.
//!
//! A region is a set of faces; its boundary is the walk of darts that have
//! the region on their right. All lengths here are hop counts.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::cut_open::CutOpenGraph;
use crate::planar::{twin, PlanarEmbedding};

/// Darts `d` with `face(d)` outside and `face(twin(d))` inside, as one
/// closed walk starting at the lowest such dart.
pub(crate) fn boundary_walk(emb: &PlanarEmbedding, inside: &[bool]) -> Vec<usize> {
    let is_boundary = |d: usize| !inside[emb.face_of(d)] && inside[emb.face_of(twin(d))];
    let Some(start) = (0..emb.num_darts()).find(|&d| is_boundary(d)) else {
        return Vec::new();
    };
    let mut walk = vec![start];
    let mut d = start;
    loop {
        let mut x = emb.next(twin(d));
        while !inside[emb.face_of(twin(x))] {
            x = emb.next(x);
        }
        if x == start {
            return walk;
        }
        walk.push(x);
        d = x;
        if walk.len() > emb.num_darts() {
            return walk;
        }
    }
}

/// Edges with at least one side in the face set.
pub(crate) fn region_edges(emb: &PlanarEmbedding, inside: &[bool]) -> Vec<bool> {
    (0..emb.num_edges()).map(|e| inside[emb.face_of(2 * e)] || inside[emb.face_of(2 * e + 1)]).collect()
}

/// Adjacency restricted to an edge mask: `(neighbour, edge)` sorted.
pub(crate) fn masked_adjacency(emb: &PlanarEmbedding, edges: &[bool]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); emb.num_vertices()];
    for e in (0..emb.num_edges()).filter(|&e| edges[e]) {
        let (u, v) = emb.edge_endpoints(e);
        if u != v {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// Multi-source BFS; `parent[v]` is `(previous vertex, edge)` toward the sources.
pub(crate) fn bfs(adj: &[Vec<(usize, usize)>], sources: &[usize]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let n = adj.len();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![(usize::MAX, usize::MAX); n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] == usize::MAX {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = (u, e);
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Follows BFS parents from `v` back to a source: vertices and edges.
pub(crate) fn trace(parent: &[(usize, usize)], mut v: usize) -> (Vec<usize>, Vec<usize>) {
    let mut verts = vec![v];
    let mut edges = Vec::new();
    while parent[v].0 != usize::MAX {
        edges.push(parent[v].1);
        v = parent[v].0;
        verts.push(v);
    }
    (verts, edges)
}

/// Face sets reachable from each other across edges that are not cut.
pub(crate) fn flood(emb: &PlanarEmbedding, faces: &[usize], cut: &[bool]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; emb.num_faces()];
    for &f in faces {
        inside[f] = true;
    }
    let mut piece = vec![usize::MAX; emb.num_faces()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut sorted = faces.to_vec();
    sorted.sort_unstable();
    for &f in &sorted {
        if piece[f] != usize::MAX {
            continue;
        }
        let id = out.len();
        piece[f] = id;
        let mut members = vec![f];
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            for &d in emb.face(g) {
                if cut[d / 2] {
                    continue;
                }
                let h = emb.face_of(twin(d));
                if inside[h] && piece[h] == usize::MAX {
                    piece[h] = id;
                    members.push(h);
                    stack.push(h);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

fn mask(n: usize, items: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in items {
        m[i] = true;
    }
    m
}

#[derive(Clone, Debug, Serialize)]
pub struct Strip {
    pub faces: Vec<usize>,
    /// South boundary as a vertex path, west to east.
    pub south: Vec<usize>,
    pub south_edges: Vec<usize>,
    /// Edge closing the south boundary at the east end.
    pub east_edge: usize,
    /// North boundary from the west end to the east end.
    pub north: Vec<usize>,
    pub north_edges: Vec<usize>,
    /// Boundary length of the region the strip was cut from.
    pub region_len: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StripDecomposition {
    pub strips: Vec<Strip>,
    /// Union of all north paths.
    pub shortcut_edges: Vec<usize>,
    /// Total hop length of the north paths.
    pub shortcut_len: usize,
}

/// Repeatedly cuts off the region between a boundary subpath and a much
/// shorter path through the region.
///
/// A pair of boundary positions `(i, j)` is violating when
/// `(1 + ε′)·dist(c_i, c_j) < ℓ(C[i..j])`; the shortest violating span is
/// taken, so every shorter subpath of it is `ε′`-short.
pub fn decompose_strips(cog: &CutOpenGraph, eps_prime: f64) -> StripDecomposition {
    let emb = &cog.embedding;
    let mut strips = Vec::new();
    let mut shortcut = vec![false; emb.num_edges()];
    let mut shortcut_len = 0;
    let Some(hole) = cog.hole else {
        return StripDecomposition { strips, shortcut_edges: Vec::new(), shortcut_len };
    };
    let all: Vec<usize> = (0..emb.num_faces()).filter(|&f| f != hole).collect();
    let mut queue = VecDeque::from([all]);
    while let Some(faces) = queue.pop_front() {
        let inside = mask(emb.num_faces(), &faces);
        let walk = boundary_walk(emb, &inside);
        let len = walk.len();
        let cs: Vec<usize> = walk.iter().map(|&d| emb.origin(d)).collect();
        let adj = masked_adjacency(emb, &region_edges(emb, &inside));
        let mut dist: HashMap<usize, Vec<usize>> = HashMap::new();
        for &c in &cs {
            dist.entry(c).or_insert_with(|| bfs(&adj, &[c]).0);
        }
        let mut found = None;
        'search: for span in 2..len {
            for i in 0..len {
                let j = (i + span) % len;
                if cs[i] == cs[j] {
                    continue;
                }
                let d = dist[&cs[i]][cs[j]];
                if d != usize::MAX && (1.0 + eps_prime) * (d as f64) < span as f64 {
                    found = Some((i, span));
                    break 'search;
                }
            }
        }
        let Some((i, span)) = found else {
            strips.push(Strip {
                faces,
                south: cs[..len.max(1) - 1].to_vec(),
                south_edges: walk[..len.saturating_sub(1)].iter().map(|&d| d / 2).collect(),
                east_edge: walk[len - 1] / 2,
                north: vec![cs[0]],
                north_edges: Vec::new(),
                region_len: len,
            });
            continue;
        };
        let j = (i + span) % len;
        let (_, parent) = bfs(&adj, &[cs[j]]);
        let (north, north_edges) = trace(&parent, cs[i]);
        let cut = mask(emb.num_edges(), &north_edges);
        let pieces = flood(emb, &faces, &cut);
        let inner = emb.face_of(twin(walk[i]));
        let pos = |k: usize| (i + k) % len;
        for piece in pieces {
            if piece.binary_search(&inner).is_ok() {
                strips.push(Strip {
                    faces: piece,
                    south: (0..span).map(|k| cs[pos(k)]).collect(),
                    south_edges: (0..span - 1).map(|k| walk[pos(k)] / 2).collect(),
                    east_edge: walk[pos(span - 1)] / 2,
                    north: north.clone(),
                    north_edges: north_edges.clone(),
                    region_len: len,
                });
            } else {
                queue.push_back(piece);
            }
        }
        for &e in &north_edges {
            shortcut[e] = true;
        }
        shortcut_len += north_edges.len();
    }
    let shortcut_edges = (0..emb.num_edges()).filter(|&e| shortcut[e]).collect();
    StripDecomposition { strips, shortcut_edges, shortcut_len }
}

#[derive(Clone, Debug, Serialize)]
pub struct Brick {
    pub strip: usize,
    pub faces: Vec<usize>,
    /// Boundary darts in walk order.
    pub boundary: Vec<usize>,
    pub boundary_vertices: Vec<usize>,
    /// Longest run of south edges on the boundary.
    pub south_run: Vec<usize>,
    /// Longest run of north edges on the boundary.
    pub north_run: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MortarGraph {
    pub strips: StripDecomposition,
    /// Mortar edges of the cut-open graph: the boundary cycle, the north
    /// paths and the supercolumns.
    pub edges: Vec<usize>,
    pub columns: usize,
    pub supercolumn_edges: Vec<usize>,
    pub kappa: usize,
    pub bricks: Vec<Brick>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    South,
    North,
    Other,
}

/// Longest cyclic run of darts labelled `want`, as the vertex path it covers.
fn longest_run(emb: &PlanarEmbedding, walk: &[usize], label: &[Side], want: Side) -> Vec<usize> {
    let len = walk.len();
    if len == 0 {
        return Vec::new();
    }
    if label.iter().all(|&l| l == want) {
        return walk.iter().map(|&d| emb.origin(d)).collect();
    }
    let start = (0..len).find(|&k| label[k] != want).unwrap();
    let mut best: (usize, usize) = (0, 0);
    let mut k = 0;
    while k < len {
        let p = (start + k) % len;
        if label[p] == want {
            let mut r = 0;
            while k + r < len && label[(start + k + r) % len] == want {
                r += 1;
            }
            if r > best.1 {
                best = (p, r);
            }
            k += r;
        } else {
            k += 1;
        }
    }
    if best.1 == 0 {
        return Vec::new();
    }
    let mut verts: Vec<usize> = (0..best.1).map(|r| emb.origin(walk[(best.0 + r) % len])).collect();
    verts.push(emb.head(walk[(best.0 + best.1 - 1) % len]));
    verts
}

/// Columns, supercolumns and bricks on top of a strip decomposition.
pub fn build_mortar(cog: &CutOpenGraph, strips: StripDecomposition, eps_prime: f64, kappa: usize) -> MortarGraph {
    let emb = &cog.embedding;
    let ne = emb.num_edges();
    let mut mg = vec![false; ne];
    for &d in &cog.boundary {
        mg[d / 2] = true;
    }
    for &e in &strips.shortcut_edges {
        mg[e] = true;
    }
    let mut supercolumn = vec![false; ne];
    let mut total_columns = 0;
    let mut bricks = Vec::new();
    for (si, strip) in strips.strips.iter().enumerate() {
        let inside = mask(emb.num_faces(), &strip.faces);
        let adj = masked_adjacency(emb, &region_edges(emb, &inside));
        let (to_north, parent) = bfs(&adj, &strip.north);
        let mut columns: Vec<Vec<usize>> = Vec::new();
        let mut cur = 0;
        for z in 1..strip.south.len() {
            let s = strip.south[z];
            if to_north[s] == usize::MAX {
                continue;
            }
            if (z - cur) as f64 > eps_prime * to_north[s] as f64 {
                cur = z;
                let (_, edges) = trace(&parent, s);
                if !edges.is_empty() {
                    columns.push(edges);
                }
            }
        }
        total_columns += columns.len();
        let k = kappa.max(1);
        let class_len = |c: usize| columns.iter().skip(c).step_by(k).map(Vec::len).sum::<usize>();
        let best = (0..k).min_by_key(|&c| (class_len(c), c)).unwrap_or(0);
        let mut cut = vec![false; ne];
        for col in columns.iter().skip(best).step_by(k) {
            for &e in col {
                cut[e] = true;
                supercolumn[e] = true;
                mg[e] = true;
            }
        }
        let mut label = vec![Side::Other; ne];
        for &e in &strip.north_edges {
            label[e] = Side::North;
        }
        for &e in &strip.south_edges {
            label[e] = Side::South;
        }
        for faces in flood(emb, &strip.faces, &cut) {
            let inside = mask(emb.num_faces(), &faces);
            let boundary = boundary_walk(emb, &inside);
            let labels: Vec<Side> = boundary.iter().map(|&d| label[d / 2]).collect();
            let south_run = longest_run(emb, &boundary, &labels, Side::South);
            let north_run = longest_run(emb, &boundary, &labels, Side::North);
            let boundary_vertices = boundary.iter().map(|&d| emb.origin(d)).collect();
            bricks.push(Brick { strip: si, faces, boundary, boundary_vertices, south_run, north_run });
        }
    }
    MortarGraph {
        strips,
        edges: (0..ne).filter(|&e| mg[e]).collect(),
        columns: total_columns,
        supercolumn_edges: (0..ne).filter(|&e| supercolumn[e]).collect(),
        kappa,
        bricks,
    }
}

/// Whether every pair on `path` satisfies `ℓ_path(a, b) ≤ (1 + ε)·dist_B(a, b)`
/// inside the brick; `ε = 0` checks that the path is shortest.
pub fn path_is_short(emb: &PlanarEmbedding, brick: &Brick, path: &[usize], eps: f64) -> bool {
    let inside = mask(emb.num_faces(), &brick.faces);
    let adj = masked_adjacency(emb, &region_edges(emb, &inside));
    for a in 0..path.len() {
        let (dist, _) = bfs(&adj, &[path[a]]);
        for b in a + 1..path.len() {
            if (b - a) as f64 > (1.0 + eps) * dist[path[b]] as f64 + 1e-9 {
                return false;
            }
        }
    }
    true
}
