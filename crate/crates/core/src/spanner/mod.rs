//! Spanner construction: cut the witness open along a starting tree, build a
//! mortar graph over the resulting disc, put portals on every brick and add
//! optimal brick trees for every portal subset.

mod cut_open;
mod mortar;
mod portals;

pub use cut_open::{cut_open, CutOpenGraph};
pub use mortar::{build_mortar, decompose_strips, path_is_short, Brick, MortarGraph, Strip, StripDecomposition};
pub use portals::{check_coverage, select_portals, CoverageReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{DreyfusWagner, SteinerSolution, DW_TERMINAL_CAP};
use crate::graph::NodeWeightedGraph;
use crate::planar::PlanarEmbedding;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PortalParams {
    pub epsilon: f64,
    /// ε/4, used for strips and columns.
    pub eps_prime: f64,
    pub theta: usize,
    /// Column classes per strip, `⌈1/ε³⌉`.
    pub kappa: usize,
    /// Multiplier in `θ = ⌈c_p/ε²⌉`.
    pub c_p: f64,
    /// Most portals per brick; also the Dreyfus–Wagner terminal budget.
    pub portal_cap: usize,
}

pub const DEFAULT_PORTAL_CAP: usize = 10;
pub const DEFAULT_C_P: f64 = 2.0;

impl PortalParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        Self::with_cap(epsilon, DEFAULT_PORTAL_CAP, DEFAULT_C_P)
    }

    /// `θ = min(⌊cap/3⌋, ⌈c_p/ε²⌉)`, at least 1, so `3θ` portals fit the cap.
    pub fn with_cap(epsilon: f64, portal_cap: usize, c_p: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        if portal_cap == 0 || portal_cap > DW_TERMINAL_CAP {
            return Err(Error::InvalidParameter(format!("portal cap must lie in 1..={DW_TERMINAL_CAP}, got {portal_cap}")));
        }
        let wanted = (c_p / (epsilon * epsilon)).ceil().max(1.0) as usize;
        let theta = (portal_cap / 3).min(wanted).max(1);
        let kappa = (1.0 / epsilon.powi(3)).ceil().max(1.0) as usize;
        Ok(PortalParams { epsilon, eps_prime: epsilon / 4.0, theta, kappa, c_p, portal_cap })
    }

    /// Overrides θ; `3θ` may then exceed the cap, which brick trees report.
    pub fn with_theta(mut self, theta: usize) -> Result<Self> {
        if theta == 0 {
            return Err(Error::InvalidParameter("theta must be at least 1".into()));
        }
        self.theta = theta;
        Ok(self)
    }
}

/// Optimal trees inside one brick for every nonempty portal subset.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BrickTrees {
    pub subsets: usize,
    /// Subsets not connected inside the brick; they add nothing.
    pub infeasible: usize,
    /// Union of all trees, as cut-open edges.
    pub edges: Vec<usize>,
    /// Union of all trees, as cut-open vertices.
    pub vertices: Vec<usize>,
    /// Cost of the tree for each subset mask, infinite when infeasible.
    pub costs: Vec<f64>,
}

/// Runs Dreyfus–Wagner over the portals in the closed brick (its faces plus
/// boundary) and collects the tree for every subset.
pub fn brick_trees(emb: &PlanarEmbedding, brick: &Brick, portals: &[usize], cap: usize) -> Result<BrickTrees> {
    if portals.len() > cap {
        return Err(Error::CapExceeded { what: "portals per brick (lower theta)", size: portals.len(), cap });
    }
    let mut inside = vec![false; emb.num_faces()];
    for &f in &brick.faces {
        inside[f] = true;
    }
    let mut local = vec![usize::MAX; emb.num_vertices()];
    let mut verts = Vec::new();
    let mut pairs = Vec::new();
    let mut edge_of = std::collections::HashMap::new();
    for e in 0..emb.num_edges() {
        if !(inside[emb.face_of(2 * e)] || inside[emb.face_of(2 * e + 1)]) {
            continue;
        }
        let (u, v) = emb.edge_endpoints(e);
        for x in [u, v] {
            if local[x] == usize::MAX {
                local[x] = verts.len();
                verts.push(x);
            }
        }
        if u != v {
            let key = (local[u].min(local[v]), local[u].max(local[v]));
            edge_of.entry(key).or_insert(e);
            pairs.push(key);
        }
    }
    for &p in portals {
        if local[p] == usize::MAX {
            local[p] = verts.len();
            verts.push(p);
        }
    }
    let g = NodeWeightedGraph::new(verts.iter().map(|&v| emb.weight(v)).collect(), pairs);
    let terms: Vec<usize> = portals.iter().map(|&p| local[p]).collect();
    let dw = DreyfusWagner::run(&g, &terms, cap)?;
    let mut out = BrickTrees { costs: vec![f64::INFINITY], ..Default::default() };
    let mut used_v = vec![false; verts.len()];
    let mut used_e = std::collections::BTreeSet::new();
    for mask in 1..(1usize << terms.len()) {
        out.subsets += 1;
        let Some(tree) = dw.tree(mask) else {
            out.infeasible += 1;
            out.costs.push(f64::INFINITY);
            continue;
        };
        out.costs.push(dw.cost(mask));
        let sol = SteinerSolution::from_vertex_set(&g, &tree, "brick")?;
        for &v in &sol.vertices {
            used_v[v] = true;
        }
        for &(a, b) in &sol.edges {
            used_e.insert(edge_of[&(a, b)]);
        }
    }
    out.vertices = (0..verts.len()).filter(|&i| used_v[i]).map(|i| verts[i]).collect();
    out.vertices.sort_unstable();
    out.edges = used_e.into_iter().collect();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BrickStats {
    pub strip: usize,
    pub boundary_len: usize,
    pub boundary_vertices: usize,
    pub portals: usize,
    pub coverage: CoverageReport,
    pub subsets: usize,
    pub infeasible_subsets: usize,
    pub south_len: usize,
    pub north_len: usize,
    /// `S_B` is ε-short inside the brick.
    pub south_short: bool,
    /// `N_B` is a shortest path inside the brick.
    pub north_shortest: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpannerReport {
    pub params: PortalParams,
    /// Starter tree had at most one edge; H is the starter itself.
    pub degenerate: bool,
    pub starter_cost: f64,
    pub h_weight: f64,
    /// `w(H)/c(starter)`.
    pub shortness_ratio: f64,
    pub h_vertices: usize,
    pub h_edges: usize,
    pub boundary_vertices: usize,
    pub boundary_cost: f64,
    /// `Σ deg_ST(v)·w(v)` over the starter.
    pub degree_weighted_cost: f64,
    pub terminals_on_boundary: bool,
    pub strips: usize,
    pub shortcut_len: usize,
    pub columns: usize,
    pub supercolumn_len: usize,
    pub mortar_cost: f64,
    pub bricks: Vec<BrickStats>,
}

impl SpannerReport {
    pub fn all_portals_covered(&self) -> bool {
        self.bricks.iter().all(|b| b.coverage.holds(self.params.theta))
    }
}

/// The spanner `H`, a subgraph of the witness.
#[derive(Clone, Debug, Serialize)]
pub struct Spanner {
    /// Sorted witness vertex indices.
    pub vertices: Vec<usize>,
    /// Sorted witness edge ids.
    pub edges: Vec<usize>,
    pub report: SpannerReport,
}

impl Spanner {
    /// `H` as an embedding of its own, with the witness ids kept.
    /// Returns the embedding, the witness vertex per new vertex and the
    /// witness edge per new edge.
    pub fn subgraph(&self, witness: &PlanarEmbedding) -> (PlanarEmbedding, Vec<usize>, Vec<usize>) {
        restrict(witness, &self.vertices, &self.edges)
    }
}

fn restrict(emb: &PlanarEmbedding, vertices: &[usize], edges: &[usize]) -> (PlanarEmbedding, Vec<usize>, Vec<usize>) {
    let mut drop_e = vec![true; emb.num_edges()];
    for &e in edges {
        drop_e[e] = false;
    }
    let (a, emap) = emb.delete_edges(&drop_e);
    let mut drop_v = vec![true; emb.num_vertices()];
    for &v in vertices {
        drop_v[v] = false;
    }
    let (b, vmap, emap2) = a.remove_vertices(&drop_v);
    let emap = emap2.into_iter().map(|e| emap[e]).collect();
    (b, vmap, emap)
}

/// Builds the spanner of `witness` for `terminals` around `starter`.
pub fn build_spanner(
    witness: &PlanarEmbedding,
    terminals: &[usize],
    starter: &SteinerSolution,
    params: &PortalParams,
) -> Result<Spanner> {
    if terminals.is_empty() {
        return Err(Error::NoTerminals);
    }
    let starter_cost: f64 = starter.vertices.iter().map(|&v| witness.weight(v)).sum();
    let degree_weighted_cost = {
        let mut deg = vec![0usize; witness.num_vertices()];
        for &(u, v) in &starter.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        starter.vertices.iter().map(|&v| deg[v].max(1) as f64 * witness.weight(v)).sum()
    };
    let mut report = SpannerReport {
        params: params.clone(),
        degenerate: false,
        starter_cost,
        h_weight: 0.0,
        shortness_ratio: 1.0,
        h_vertices: 0,
        h_edges: 0,
        boundary_vertices: 0,
        boundary_cost: 0.0,
        degree_weighted_cost,
        terminals_on_boundary: true,
        strips: 0,
        shortcut_len: 0,
        columns: 0,
        supercolumn_len: 0,
        mortar_cost: 0.0,
        bricks: Vec::new(),
    };
    let tree_edges = cut_open::tree_edge_ids(witness, starter)?;
    if starter.edges.len() <= 1 {
        report.degenerate = true;
        let mut vertices: Vec<usize> = starter.vertices.iter().chain(terminals).copied().collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges = tree_edges;
        edges.sort_unstable();
        return Ok(finish(witness, vertices, edges, report));
    }

    // work inside the component holding the starter
    let (comp, count) = witness.components();
    let c0 = comp[starter.vertices[0]];
    let (w, vmap, emap) = if count > 1 {
        let drop: Vec<bool> = comp.iter().map(|&c| c != c0).collect();
        witness.remove_vertices(&drop)
    } else {
        (witness.clone(), (0..witness.num_vertices()).collect(), (0..witness.num_edges()).collect())
    };
    let mut back = vec![usize::MAX; witness.num_vertices()];
    for (i, &v) in vmap.iter().enumerate() {
        back[v] = i;
    }
    let local_starter = SteinerSolution {
        vertices: starter.vertices.iter().map(|&v| back[v]).collect(),
        edges: starter.edges.iter().map(|&(u, v)| (back[u].min(back[v]), back[u].max(back[v]))).collect(),
        cost: starter.cost,
        solver: starter.solver.clone(),
    };

    let cog = cut_open(&w, &local_starter)?;
    report.boundary_vertices = cog.boundary_vertices.len();
    report.boundary_cost = cog.boundary_cost();
    let on_boundary = cog.originals_on_boundary();
    report.terminals_on_boundary = terminals.iter().all(|&t| back[t] != usize::MAX && on_boundary.binary_search(&back[t]).is_ok());

    let strips = decompose_strips(&cog, params.eps_prime);
    report.strips = strips.strips.len();
    report.shortcut_len = strips.shortcut_len;
    let mg = build_mortar(&cog, strips, params.eps_prime, params.kappa);
    report.columns = mg.columns;
    report.supercolumn_len = mg.supercolumn_edges.len();

    let wp = &cog.embedding;
    let mut h_cut_v: Vec<usize> = Vec::new();
    let mut h_cut_e: Vec<usize> = mg.edges.clone();
    for b in &mg.bricks {
        let positions = select_portals(&b.boundary_vertices, params.theta);
        let portals: Vec<usize> = positions.iter().map(|&p| b.boundary_vertices[p]).collect();
        let coverage = check_coverage(&b.boundary_vertices, |v| wp.weight(v), &positions, params.theta);
        let trees = brick_trees(wp, b, &portals, params.portal_cap)?;
        h_cut_v.extend(&trees.vertices);
        h_cut_e.extend(&trees.edges);
        let mut distinct = b.boundary_vertices.clone();
        distinct.sort_unstable();
        distinct.dedup();
        report.bricks.push(BrickStats {
            strip: b.strip,
            boundary_len: b.boundary.len(),
            boundary_vertices: distinct.len(),
            portals: portals.len(),
            coverage,
            subsets: trees.subsets,
            infeasible_subsets: trees.infeasible,
            south_len: b.south_run.len().saturating_sub(1),
            north_len: b.north_run.len().saturating_sub(1),
            south_short: path_is_short(wp, b, &b.south_run, params.epsilon),
            north_shortest: path_is_short(wp, b, &b.north_run, 0.0),
        });
    }

    // uncut: copies to originals, then back to witness indices
    let mg_vertices = |edges: &[usize]| {
        let mut vs: Vec<usize> = edges
            .iter()
            .flat_map(|&e| {
                let (a, b) = wp.edge_endpoints(e);
                [cog.copy_of[a], cog.copy_of[b]]
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    report.mortar_cost = mg_vertices(&mg.edges).iter().map(|&v| w.weight(v)).sum();
    let mut vertices: Vec<usize> = mg_vertices(&h_cut_e);
    vertices.extend(h_cut_v.iter().map(|&v| cog.copy_of[v]));
    vertices.extend(terminals.iter().filter(|&&t| back[t] != usize::MAX).map(|&t| back[t]));
    let mut vertices: Vec<usize> = vertices.into_iter().map(|v| vmap[v]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let mut edges: Vec<usize> = h_cut_e.iter().map(|&e| emap[cog.edge_origin[e]]).collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(finish(witness, vertices, edges, report))
}

fn finish(witness: &PlanarEmbedding, vertices: Vec<usize>, edges: Vec<usize>, mut report: SpannerReport) -> Spanner {
    report.h_weight = vertices.iter().map(|&v| witness.weight(v)).sum();
    report.h_vertices = vertices.len();
    report.h_edges = edges.len();
    report.shortness_ratio = if report.starter_cost > 0.0 { report.h_weight / report.starter_cost } else { 1.0 };
    Spanner { vertices, edges, report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{brute_force_opt, SteinerProblem, BRUTE_FORCE_CAP};
    use crate::instance::{gen_grid_map, GridMapParams};
    use crate::starter::primal_dual_starter;

    #[test]
    fn theta_respects_cap() {
        let p = PortalParams::new(0.5).unwrap();
        assert_eq!((p.theta, p.kappa), (3, 8));
        assert_eq!(p.eps_prime, 0.125);
        assert_eq!(PortalParams::with_cap(0.9, 12, 2.0).unwrap().theta, 3);
        assert!(PortalParams::new(0.0).is_err());
        assert!(PortalParams::with_cap(0.5, 13, 2.0).is_err());
    }

    #[test]
    fn three_portals_give_seven_subsets_matching_brute_force() {
        // a 2x2 grid face with a weighted diagonal vertex in the middle
        let rot: Vec<Vec<usize>> = vec![vec![1, 4, 3], vec![2, 4, 0], vec![3, 4, 1], vec![0, 4, 2], vec![0, 1, 2, 3]];
        let emb = PlanarEmbedding::from_rotations((0..5).collect(), vec![1.0, 0.0, 1.0, 0.0, 3.0], &rot).unwrap();
        let faces: Vec<usize> = (0..emb.num_faces()).filter(|&f| emb.face(f).len() == 3).collect();
        let brick = Brick {
            strip: 0,
            faces,
            boundary: Vec::new(),
            boundary_vertices: vec![0, 1, 2, 3],
            south_run: Vec::new(),
            north_run: Vec::new(),
        };
        let portals = [0, 1, 2];
        let t = brick_trees(&emb, &brick, &portals, 10).unwrap();
        assert_eq!(t.subsets, 7);
        let g = emb.to_graph();
        for mask in 1..8usize {
            let x: Vec<usize> = (0..3).filter(|&i| mask >> i & 1 == 1).map(|i| portals[i]).collect();
            let opt = brute_force_opt(&SteinerProblem::new(g.clone(), &x).unwrap(), BRUTE_FORCE_CAP).unwrap();
            assert_eq!(t.costs[mask], opt.cost, "mask {mask}");
        }
        assert!(brick_trees(&emb, &brick, &portals, 2).is_err());
    }

    #[test]
    fn spanner_contains_terminals_and_is_a_subgraph() {
        for seed in 0..20 {
            let inst = gen_grid_map(&GridMapParams { rows: 3, cols: 4, seed, merge_prob: 0.3, terminals: 3 }).unwrap();
            let p = SteinerProblem::from_instance(&inst).unwrap();
            let (st, _) = primal_dual_starter(&p).unwrap();
            let params = PortalParams::new(0.5).unwrap();
            let h = build_spanner(&inst.witness, &p.terminals, &st, &params).unwrap();
            for &t in &p.terminals {
                assert!(h.vertices.binary_search(&t).is_ok());
            }
            for &e in &h.edges {
                let (u, v) = inst.witness.edge_endpoints(e);
                assert!(h.vertices.binary_search(&u).is_ok() && h.vertices.binary_search(&v).is_ok());
            }
            let r = &h.report;
            assert!(r.degenerate || r.boundary_cost == r.degree_weighted_cost);
            assert!(r.strips as f64 <= r.boundary_vertices as f64 / 2.0 + 1.0);
            assert!(r.all_portals_covered());
            assert!(r.bricks.iter().all(|b| b.north_shortest && b.south_short));
            let (sub, _, _) = h.subgraph(&inst.witness);
            sub.check_invariants().unwrap();
        }
    }
}
