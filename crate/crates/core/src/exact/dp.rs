//! Dynamic program over a nice tree decomposition.
//!
//! A state at a node assigns each bag vertex a label: 0 if it is not in the
//! partial solution, otherwise the index of its connected component, with
//! components numbered by first occurrence. Every component of a partial
//! solution must touch the bag, except at the answer node.

use std::collections::{BTreeMap, HashMap};

use super::{SteinerProblem, SteinerSolution};
use crate::error::{Error, Result};
use crate::graph::{NodeWeightedGraph, INFINITY};
use crate::planar::treedec::{to_nice, tree_decomposition, NiceKind, NiceTreeDecomposition};

pub const DEFAULT_DP_WIDTH_CAP: usize = 7;

/// A problem whose terminals are all pendant, with the mapping back.
#[derive(Clone, Debug)]
pub struct WrappedProblem {
    pub problem: SteinerProblem,
    /// Terminal used as the decomposition root.
    pub root: usize,
    /// Original vertex of each wrapped vertex.
    pub original: Vec<usize>,
}

impl WrappedProblem {
    pub fn unwrap_vertices(&self, vs: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = vs.iter().map(|&v| self.original[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Replaces each terminal `s` by a weight-0 copy that keeps all of `s`'s
/// edges and hangs `s` (with its weight) off that copy as a leaf.
pub fn preprocess_terminals(p: &SteinerProblem) -> WrappedProblem {
    let g = &p.graph;
    let n = g.num_vertices();
    let mut weights = g.weights().to_vec();
    let mut original: Vec<usize> = (0..n).collect();
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    let mut terminals = Vec::new();
    for (i, &s) in p.terminals.iter().enumerate() {
        weights.push(g.weight(s));
        weights[s] = 0.0;
        original.push(s);
        edges.push((s, n + i));
        terminals.push(n + i);
    }
    let problem = SteinerProblem { graph: NodeWeightedGraph::new(weights, edges), terminals };
    WrappedProblem { root: n, problem, original }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Back {
    Leaf,
    One(Vec<u8>),
    Two(Vec<u8>, Vec<u8>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DpEntry {
    pub cost: f64,
    pub back: Back,
}

/// Per-node tables, indexed like the nice decomposition's nodes.
#[derive(Clone, Debug)]
pub struct DpTables {
    pub tables: Vec<BTreeMap<Vec<u8>, DpEntry>>,
}

impl DpTables {
    pub fn num_states(&self) -> usize {
        self.tables.iter().map(BTreeMap::len).sum()
    }

    /// For every join entry, its cost is at least each contributing child
    /// entry minus the shared bag weight, and no entry is negative.
    pub fn check_join_consistency(&self, ntd: &NiceTreeDecomposition, g: &NodeWeightedGraph) -> bool {
        for (i, table) in self.tables.iter().enumerate() {
            for (key, e) in table {
                if e.cost < 0.0 {
                    return false;
                }
                if let (NiceKind::Join, Back::Two(l, r)) = (ntd.kinds[i], &e.back) {
                    let [a, b] = [ntd.children[i][0], ntd.children[i][1]];
                    let ws: f64 = key.iter().zip(&ntd.bags[i]).filter(|(l, _)| **l != 0).map(|(_, &v)| g.weight(v)).sum();
                    let (cl, cr) = (self.tables[a][l].cost, self.tables[b][r].cost);
                    if e.cost < cl.max(cr) - ws {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn normalize(labels: &mut [u8]) {
    let mut map = [0u8; 256];
    let mut next = 0u8;
    for l in labels.iter_mut() {
        if *l != 0 {
            if map[*l as usize] == 0 {
                next += 1;
                map[*l as usize] = next;
            }
            *l = map[*l as usize];
        }
    }
}

fn relax(table: &mut BTreeMap<Vec<u8>, DpEntry>, key: Vec<u8>, cost: f64, back: Back) {
    match table.get(&key) {
        Some(e) if e.cost <= cost => {}
        _ => {
            table.insert(key, DpEntry { cost, back });
        }
    }
}

/// Finest common coarsening of two labelings over the same support.
fn join_partitions(a: &[u8], b: &[u8]) -> Vec<u8> {
    let k = a.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for lab in [a, b] {
        let mut first = [usize::MAX; 256];
        for i in 0..k {
            if lab[i] == 0 {
                continue;
            }
            let f = &mut first[lab[i] as usize];
            if *f == usize::MAX {
                *f = i;
            } else {
                let (x, y) = (find(&mut parent, *f), find(&mut parent, i));
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut out: Vec<u8> = (0..k).map(|i| if a[i] == 0 { 0 } else { find(&mut parent, i) as u8 + 1 }).collect();
    normalize(&mut out);
    out
}

/// Fills the tables bottom-up. The decomposition must be rooted at a
/// terminal.
pub fn td_dp_tables(p: &SteinerProblem, ntd: &NiceTreeDecomposition) -> Result<DpTables> {
    let g = &p.graph;
    if !p.is_terminal(ntd.root_vertex) {
        return Err(Error::InvalidDecomposition("root vertex is not a terminal".into()));
    }
    ntd.validate(g)?;
    let mut tables: Vec<BTreeMap<Vec<u8>, DpEntry>> = Vec::with_capacity(ntd.len());
    for i in 0..ntd.len() {
        let bag = &ntd.bags[i];
        let mut table = BTreeMap::new();
        match ntd.kinds[i] {
            NiceKind::Leaf => {
                table.insert(Vec::new(), DpEntry { cost: 0.0, back: Back::Leaf });
            }
            NiceKind::Introduce(u) => {
                let at = bag.binary_search(&u).unwrap();
                let terminal = p.is_terminal(u);
                for (key, e) in &tables[ntd.children[i][0]] {
                    if !terminal {
                        let mut out = key.clone();
                        out.insert(at, 0);
                        relax(&mut table, out, e.cost, Back::One(key.clone()));
                    }
                    let mut out = key.clone();
                    out.insert(at, u8::MAX);
                    for (j, &v) in bag.iter().enumerate() {
                        if j != at && out[j] != 0 && g.has_edge(u, v) {
                            let old = out[j];
                            for l in out.iter_mut() {
                                if *l == old {
                                    *l = u8::MAX;
                                }
                            }
                        }
                    }
                    normalize(&mut out);
                    relax(&mut table, out, e.cost + g.weight(u), Back::One(key.clone()));
                }
            }
            NiceKind::Forget(u) => {
                let child = ntd.children[i][0];
                let at = ntd.bags[child].binary_search(&u).unwrap();
                for (key, e) in &tables[child] {
                    let l = key[at];
                    if l != 0 && key.iter().filter(|&&x| x == l).count() == 1 {
                        continue;
                    }
                    let mut out = key.clone();
                    out.remove(at);
                    normalize(&mut out);
                    relax(&mut table, out, e.cost, Back::One(key.clone()));
                }
            }
            NiceKind::Join => {
                let (a, b) = (ntd.children[i][0], ntd.children[i][1]);
                let mut by_support: HashMap<Vec<bool>, Vec<(&Vec<u8>, f64)>> = HashMap::new();
                for (key, e) in &tables[b] {
                    by_support.entry(key.iter().map(|&l| l != 0).collect()).or_default().push((key, e.cost));
                }
                for (lk, le) in &tables[a] {
                    let support: Vec<bool> = lk.iter().map(|&l| l != 0).collect();
                    let ws: f64 = bag.iter().zip(&support).filter(|(_, &s)| s).map(|(&v, _)| g.weight(v)).sum();
                    if let Some(rs) = by_support.get(&support) {
                        for &(rk, rc) in rs {
                            let out = join_partitions(lk, rk);
                            relax(&mut table, out, le.cost + rc - ws, Back::Two(lk.clone(), rk.clone()));
                        }
                    }
                }
            }
        }
        tables.push(table);
    }
    Ok(DpTables { tables })
}

/// Optimal tree via the decomposition DP.
pub fn td_dp(p: &SteinerProblem, ntd: &NiceTreeDecomposition) -> Result<SteinerSolution> {
    let dp = td_dp_tables(p, ntd)?;
    let start = dp.tables[ntd.answer].get(&vec![1u8]).ok_or(Error::Infeasible)?;
    if start.cost == INFINITY {
        return Err(Error::Infeasible);
    }
    let mut chosen = Vec::new();
    let mut stack = vec![(ntd.answer, vec![1u8])];
    while let Some((node, key)) = stack.pop() {
        for (l, &v) in key.iter().zip(&ntd.bags[node]) {
            if *l != 0 {
                chosen.push(v);
            }
        }
        match &dp.tables[node][&key].back {
            Back::Leaf => {}
            Back::One(k) => stack.push((ntd.children[node][0], k.clone())),
            Back::Two(l, r) => {
                stack.push((ntd.children[node][0], l.clone()));
                stack.push((ntd.children[node][1], r.clone()));
            }
        }
    }
    SteinerSolution::from_vertex_set(&p.graph, &chosen, "dp")
}

/// Wraps terminals, decomposes with min-fill, runs the DP and maps back.
/// Returns the solution and the decomposition width.
pub fn solve_dp(p: &SteinerProblem, width_cap: usize) -> Result<(SteinerSolution, usize)> {
    let w = preprocess_terminals(p);
    let td = tree_decomposition(&w.problem.graph);
    let width = td.width();
    if width > width_cap {
        return Err(Error::CapExceeded { what: "decomposition width", size: width, cap: width_cap });
    }
    let ntd = to_nice(&td, w.root)?;
    let sol = td_dp(&w.problem, &ntd)?;
    let vs = w.unwrap_vertices(&sol.vertices);
    Ok((SteinerSolution::from_vertex_set(&p.graph, &vs, "dp")?, width))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{brute_force_opt, BRUTE_FORCE_CAP};

    #[test]
    fn path_with_end_terminals() {
        let g = NodeWeightedGraph::new(vec![1.0, 0.0, 1.0, 0.0, 1.0], (0..4).map(|i| (i, i + 1)));
        let d = g.node_weighted_distances(0)[4];
        let p = SteinerProblem::new(g, &[0, 4]).unwrap();
        let (s, _) = solve_dp(&p, DEFAULT_DP_WIDTH_CAP).unwrap();
        assert_eq!(s.cost, d);
        s.validate(&p).unwrap();
    }

    #[test]
    fn single_terminal() {
        let g = NodeWeightedGraph::new(vec![1.0, 1.0], [(0, 1)]);
        let p = SteinerProblem::new(g, &[1]).unwrap();
        let (s, _) = solve_dp(&p, DEFAULT_DP_WIDTH_CAP).unwrap();
        assert_eq!((s.cost, s.vertices), (1.0, vec![1]));
    }

    #[test]
    fn wrapping_preserves_opt() {
        let g = NodeWeightedGraph::new(vec![1.0, 0.0, 1.0, 0.0], [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let p = SteinerProblem::new(g, &[0, 2]).unwrap();
        let w = preprocess_terminals(&p);
        assert!(w.problem.terminals.iter().all(|&t| w.problem.graph.degree(t) == 1));
        let a = brute_force_opt(&p, BRUTE_FORCE_CAP).unwrap().cost;
        let b = brute_force_opt(&w.problem, BRUTE_FORCE_CAP).unwrap().cost;
        assert_eq!(a, b);
    }

    #[test]
    fn cycle_needs_partition_merging_at_join() {
        // 6-cycle, terminals on opposite sides, one heavy arc
        let g = NodeWeightedGraph::new(vec![1.0, 5.0, 1.0, 1.0, 1.0, 1.0], (0..6).map(|i| (i, (i + 1) % 6)));
        let p = SteinerProblem::new(g, &[0, 2]).unwrap();
        let (s, _) = solve_dp(&p, DEFAULT_DP_WIDTH_CAP).unwrap();
        assert_eq!(s.cost, brute_force_opt(&p, BRUTE_FORCE_CAP).unwrap().cost);
    }

    #[test]
    fn disconnected_terminals_are_infeasible() {
        let g = NodeWeightedGraph::new(vec![1.0; 4], [(0, 1), (2, 3)]);
        let p = SteinerProblem::new(g, &[0, 3]).unwrap();
        assert!(matches!(solve_dp(&p, DEFAULT_DP_WIDTH_CAP), Err(Error::Infeasible)));
    }

    #[test]
    fn join_partitions_merges_blocks() {
        assert_eq!(join_partitions(&[1, 2, 0, 3], &[1, 1, 0, 2]), vec![1, 1, 0, 2]);
        assert_eq!(join_partitions(&[1, 2, 2], &[1, 2, 1]), vec![1, 1, 1]);
    }
}
