use super::{SteinerProblem, SteinerSolution};
use crate::error::{Error, Result};
use crate::graph::{NodeWeightedGraph, INFINITY};

pub const DW_TERMINAL_CAP: usize = 12;

const SEED: usize = usize::MAX;

/// Node-weighted Dreyfus–Wagner tables for every subset of a terminal list.
///
/// `T[S][v]` is the cheapest tree holding the terminals in `S` and `v`.
/// Merging two subtrees at `v` pays `w(v)` once; growing a tree by a
/// path pays each new vertex once.
#[derive(Clone, Debug)]
pub struct DreyfusWagner {
    terminals: Vec<usize>,
    n: usize,
    table: Vec<f64>,
    parent: Vec<usize>,
    split: Vec<u32>,
}

impl DreyfusWagner {
    pub fn run(g: &NodeWeightedGraph, terminals: &[usize], cap: usize) -> Result<Self> {
        let k = terminals.len();
        if k > cap || k > 30 {
            return Err(Error::CapExceeded { what: "Dreyfus-Wagner terminal count", size: k, cap });
        }
        let n = g.num_vertices();
        let size = 1usize << k;
        let mut table = vec![INFINITY; size * n];
        let mut parent = vec![SEED; size * n];
        let mut split = vec![0u32; size * n];
        for s in 1..size {
            let mut seeds = Vec::new();
            if s.count_ones() == 1 {
                let x = terminals[s.trailing_zeros() as usize];
                seeds.push((x, g.weight(x)));
            } else {
                let low = s & s.wrapping_neg();
                for v in 0..n {
                    let mut best = INFINITY;
                    let mut arg = 0;
                    // proper subsets D of S holding the lowest element
                    let rest = s ^ low;
                    let mut sub = (rest - 1) & rest;
                    loop {
                        let d = sub | low;
                        let a = table[d * n + v];
                        let b = table[(s ^ d) * n + v];
                        if a < INFINITY && b < INFINITY {
                            let c = a + b - g.weight(v);
                            if c < best {
                                best = c;
                                arg = d as u32;
                            }
                        }
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & rest;
                    }
                    if best < INFINITY {
                        split[s * n + v] = arg;
                        seeds.push((v, best));
                    }
                }
            }
            let (dist, par) = g.node_weighted_tree(&seeds);
            let row = s * n;
            table[row..row + n].copy_from_slice(&dist);
            parent[row..row + n].copy_from_slice(&par);
        }
        Ok(DreyfusWagner { terminals: terminals.to_vec(), n, table, parent, split })
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    /// `T[S][v]`.
    pub fn value(&self, mask: usize, v: usize) -> f64 {
        self.table[mask * self.n + v]
    }

    /// Optimal cost for the terminals in `mask` (nonempty).
    pub fn cost(&self, mask: usize) -> f64 {
        self.value(mask, self.terminals[mask.trailing_zeros() as usize])
    }

    /// Vertex set of an optimal tree for `mask`, or `None` if infeasible.
    pub fn tree(&self, mask: usize) -> Option<Vec<usize>> {
        let root = self.terminals[mask.trailing_zeros() as usize];
        if self.value(mask, root) == INFINITY {
            return None;
        }
        let mut out = Vec::new();
        let mut stack = vec![(mask, root)];
        while let Some((s, mut v)) = stack.pop() {
            out.push(v);
            while self.parent[s * self.n + v] != SEED {
                v = self.parent[s * self.n + v];
                out.push(v);
            }
            if s.count_ones() > 1 {
                let d = self.split[s * self.n + v] as usize;
                stack.push((d, v));
                stack.push((s ^ d, v));
            }
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }
}

/// Optimal node-weighted Steiner tree with at most `cap` terminals.
pub fn dreyfus_wagner_nw(p: &SteinerProblem, cap: usize) -> Result<SteinerSolution> {
    let dw = DreyfusWagner::run(&p.graph, &p.terminals, cap)?;
    let full = (1usize << p.terminals.len()) - 1;
    let vs = dw.tree(full).ok_or(Error::Infeasible)?;
    SteinerSolution::from_vertex_set(&p.graph, &vs, "dw")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> NodeWeightedGraph {
        NodeWeightedGraph::new(vec![1.0, 0.0, 1.0, 0.0, 1.0], (0..4).map(|i| (i, i + 1)))
    }

    #[test]
    fn one_terminal_costs_its_weight() {
        let p = SteinerProblem::new(path(), &[2]).unwrap();
        let s = dreyfus_wagner_nw(&p, DW_TERMINAL_CAP).unwrap();
        assert_eq!((s.cost, s.vertices.clone()), (1.0, vec![2]));
    }

    #[test]
    fn two_terminals_cost_the_path_distance() {
        let g = path();
        let d = g.node_weighted_distances(0)[4];
        let p = SteinerProblem::new(g, &[0, 4]).unwrap();
        let s = dreyfus_wagner_nw(&p, DW_TERMINAL_CAP).unwrap();
        assert_eq!(s.cost, d);
        s.validate(&p).unwrap();
    }

    #[test]
    fn star_merge_counts_centre_once() {
        let g = NodeWeightedGraph::new(vec![5.0, 1.0, 1.0, 1.0], [(0, 1), (0, 2), (0, 3)]);
        let p = SteinerProblem::new(g, &[1, 2, 3]).unwrap();
        assert_eq!(dreyfus_wagner_nw(&p, DW_TERMINAL_CAP).unwrap().cost, 8.0);
    }

    #[test]
    fn subset_trees_are_available() {
        let g = NodeWeightedGraph::new(vec![5.0, 1.0, 1.0, 1.0], [(0, 1), (0, 2), (0, 3)]);
        let dw = DreyfusWagner::run(&g, &[1, 2, 3], 3).unwrap();
        assert_eq!(dw.cost(0b001), 1.0);
        assert_eq!(dw.cost(0b011), 7.0);
        assert_eq!(dw.tree(0b101), Some(vec![0, 1, 3]));
    }

    #[test]
    fn disconnected_is_infeasible_and_cap_enforced() {
        let g = NodeWeightedGraph::new(vec![1.0; 3], [(0, 1)]);
        let p = SteinerProblem::new(g, &[0, 2]).unwrap();
        assert!(matches!(dreyfus_wagner_nw(&p, DW_TERMINAL_CAP), Err(Error::Infeasible)));
        assert!(matches!(dreyfus_wagner_nw(&p, 1), Err(Error::CapExceeded { .. })));
    }
}
