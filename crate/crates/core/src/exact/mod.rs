//! Exact node-weighted Steiner tree solvers and the shared solution type.

mod brute;
mod dp;
mod dw;

pub use brute::{brute_force_opt, BRUTE_FORCE_CAP};
pub use dp::{preprocess_terminals, solve_dp, td_dp, td_dp_tables, DpEntry, DpTables, WrappedProblem, DEFAULT_DP_WIDTH_CAP};
pub use dw::{dreyfus_wagner_nw, DreyfusWagner, DW_TERMINAL_CAP};

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NodeWeightedGraph;
use crate::instance::MapWeightedInstance;

/// A node-weighted Steiner tree problem on a plain graph.
#[derive(Clone, Debug)]
pub struct SteinerProblem {
    pub graph: NodeWeightedGraph,
    /// Sorted, deduplicated.
    pub terminals: Vec<usize>,
}

impl SteinerProblem {
    pub fn new(graph: NodeWeightedGraph, terminals: &[usize]) -> Result<Self> {
        let mut t = terminals.to_vec();
        t.sort_unstable();
        t.dedup();
        if t.is_empty() {
            return Err(Error::NoTerminals);
        }
        if let Some(&bad) = t.iter().find(|&&x| x >= graph.num_vertices()) {
            return Err(Error::OutOfRange { index: bad, len: graph.num_vertices() });
        }
        Ok(SteinerProblem { graph, terminals: t })
    }

    pub fn from_instance(inst: &MapWeightedInstance) -> Result<Self> {
        SteinerProblem::new(inst.graph(), &inst.terminals)
    }

    /// Whether all terminals lie in one component.
    pub fn is_feasible(&self) -> bool {
        let (comp, _) = self.graph.components();
        self.terminals.iter().all(|&t| comp[t] == comp[self.terminals[0]])
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminals.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SteinerSolution {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// Tree edges `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
    pub cost: f64,
    pub solver: String,
}

impl SteinerSolution {
    /// BFS spanning tree of the subgraph induced by `vertices`.
    pub fn from_vertex_set(g: &NodeWeightedGraph, vertices: &[usize], solver: &str) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut inside = vec![false; g.num_vertices()];
        for &v in &vs {
            if v >= g.num_vertices() {
                return Err(Error::OutOfRange { index: v, len: g.num_vertices() });
            }
            inside[v] = true;
        }
        let mut edges = Vec::new();
        if let Some(&start) = vs.first() {
            let mut seen = vec![false; g.num_vertices()];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in g.neighbors(u) {
                    if inside[v] && !seen[v] {
                        seen[v] = true;
                        edges.push((u.min(v), u.max(v)));
                        queue.push_back(v);
                    }
                }
            }
            if edges.len() + 1 != vs.len() {
                return Err(Error::NotASubtree("vertex set is not connected".into()));
            }
        }
        edges.sort_unstable();
        let cost = vs.iter().map(|&v| g.weight(v)).sum();
        Ok(SteinerSolution { vertices: vs, edges, cost, solver: solver.to_string() })
    }

    /// Checks tree shape, terminal coverage and the recorded cost.
    pub fn validate(&self, p: &SteinerProblem) -> Result<()> {
        let g = &p.graph;
        let n = g.num_vertices();
        let bad = |m: String| Err(Error::NotASubtree(m));
        let mut inside = vec![false; n];
        for &v in &self.vertices {
            if v >= n {
                return bad(format!("vertex {v} out of range"));
            }
            if inside[v] {
                return bad(format!("vertex {v} listed twice"));
            }
            inside[v] = true;
        }
        if let Some(&t) = p.terminals.iter().find(|&&t| !inside[t]) {
            return bad(format!("terminal {t} missing"));
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return bad(format!("{} edges on {} vertices", self.edges.len(), self.vertices.len()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            if u >= n || v >= n || !inside[u] || !inside[v] || !g.has_edge(u, v) {
                return bad(format!("edge {u}-{v} is not an edge among solution vertices"));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![self.vertices[0]];
        seen[self.vertices[0]] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        if count != self.vertices.len() {
            return bad("edges do not connect the vertices".into());
        }
        let cost: f64 = self.vertices.iter().map(|&v| g.weight(v)).sum();
        if (cost - self.cost).abs() > 1e-9 * cost.abs().max(1.0) {
            return bad(format!("recorded cost {} but vertices weigh {}", self.cost, cost));
        }
        Ok(())
    }
}

/// Tree on `vertices` with non-terminal leaves removed until none remain.
pub fn prune_to_tree(p: &SteinerProblem, vertices: &[usize], solver: &str) -> Result<SteinerSolution> {
    let mut sol = SteinerSolution::from_vertex_set(&p.graph, vertices, solver)?;
    loop {
        let mut deg = vec![0usize; p.graph.num_vertices()];
        for &(u, v) in &sol.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let keep: Vec<usize> = sol
            .vertices
            .iter()
            .copied()
            .filter(|&v| p.is_terminal(v) || deg[v] >= 2)
            .collect();
        if keep.len() == sol.vertices.len() {
            return Ok(sol);
        }
        let kept: std::collections::HashSet<usize> = keep.iter().copied().collect();
        sol.edges.retain(|(u, v)| kept.contains(u) && kept.contains(v));
        sol.vertices = keep;
        sol.cost = sol.vertices.iter().map(|&v| p.graph.weight(v)).sum();
    }
}
