//! Constant-factor starting trees.
//!
//! The default is moat growing adapted to node weights: every active
//! component raises its dual at rate 1, and a vertex becomes tight once the
//! duals of the active components next to it add up to its weight.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{dreyfus_wagner_nw, SteinerProblem, SteinerSolution, DW_TERMINAL_CAP};
use crate::graph::NodeWeightedGraph;

/// Anything that produces a feasible Steiner tree.
pub trait Starter {
    fn name(&self) -> &'static str;
    fn solve(&self, p: &SteinerProblem) -> Result<SteinerSolution>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PrimalDual;

#[derive(Clone, Copy, Debug)]
pub struct ExactStarter {
    pub terminal_cap: usize,
}

impl Default for ExactStarter {
    fn default() -> Self {
        ExactStarter { terminal_cap: DW_TERMINAL_CAP }
    }
}

/// Spanning tree of the terminals' whole component. Feasible, not good.
#[derive(Clone, Copy, Debug, Default)]
pub struct AllVertices;

impl Starter for PrimalDual {
    fn name(&self) -> &'static str {
        "primal-dual"
    }

    fn solve(&self, p: &SteinerProblem) -> Result<SteinerSolution> {
        primal_dual_starter(p).map(|(s, _)| s)
    }
}

impl Starter for ExactStarter {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn solve(&self, p: &SteinerProblem) -> Result<SteinerSolution> {
        dreyfus_wagner_nw(p, self.terminal_cap)
    }
}

impl Starter for AllVertices {
    fn name(&self) -> &'static str {
        "all-vertices"
    }

    fn solve(&self, p: &SteinerProblem) -> Result<SteinerSolution> {
        if !p.is_feasible() {
            return Err(Error::Infeasible);
        }
        let (comp, _) = p.graph.components();
        let c = comp[p.terminals[0]];
        let vs: Vec<usize> = (0..p.graph.num_vertices()).filter(|&v| comp[v] == c).collect();
        SteinerSolution::from_vertex_set(&p.graph, &vs, "all-vertices")
    }
}

/// Dual certificate of a moat-growing run.
#[derive(Clone, Debug, Serialize)]
pub struct DualCertificate {
    /// Total dual raised; `w(R) + dual_total` is a lower bound on OPT.
    pub dual_total: f64,
    pub lower_bound: f64,
    /// Order in which non-terminal vertices went tight.
    pub purchase_order: Vec<usize>,
    /// Largest `load(v) − w(v)` over vertices, where `load(v)` sums the
    /// duals of components that had `v` on their boundary.
    pub max_overload: f64,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

/// Moat growing followed by reverse delete.
pub fn primal_dual_starter(p: &SteinerProblem) -> Result<(SteinerSolution, DualCertificate)> {
    if !p.is_feasible() {
        return Err(Error::Infeasible);
    }
    let g = &p.graph;
    let n = g.num_vertices();
    let mut dsu = Dsu((0..n).collect());
    let mut bought = vec![false; n];
    let mut has_terminal = vec![false; n];
    for &t in &p.terminals {
        bought[t] = true;
        has_terminal[t] = true;
    }
    for &t in &p.terminals {
        for &u in g.neighbors(t) {
            if bought[u] {
                let (a, b) = (dsu.find(t), dsu.find(u));
                if a != b {
                    dsu.0[b] = a;
                }
            }
        }
    }
    // residual weight still to be paid by adjacent active moats
    let mut residual: Vec<f64> = g.weights().to_vec();
    let mut load = vec![0.0f64; n];
    let mut order = Vec::new();
    let mut dual_total = 0.0;
    let eps = 1e-12;

    let active_roots = |dsu: &mut Dsu, has_terminal: &[bool]| -> Vec<usize> {
        let mut roots: Vec<usize> = p.terminals.iter().map(|&t| dsu.find(t)).collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() <= 1 {
            return Vec::new();
        }
        roots.into_iter().filter(|&r| has_terminal[r]).collect()
    };

    loop {
        let roots = active_roots(&mut dsu, &has_terminal);
        if roots.is_empty() {
            break;
        }
        // rate(v) = number of distinct active components adjacent to v
        let mut is_active = vec![false; n];
        for &r in &roots {
            is_active[r] = true;
        }
        let mut rate = vec![0usize; n];
        for v in 0..n {
            if bought[v] {
                continue;
            }
            let mut seen: Vec<usize> = g
                .neighbors(v)
                .iter()
                .filter(|&&u| bought[u])
                .map(|&u| dsu.find(u))
                .filter(|&r| is_active[r])
                .collect();
            seen.sort_unstable();
            seen.dedup();
            rate[v] = seen.len();
        }
        let mut best: Option<(f64, usize)> = None;
        for v in 0..n {
            if rate[v] > 0 {
                let t = residual[v].max(0.0) / rate[v] as f64;
                if best.map_or(true, |(bt, _)| t < bt - eps) {
                    best = Some((t, v));
                }
            }
        }
        let (delta, v) = best.ok_or(Error::Infeasible)?;
        dual_total += delta * roots.len() as f64;
        for u in 0..n {
            if rate[u] > 0 {
                residual[u] -= delta * rate[u] as f64;
                load[u] += delta * rate[u] as f64;
            }
        }
        residual[v] = 0.0;
        bought[v] = true;
        order.push(v);
        let adj: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| bought[u]).collect();
        for u in adj {
            let (a, b) = (dsu.find(u), dsu.find(v));
            if a != b {
                let t = has_terminal[a] || has_terminal[b];
                dsu.0[b] = a;
                has_terminal[a] = t;
            }
        }
    }

    // reverse delete in reverse purchase order
    let mut keep = bought.clone();
    for &v in order.iter().rev() {
        keep[v] = false;
        if !terminals_connected(g, &keep, &p.terminals) {
            keep[v] = true;
        }
    }
    let comp = component_of(g, &keep, p.terminals[0]);
    let vs: Vec<usize> = (0..n).filter(|&v| comp[v]).collect();
    let sol = SteinerSolution::from_vertex_set(g, &vs, "primal-dual")?;
    let w_r: f64 = p.terminals.iter().map(|&t| g.weight(t)).sum();
    let max_overload = (0..n)
        .filter(|&v| !p.is_terminal(v))
        .map(|v| load[v] - g.weight(v))
        .fold(f64::NEG_INFINITY, f64::max);
    let cert = DualCertificate { dual_total, lower_bound: w_r + dual_total, purchase_order: order, max_overload };
    Ok((sol, cert))
}

fn component_of(g: &NodeWeightedGraph, keep: &[bool], start: usize) -> Vec<bool> {
    let mut seen = vec![false; g.num_vertices()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if keep[v] && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

fn terminals_connected(g: &NodeWeightedGraph, keep: &[bool], terminals: &[usize]) -> bool {
    let comp = component_of(g, keep, terminals[0]);
    terminals.iter().all(|&t| comp[t])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_terminal() {
        let g = NodeWeightedGraph::new(vec![1.0, 0.0], [(0, 1)]);
        let p = SteinerProblem::new(g, &[0]).unwrap();
        let (s, c) = primal_dual_starter(&p).unwrap();
        assert_eq!((s.cost, s.vertices), (1.0, vec![0]));
        assert_eq!(c.dual_total, 0.0);
    }

    #[test]
    fn star_is_solved_optimally() {
        let g = NodeWeightedGraph::new(vec![0.0, 1.0, 1.0, 1.0], [(0, 1), (0, 2), (0, 3)]);
        let p = SteinerProblem::new(g, &[1, 2, 3]).unwrap();
        let (s, c) = primal_dual_starter(&p).unwrap();
        assert_eq!(s.cost, 3.0);
        assert!(c.lower_bound <= s.cost);
    }

    #[test]
    fn reverse_delete_drops_useless_purchases() {
        // two routes between 0 and 4; 1 and 3 are equally cheap but only one
        // route is needed
        let g = NodeWeightedGraph::new(vec![1.0, 1.0, 5.0, 1.0, 1.0], [(0, 1), (1, 4), (0, 3), (3, 4), (0, 2), (2, 4)]);
        let p = SteinerProblem::new(g, &[0, 4]).unwrap();
        let (s, c) = primal_dual_starter(&p).unwrap();
        assert_eq!(s.cost, 3.0);
        assert!(c.max_overload <= 1e-9);
        s.validate(&p).unwrap();
    }

    #[test]
    fn infeasible_input() {
        let g = NodeWeightedGraph::new(vec![1.0; 2], []);
        let p = SteinerProblem::new(g, &[0, 1]).unwrap();
        assert!(matches!(primal_dual_starter(&p), Err(Error::Infeasible)));
    }

    #[test]
    fn pluggable_starters_are_feasible() {
        let g = NodeWeightedGraph::new(vec![1.0, 0.0, 1.0, 0.0, 1.0], (0..4).map(|i| (i, i + 1)));
        let p = SteinerProblem::new(g, &[0, 2]).unwrap();
        let starters: [&dyn Starter; 3] = [&PrimalDual, &ExactStarter::default(), &AllVertices];
        for s in starters {
            let sol = s.solve(&p).unwrap();
            sol.validate(&p).unwrap();
        }
        assert_eq!(AllVertices.solve(&p).unwrap().cost, 3.0);
        assert_eq!(ExactStarter::default().solve(&p).unwrap().cost, 2.0);
    }
}
