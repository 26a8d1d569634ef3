//! Tree decompositions: min-fill heuristic, validation, exact width for
//! small graphs, and conversion to nice form.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::NodeWeightedGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted vertex lists.
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks tree shape, vertex coverage, edge coverage and the
    /// connected-subtree property.
    pub fn validate(&self, g: &NodeWeightedGraph) -> Result<()> {
        let nb = self.bags.len();
        let bad = |m: String| Err(Error::InvalidDecomposition(m));
        if nb == 0 {
            return bad("no bags".into());
        }
        if self.edges.len() != nb - 1 {
            return bad(format!("{} bags but {} tree edges", nb, self.edges.len()));
        }
        if self.edges.iter().any(|&(a, b)| a >= nb || b >= nb) {
            return bad("tree edge out of range".into());
        }
        let adj = self.adjacency();
        let (_, comps) = crate::graph::components_of(nb, |b| adj[b].iter().copied());
        if comps != 1 {
            return bad("bag graph is not a tree".into());
        }
        let n = g.num_vertices();
        let mut holders = vec![Vec::new(); n];
        for (b, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return bad(format!("bag {b} holds unknown vertex {v}"));
                }
                holders[v].push(b);
            }
        }
        if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
            return bad(format!("vertex {v} is in no bag"));
        }
        for (u, v) in g.edges() {
            let ok = holders[u].iter().any(|&b| self.bags[b].binary_search(&v).is_ok());
            if !ok {
                return bad(format!("edge {u}-{v} is in no bag"));
            }
        }
        for v in 0..n {
            let mut inside = vec![false; nb];
            for &b in &holders[v] {
                inside[b] = true;
            }
            let mut seen = vec![false; nb];
            let mut stack = vec![holders[v][0]];
            seen[holders[v][0]] = true;
            let mut count = 1;
            while let Some(b) = stack.pop() {
                for &c in &adj[b] {
                    if inside[c] && !seen[c] {
                        seen[c] = true;
                        count += 1;
                        stack.push(c);
                    }
                }
            }
            if count != holders[v].len() {
                return bad(format!("bags holding vertex {v} are not connected"));
            }
        }
        Ok(())
    }
}

/// Min-fill elimination ordering; ties go to the lowest vertex.
pub fn min_fill_order(g: &NodeWeightedGraph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let fill = |adj: &[BTreeSet<usize>], v: usize| {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                if !adj[nb[i]].contains(&nb[j]) {
                    missing += 1;
                }
            }
        }
        missing
    };
    for _ in 0..n {
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (fill(&adj, v), v)).unwrap();
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Decomposition induced by an elimination ordering.
pub fn decomposition_from_order(g: &NodeWeightedGraph, order: &[usize]) -> TreeDecomposition {
    let n = g.num_vertices();
    if n == 0 {
        return TreeDecomposition { bags: vec![Vec::new()], edges: Vec::new() };
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut later: Vec<Vec<usize>> = Vec::with_capacity(n);
    for &v in order {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        later.push(nb);
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for i in 0..n {
        match later[i].iter().map(|&u| pos[u]).min() {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition { bags, edges }
}

/// Min-fill heuristic decomposition of a simple graph.
pub fn tree_decomposition(g: &NodeWeightedGraph) -> TreeDecomposition {
    decomposition_from_order(g, &min_fill_order(g))
}

pub const EXACT_TREEWIDTH_CAP: usize = 16;

/// Exact treewidth by dynamic programming over vertex subsets.
pub fn exact_treewidth(g: &NodeWeightedGraph) -> Result<usize> {
    let n = g.num_vertices();
    if n > EXACT_TREEWIDTH_CAP {
        return Err(Error::CapExceeded { what: "exact treewidth input", size: n, cap: EXACT_TREEWIDTH_CAP });
    }
    if n == 0 {
        return Ok(0);
    }
    let nbr: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u)).collect();
    // vertices outside S ∪ {v} reachable from v through S
    let q = |s: u32, v: usize| -> u32 {
        let mut reached = 1u32 << v;
        let mut frontier = reached;
        let mut outside = 0u32;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = nbr[x] & !reached;
            reached |= fresh;
            outside |= fresh & !s;
            frontier |= fresh & s;
        }
        outside.count_ones()
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![u8::MAX; 1 << n];
    // tw[S] stores the value plus one so that the empty set means minus infinity
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let val = tw[without as usize].max(q(without, v) as u8 + 1);
            best = best.min(val);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

/// Rooted nice decomposition. Nodes are numbered children-first, so
/// iterating `0..len` is a valid bottom-up order.
#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    pub kinds: Vec<NiceKind>,
    pub bags: Vec<Vec<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Empty-bag root: `Forget(root_vertex)` above `answer`.
    pub root: usize,
    /// Node whose bag is exactly `{root_vertex}`; solutions are read here.
    pub answer: usize,
    pub root_vertex: usize,
}

impl NiceTreeDecomposition {
    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (p, cs) in self.children.iter().enumerate() {
            for &c in cs {
                edges.push((c, p));
            }
        }
        TreeDecomposition { bags: self.bags.clone(), edges }
    }

    /// Checks the node-type constraints, the root convention, and the
    /// underlying decomposition.
    pub fn validate(&self, g: &NodeWeightedGraph) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDecomposition(m));
        for i in 0..self.len() {
            let bag = &self.bags[i];
            let ch = &self.children[i];
            if ch.iter().any(|&c| c >= i) {
                return bad(format!("node {i} has a child numbered after it"));
            }
            let ok = match self.kinds[i] {
                NiceKind::Leaf => ch.is_empty() && bag.is_empty(),
                NiceKind::Introduce(v) => {
                    ch.len() == 1 && {
                        let cb = &self.bags[ch[0]];
                        cb.binary_search(&v).is_err()
                            && bag.len() == cb.len() + 1
                            && bag.iter().all(|x| *x == v || cb.binary_search(x).is_ok())
                    }
                }
                NiceKind::Forget(v) => {
                    ch.len() == 1 && {
                        let cb = &self.bags[ch[0]];
                        bag.binary_search(&v).is_err()
                            && cb.len() == bag.len() + 1
                            && cb.iter().all(|x| *x == v || bag.binary_search(x).is_ok())
                    }
                }
                NiceKind::Join => ch.len() == 2 && self.bags[ch[0]] == *bag && self.bags[ch[1]] == *bag,
            };
            if !ok {
                return bad(format!("node {i} violates its {:?} constraint", self.kinds[i]));
            }
        }
        if !self.bags[self.root].is_empty() || self.root != self.len() - 1 {
            return bad("root must be the last node and have an empty bag".into());
        }
        if self.bags[self.answer] != [self.root_vertex]
            || self.children[self.root] != [self.answer]
            || self.kinds[self.root] != NiceKind::Forget(self.root_vertex)
        {
            return bad("answer node must be {root vertex} directly below the root".into());
        }
        self.as_tree_decomposition().validate(g)
    }
}

struct Builder {
    kinds: Vec<NiceKind>,
    bags: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Builder {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.kinds.push(kind);
        self.bags.push(bag);
        self.children.push(children);
        self.kinds.len() - 1
    }

    /// Turns node `node` with bag `from` into a chain ending at bag `to`:
    /// forget first, then introduce.
    fn morph(&mut self, mut node: usize, to: &[usize]) -> usize {
        let from = self.bags[node].clone();
        let mut cur = from.clone();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            cur.retain(|&x| x != v);
            node = self.push(NiceKind::Forget(v), cur.clone(), vec![node]);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let at = cur.binary_search(&v).unwrap_err();
            cur.insert(at, v);
            node = self.push(NiceKind::Introduce(v), cur.clone(), vec![node]);
        }
        node
    }

    fn leaf(&mut self) -> usize {
        self.push(NiceKind::Leaf, Vec::new(), Vec::new())
    }

    fn build(&mut self, td: &TreeDecomposition, adj: &[Vec<usize>], b: usize, parent: usize) -> usize {
        let bag = &td.bags[b];
        let mut subs = Vec::new();
        for &c in &adj[b] {
            if c != parent {
                let sub = self.build(td, adj, c, b);
                subs.push(self.morph(sub, bag));
            }
        }
        if subs.is_empty() {
            let l = self.leaf();
            return self.morph(l, bag);
        }
        let mut acc = subs[0];
        for &s in &subs[1..] {
            acc = self.push(NiceKind::Join, bag.clone(), vec![acc, s]);
        }
        acc
    }
}

/// Converts `td` into nice form rooted at the smallest bag containing
/// `root_vertex`. Above it, everything but `root_vertex` is forgotten
/// (the answer node), then `root_vertex` itself.
pub fn to_nice(td: &TreeDecomposition, root_vertex: usize) -> Result<NiceTreeDecomposition> {
    let start = (0..td.bags.len())
        .filter(|&b| td.bags[b].binary_search(&root_vertex).is_ok())
        .min_by_key(|&b| (td.bags[b].len(), b))
        .ok_or(Error::UnknownVertex(root_vertex as u64))?;
    let adj = td.adjacency();
    let mut bld = Builder { kinds: Vec::new(), bags: Vec::new(), children: Vec::new() };
    let top = bld.build(td, &adj, start, usize::MAX);
    let answer = bld.morph(top, &[root_vertex]);
    let root = bld.push(NiceKind::Forget(root_vertex), Vec::new(), vec![answer]);
    Ok(NiceTreeDecomposition {
        kinds: bld.kinds,
        bags: bld.bags,
        children: bld.children,
        root,
        answer,
        root_vertex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> NodeWeightedGraph {
        NodeWeightedGraph::new(vec![1.0; n], edges.iter().copied())
    }

    fn cycle(n: usize) -> NodeWeightedGraph {
        graph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn k(n: usize) -> NodeWeightedGraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        graph(n, &e)
    }

    #[test]
    fn widths_of_small_families() {
        let tree = graph(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        for (g, w) in [(tree, 1), (cycle(6), 2), (k(4), 3)] {
            let td = tree_decomposition(&g);
            td.validate(&g).unwrap();
            assert_eq!(td.width(), w);
            assert_eq!(exact_treewidth(&g).unwrap(), w);
        }
    }

    #[test]
    fn disconnected_graph_still_gives_a_tree() {
        let g = graph(4, &[(0, 1)]);
        let td = tree_decomposition(&g);
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn validator_catches_each_condition() {
        let g = cycle(4);
        let good = tree_decomposition(&g);
        good.validate(&g).unwrap();

        let mut missing_vertex = good.clone();
        for b in &mut missing_vertex.bags {
            b.retain(|&v| v != 3);
        }
        assert!(missing_vertex.validate(&g).is_err());

        let no_edge = TreeDecomposition { bags: vec![vec![0, 1, 2], vec![2, 3]], edges: vec![(0, 1)] };
        assert!(no_edge.validate(&g).is_err());

        let broken = TreeDecomposition {
            bags: vec![vec![0, 1, 3], vec![1, 2], vec![2, 3]],
            edges: vec![(0, 1), (1, 2)],
        };
        assert!(broken.validate(&g).is_err());
    }

    #[test]
    fn exact_width_of_grid() {
        let idx = |r: usize, c: usize| r * 3 + c;
        let mut e = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                if c < 2 {
                    e.push((idx(r, c), idx(r, c + 1)));
                }
                if r < 2 {
                    e.push((idx(r, c), idx(r + 1, c)));
                }
            }
        }
        let g = graph(9, &e);
        assert_eq!(exact_treewidth(&g).unwrap(), 3);
        assert!(tree_decomposition(&g).width() >= 3);
    }

    #[test]
    fn nice_single_bag() {
        let g = graph(2, &[(0, 1)]);
        let td = TreeDecomposition { bags: vec![vec![0, 1]], edges: vec![] };
        let nice = to_nice(&td, 0).unwrap();
        nice.validate(&g).unwrap();
        use NiceKind::*;
        assert_eq!(nice.kinds, vec![Leaf, Introduce(0), Introduce(1), Forget(1), Forget(0)]);
        assert_eq!(nice.bags[nice.answer], vec![0]);
    }

    #[test]
    fn nice_preserves_width() {
        let g = k(4);
        let mut e: Vec<(usize, usize)> = g.edges().collect();
        e.extend([(3, 4), (4, 5), (5, 6), (6, 3), (2, 7), (7, 8)]);
        let g = graph(9, &e);
        let td = tree_decomposition(&g);
        for r in 0..9 {
            let nice = to_nice(&td, r).unwrap();
            nice.validate(&g).unwrap();
            assert_eq!(nice.width(), td.width());
        }
    }

    #[test]
    fn nice_rejects_unknown_root() {
        let td = TreeDecomposition { bags: vec![vec![0]], edges: vec![] };
        assert!(to_nice(&td, 5).is_err());
    }
}
