use super::{SteinerProblem, SteinerSolution};
use crate::error::{Error, Result};

pub const BRUTE_FORCE_CAP: usize = 18;

/// Exhaustive search over all connected vertex supersets of the terminals.
/// Ties go to the lexicographically smallest sorted vertex list.
pub fn brute_force_opt(p: &SteinerProblem, cap: usize) -> Result<SteinerSolution> {
    let g = &p.graph;
    let n = g.num_vertices();
    if n > cap {
        return Err(Error::CapExceeded { what: "brute-force vertex count", size: n, cap });
    }
    let free: Vec<usize> = (0..n).filter(|&v| !p.is_terminal(v)).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut set = vec![false; n];
    for mask in 0u64..(1u64 << free.len()) {
        set.iter_mut().for_each(|b| *b = false);
        for &t in &p.terminals {
            set[t] = true;
        }
        for (i, &v) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                set[v] = true;
            }
        }
        let cost: f64 = (0..n).filter(|&v| set[v]).map(|v| g.weight(v)).sum();
        if let Some((bc, _)) = &best {
            if cost > *bc {
                continue;
            }
        }
        if !g.is_connected_subset(&set) {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|&v| set[v]).collect();
        let better = match &best {
            None => true,
            Some((bc, bv)) => cost < *bc || (cost == *bc && vs < *bv),
        };
        if better {
            best = Some((cost, vs));
        }
    }
    let (_, vs) = best.ok_or(Error::Infeasible)?;
    SteinerSolution::from_vertex_set(g, &vs, "bruteforce")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeWeightedGraph;

    #[test]
    fn single_terminal_among_isolated_vertices() {
        let p = SteinerProblem::new(NodeWeightedGraph::new(vec![1.0; 4], []), &[2]).unwrap();
        let s = brute_force_opt(&p, BRUTE_FORCE_CAP).unwrap();
        assert_eq!((s.cost, s.vertices.clone()), (1.0, vec![2]));
    }

    #[test]
    fn star_with_three_terminal_leaves() {
        let g = NodeWeightedGraph::new(vec![0.0, 1.0, 1.0, 1.0], [(0, 1), (0, 2), (0, 3)]);
        let p = SteinerProblem::new(g, &[1, 2, 3]).unwrap();
        let s = brute_force_opt(&p, BRUTE_FORCE_CAP).unwrap();
        assert_eq!(s.cost, 3.0);
        assert_eq!(s.vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn disconnected_terminals_are_infeasible() {
        let g = NodeWeightedGraph::new(vec![1.0; 4], [(0, 1), (2, 3)]);
        let p = SteinerProblem::new(g, &[0, 3]).unwrap();
        assert!(matches!(brute_force_opt(&p, BRUTE_FORCE_CAP), Err(Error::Infeasible)));
    }

    #[test]
    fn tie_prefers_smallest_vertex_list() {
        // two equal routes 0-1-3 and 0-2-3
        let g = NodeWeightedGraph::new(vec![1.0; 4], [(0, 1), (1, 3), (0, 2), (2, 3)]);
        let p = SteinerProblem::new(g, &[0, 3]).unwrap();
        assert_eq!(brute_force_opt(&p, BRUTE_FORCE_CAP).unwrap().vertices, vec![0, 1, 3]);
    }

    #[test]
    fn cap_is_enforced() {
        let p = SteinerProblem::new(NodeWeightedGraph::new(vec![1.0; 5], []), &[0]).unwrap();
        assert!(matches!(brute_force_opt(&p, 4), Err(Error::CapExceeded { .. })));
    }
}
