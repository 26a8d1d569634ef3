use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{MapWeightedInstance, Side};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: &'static str,
    pub detail: String,
}

fn push(out: &mut Vec<Violation>, kind: &'static str, detail: String) {
    out.push(Violation { kind, detail });
}

pub(super) fn validate(inst: &MapWeightedInstance, path_samples: usize, seed: u64) -> Vec<Violation> {
    let mut out = Vec::new();
    let w = &inst.witness;
    let n = w.num_vertices();
    if let Err(e) = w.check_invariants() {
        push(&mut out, "planarity", e.to_string());
    }
    if inst.sides.len() != n {
        push(&mut out, "sides", format!("{} labels for {} vertices", inst.sides.len(), n));
        return out;
    }
    for v in 0..n {
        if w.weight(v) != inst.sides[v].weight() {
            push(&mut out, "weights", format!("vertex {} has weight {} on side {:?}", w.id(v), w.weight(v), inst.sides[v]));
        }
    }
    for e in 0..w.num_edges() {
        let (a, b) = w.edge_endpoints(e);
        if inst.sides[a] == inst.sides[b] {
            push(&mut out, "bipartite", format!("edge {}-{} stays on side {:?}", w.id(a), w.id(b), inst.sides[a]));
        }
    }
    if inst.terminals.is_empty() {
        push(&mut out, "terminals", "no terminals".into());
    }
    for &t in &inst.terminals {
        if t >= n {
            push(&mut out, "terminals", format!("terminal index {t} out of range"));
        } else if inst.sides[t] == Side::U {
            push(&mut out, "terminals", format!("terminal {} on the weight-0 side", w.id(t)));
        }
    }
    if n > 0 {
        sample_paths(inst, path_samples, seed, &mut out);
    }
    out
}

/// Random simple paths: weights must alternate and `c(P) ≥ d0 − 1`, where
/// `d0` counts the weight-0 vertices of `P`.
fn sample_paths(inst: &MapWeightedInstance, samples: usize, seed: u64, out: &mut Vec<Violation>) {
    let g = inst.graph();
    let n = g.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut on_path = vec![false; n];
    for _ in 0..samples {
        let mut path = vec![rng.gen_range(0..n)];
        on_path[path[0]] = true;
        loop {
            let last = *path.last().unwrap();
            let free: Vec<usize> = g.neighbors(last).iter().copied().filter(|&v| !on_path[v]).collect();
            if free.is_empty() || rng.gen_bool(0.1) {
                break;
            }
            let v = free[rng.gen_range(0..free.len())];
            on_path[v] = true;
            path.push(v);
        }
        for &v in &path {
            on_path[v] = false;
        }
        if let Some(i) = path.windows(2).position(|p| g.weight(p[0]) + g.weight(p[1]) != 1.0) {
            push(out, "alternation", format!("path step {}-{} does not alternate", path[i], path[i + 1]));
        }
        let c: f64 = path.iter().map(|&v| g.weight(v)).sum();
        let d0 = path.iter().filter(|&&v| g.weight(v) == 0.0).count() as f64;
        if c < d0 - 1.0 {
            push(out, "observation", format!("path of cost {c} has {d0} weight-0 vertices"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_grid_map, GridMapParams};
    use crate::planar::PlanarEmbedding;

    #[test]
    fn generated_instance_is_clean() {
        let inst = gen_grid_map(&GridMapParams { rows: 4, cols: 3, seed: 2, merge_prob: 0.3, terminals: 3 }).unwrap();
        assert_eq!(inst.validate(200, 0), vec![]);
    }

    #[test]
    fn fractional_weight_is_reported() {
        let mut inst = gen_grid_map(&GridMapParams::default()).unwrap();
        let mut w = inst.witness.weights().to_vec();
        w[0] = 0.5;
        inst.witness = inst.witness.clone().with_weights(w);
        let kinds: Vec<&str> = inst.validate(0, 0).iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&"weights"));
    }

    #[test]
    fn odd_cycle_is_reported() {
        let tri = PlanarEmbedding::from_rotations(
            (0..3).collect(),
            vec![1.0, 0.0, 1.0],
            &[vec![1, 2], vec![2, 0], vec![0, 1]],
        )
        .unwrap();
        let inst = MapWeightedInstance { witness: tri, sides: vec![Side::V, Side::U, Side::V], terminals: vec![0] };
        let kinds: Vec<&str> = inst.validate(50, 1).iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&"bipartite"));
    }
}
