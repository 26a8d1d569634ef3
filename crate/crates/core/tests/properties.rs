use proptest::prelude::*;

use mapsteiner::exact::SteinerProblem;
use mapsteiner::instance::{gen_grid_map, GridMapParams, MapWeightedInstance};
use mapsteiner::io::{instance_from_json, instance_to_json};
use mapsteiner::planar::dual;
use mapsteiner::planar::treedec::{to_nice, tree_decomposition};
use mapsteiner::planar::{contract_and_zero, contract_edges};
use mapsteiner::ptas::{ptas, PtasConfig};
use mapsteiner::spanner::cut_open;
use mapsteiner::starter::primal_dual_starter;
use mapsteiner::thinning::{decompose, RootChoice};

fn instance() -> impl Strategy<Value = MapWeightedInstance> {
    (1usize..4, 2usize..4, any::<u64>(), 0.0f64..0.6, 2usize..5).prop_map(|(rows, cols, seed, merge_prob, terminals)| {
        gen_grid_map(&GridMapParams { rows, cols, seed, merge_prob, terminals }).expect("generator succeeds")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_are_valid(inst in instance()) {
        prop_assert!(inst.witness.check_invariants().is_ok());
        prop_assert!(inst.validate(50, 1).is_empty());
        let w = &inst.witness;
        prop_assert_eq!(w.num_vertices() + w.num_faces(), w.num_edges() + 2);
    }

    #[test]
    fn dual_of_dual_has_primal_counts(inst in instance()) {
        let w = &inst.witness;
        let d = dual(w).unwrap();
        prop_assert_eq!(d.num_vertices(), w.num_faces());
        prop_assert_eq!(d.embedding.num_faces(), w.num_vertices());
        let dd = dual(&d.embedding).unwrap();
        prop_assert_eq!(dd.num_vertices(), w.num_vertices());
        prop_assert_eq!(dd.num_edges(), w.num_edges());
        prop_assert_eq!(dd.embedding.num_faces(), w.num_faces());
    }

    #[test]
    fn contracting_nothing_is_the_identity(inst in instance()) {
        let w = &inst.witness;
        let c = contract_edges(w, &[]).unwrap();
        prop_assert_eq!(c.embedding.num_vertices(), w.num_vertices());
        prop_assert_eq!(c.embedding.num_edges(), w.num_edges());
        prop_assert_eq!(c.vertex_map, (0..w.num_vertices()).collect::<Vec<_>>());
        prop_assert_eq!(c.embedding.rotation_lists(), w.rotation_lists());
    }

    #[test]
    fn contraction_keeps_embedding_valid(inst in instance(), mask in any::<u64>()) {
        let w = &inst.witness;
        let set: Vec<usize> = (0..w.num_edges()).filter(|&e| mask >> (e % 64) & 1 == 1).collect();
        let c = contract_and_zero(w, &set).unwrap();
        prop_assert!(c.embedding.check_invariants().is_ok());
        prop_assert!(c.embedding.is_connected());
        let members: usize = c.classes.iter().map(Vec::len).sum();
        prop_assert_eq!(members, w.num_vertices());
        for (old, &new) in c.vertex_map.iter().enumerate() {
            prop_assert!(c.classes[new].contains(&old));
            if c.classes[new].len() > 1 {
                prop_assert_eq!(c.embedding.weight(new), 0.0);
            }
        }
    }

    #[test]
    fn cut_open_copies_match_tree_degrees(inst in instance()) {
        let p = SteinerProblem::from_instance(&inst).unwrap();
        let (st, _) = primal_dual_starter(&p).unwrap();
        let cog = cut_open(&inst.witness, &st).unwrap();
        prop_assert!(cog.embedding.check_invariants().is_ok());
        let mut deg = vec![0usize; inst.num_vertices()];
        for &(u, v) in &st.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        for v in 0..inst.num_vertices() {
            prop_assert_eq!(cog.copies[v], deg[v].max(1));
        }
        prop_assert_eq!(cog.embedding.num_vertices(), cog.copies.iter().sum::<usize>());
        prop_assert_eq!(cog.embedding.num_edges(), inst.witness.num_edges() + st.edges.len());
        if !st.edges.is_empty() {
            prop_assert_eq!(cog.boundary.len(), 2 * st.edges.len());
        }
    }

    #[test]
    fn thinning_touches_each_vertex_at_most_twice(inst in instance(), k in 1usize..6) {
        let d = decompose(&inst.witness, k, RootChoice::OuterFace).unwrap();
        prop_assert!(d.max_sets_per_vertex(&inst.witness) <= 2);
        prop_assert!(d.max_sets_per_edge(inst.witness.num_edges()) <= 1);
    }

    #[test]
    fn nice_decompositions_are_valid(inst in instance()) {
        let g = inst.graph();
        let td = tree_decomposition(&g);
        prop_assert!(td.validate(&g).is_ok());
        let nice = to_nice(&td, 0).unwrap();
        prop_assert!(nice.validate(&g).is_ok());
        prop_assert_eq!(nice.width(), td.width());
    }

    #[test]
    fn ptas_is_valid_and_never_worse_than_starter(inst in instance()) {
        let p = SteinerProblem::from_instance(&inst).unwrap();
        let (sol, rep) = ptas(&inst, &PtasConfig::default()).unwrap();
        prop_assert!(sol.validate(&p).is_ok());
        prop_assert!(sol.cost <= rep.costs.starter);
    }

    #[test]
    fn instance_json_round_trips(inst in instance()) {
        let text = serde_json::to_string(&instance_to_json(&inst)).unwrap();
        let back = instance_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.terminals, inst.terminals.clone());
        prop_assert_eq!(back.sides, inst.sides.clone());
        prop_assert_eq!(back.witness.weights(), inst.witness.weights());
        prop_assert_eq!(back.witness.num_faces(), inst.witness.num_faces());
    }
}
