use mapsteiner::exact::{
    brute_force_opt, dreyfus_wagner_nw, solve_dp, SteinerProblem, BRUTE_FORCE_CAP, DEFAULT_DP_WIDTH_CAP,
    DW_TERMINAL_CAP,
};
use mapsteiner::instance::{gen_grid_map, GridMapParams};

fn small(seed: u64) -> GridMapParams {
    let rows = 1 + (seed % 3) as usize;
    let cols = 1 + (seed / 3 % 3) as usize;
    GridMapParams { rows, cols, seed, merge_prob: 0.3, terminals: 2 + (seed % 3) as usize }
}

#[test]
fn three_exact_solvers_agree() {
    let mut checked = 0;
    for seed in 0..80 {
        let inst = gen_grid_map(&small(seed)).unwrap();
        if inst.num_vertices() > 16 {
            continue;
        }
        let p = SteinerProblem::from_instance(&inst).unwrap();
        let bf = brute_force_opt(&p, BRUTE_FORCE_CAP).unwrap();
        let dw = dreyfus_wagner_nw(&p, DW_TERMINAL_CAP).unwrap();
        let (dp, _) = solve_dp(&p, DEFAULT_DP_WIDTH_CAP).unwrap();
        for s in [&bf, &dw, &dp] {
            s.validate(&p).unwrap();
        }
        assert_eq!(bf.cost, dw.cost, "seed {seed}");
        assert_eq!(bf.cost, dp.cost, "seed {seed}");
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} instances fit the oracle");
}
