//! End-to-end pipeline: starter, spanner, thinning, bounded-width DP.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dreyfus_wagner_nw, prune_to_tree, solve_dp, SteinerProblem, SteinerSolution, DEFAULT_DP_WIDTH_CAP, DW_TERMINAL_CAP};
use crate::instance::MapWeightedInstance;
use crate::planar::{contract_and_zero, PlanarEmbedding};
use crate::spanner::{build_spanner, PortalParams, SpannerReport, DEFAULT_C_P, DEFAULT_PORTAL_CAP};
use crate::starter::{AllVertices, ExactStarter, PrimalDual, Starter};
use crate::thinning::{decompose, RootChoice, DEFAULT_C_TW};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarterChoice {
    #[default]
    PrimalDual,
    Exact,
    AllVertices,
}

impl StarterChoice {
    pub fn build(self) -> Box<dyn Starter> {
        match self {
            StarterChoice::PrimalDual => Box::new(PrimalDual),
            StarterChoice::Exact => Box::new(ExactStarter::default()),
            StarterChoice::AllVertices => Box::new(AllVertices),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PtasConfig {
    pub epsilon: f64,
    pub theta: Option<usize>,
    pub portal_cap: usize,
    pub c_p: f64,
    pub k: Option<usize>,
    pub starter: StarterChoice,
    pub seed: u64,
    pub dp_width_cap: usize,
    /// Terminal budget for the optional exact comparison.
    pub oracle_terminal_cap: usize,
    /// Compute OPT with Dreyfus–Wagner for the report when it fits the cap.
    pub with_oracle: bool,
    pub c_tw: usize,
    pub root: RootChoice,
}

impl Default for PtasConfig {
    fn default() -> Self {
        PtasConfig {
            epsilon: 0.5,
            theta: None,
            portal_cap: DEFAULT_PORTAL_CAP,
            c_p: DEFAULT_C_P,
            k: None,
            starter: StarterChoice::PrimalDual,
            seed: 0,
            dp_width_cap: DEFAULT_DP_WIDTH_CAP,
            oracle_terminal_cap: DW_TERMINAL_CAP,
            with_oracle: false,
            c_tw: DEFAULT_C_TW,
            root: RootChoice::OuterFace,
        }
    }
}

impl PtasConfig {
    pub fn portal_params(&self) -> Result<PortalParams> {
        let p = PortalParams::with_cap(self.epsilon, self.portal_cap, self.c_p)?;
        match self.theta {
            Some(t) => p.with_theta(t),
            None => Ok(p),
        }
    }

    fn check(&self) -> Result<()> {
        if self.dp_width_cap == 0 || self.oracle_terminal_cap == 0 || self.c_tw == 0 || self.k == Some(0) {
            return Err(Error::InvalidParameter("caps, C_tw and k must be at least 1".into()));
        }
        self.portal_params().map(|_| ())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StageCosts {
    pub starter: f64,
    pub boundary: f64,
    pub mortar: f64,
    pub spanner: f64,
    pub chosen_set: f64,
    pub dp: Option<f64>,
    pub final_cost: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Invariant {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: PtasConfig,
    pub starter: &'static str,
    pub costs: StageCosts,
    pub k: usize,
    pub chosen_set: usize,
    pub contracted_vertices: usize,
    pub width: Option<usize>,
    /// Why the starter was returned instead of the DP tree, if it was.
    pub fallback: Option<String>,
    pub opt: Option<f64>,
    pub ratio_vs_opt: Option<f64>,
    pub ratio_vs_starter: f64,
    pub timings_ms: Vec<(&'static str, f64)>,
    pub invariants: Vec<Invariant>,
    pub spanner: Option<SpannerReport>,
}

struct Clock(Instant, Vec<(&'static str, f64)>);

impl Clock {
    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.1.push((stage, (now - self.0).as_secs_f64() * 1e3));
        self.0 = now;
    }
}

pub fn ptas(inst: &MapWeightedInstance, cfg: &PtasConfig) -> Result<(SteinerSolution, RunReport)> {
    ptas_on(&inst.witness, &inst.terminals, cfg)
}

/// The pipeline on any plane node-weighted graph.
pub fn ptas_on(witness: &PlanarEmbedding, terminals: &[usize], cfg: &PtasConfig) -> Result<(SteinerSolution, RunReport)> {
    cfg.check()?;
    let params = cfg.portal_params()?;
    let mut clock = Clock(Instant::now(), Vec::new());
    let problem = SteinerProblem::new(witness.to_graph(), terminals)?;
    if !problem.is_feasible() {
        return Err(Error::Infeasible.in_stage("starter"));
    }
    let starter = cfg.starter.build();
    let st = starter.solve(&problem).map_err(|e| e.in_stage("starter"))?;
    clock.lap("starter");
    let mut report = RunReport {
        config: cfg.clone(),
        starter: starter.name(),
        costs: StageCosts { starter: st.cost, ..Default::default() },
        k: 0,
        chosen_set: 0,
        contracted_vertices: 0,
        width: None,
        fallback: None,
        opt: None,
        ratio_vs_opt: None,
        ratio_vs_starter: 1.0,
        timings_ms: Vec::new(),
        invariants: Vec::new(),
        spanner: None,
    };

    let result = run_stages(witness, &problem, &st, cfg, &params, &mut report, &mut clock);
    let sol = match result {
        Ok(Some(sol)) if sol.cost < st.cost => sol,
        Ok(Some(_)) => {
            report.fallback = Some("pipeline tree not cheaper than the starter".into());
            st.clone()
        }
        Ok(None) => st.clone(),
        Err(Error::CapExceeded { what, size, cap }) => {
            report.fallback = Some(format!("{what} {size} exceeds cap {cap}"));
            st.clone()
        }
        Err(e) => return Err(e),
    };
    let sol = SteinerSolution { solver: "ptas".into(), ..sol };

    report.costs.final_cost = sol.cost;
    report.ratio_vs_starter = if st.cost > 0.0 { sol.cost / st.cost } else { 1.0 };
    if cfg.with_oracle && problem.terminals.len() <= cfg.oracle_terminal_cap {
        let opt = dreyfus_wagner_nw(&problem, cfg.oracle_terminal_cap).map_err(|e| e.in_stage("oracle"))?;
        report.opt = Some(opt.cost);
        report.ratio_vs_opt = Some(if opt.cost > 0.0 { sol.cost / opt.cost } else { 1.0 });
        clock.lap("oracle");
    }
    let recomputed: f64 = sol.vertices.iter().map(|&v| witness.weight(v)).sum();
    report.invariants.push(Invariant { name: "final tree valid", passed: sol.validate(&problem).is_ok() });
    report.invariants.push(Invariant { name: "final cost <= starter cost", passed: sol.cost <= st.cost });
    report.invariants.push(Invariant { name: "final cost recomputed", passed: recomputed == sol.cost });
    report.timings_ms = clock.1;
    Ok((sol, report))
}

/// Spanner, thinning and DP. `Ok(None)` means the starter is already final.
fn run_stages(
    witness: &PlanarEmbedding,
    problem: &SteinerProblem,
    st: &SteinerSolution,
    cfg: &PtasConfig,
    params: &PortalParams,
    report: &mut RunReport,
    clock: &mut Clock,
) -> Result<Option<SteinerSolution>> {
    if st.cost == 0.0 {
        report.fallback = Some("starter has cost 0".into());
        return Ok(None);
    }
    let spanner = build_spanner(witness, &problem.terminals, st, params).map_err(|e| e.in_stage("spanner"))?;
    clock.lap("spanner");
    let sr = &spanner.report;
    report.costs.boundary = sr.boundary_cost;
    report.costs.mortar = sr.mortar_cost;
    report.costs.spanner = sr.h_weight;
    report.invariants.push(Invariant { name: "terminals in spanner", passed: problem.terminals.iter().all(|t| spanner.vertices.binary_search(t).is_ok()) });
    report.invariants.push(Invariant { name: "strip count bound", passed: sr.strips as f64 <= sr.boundary_vertices as f64 / 2.0 + 1.0 });
    report.invariants.push(Invariant { name: "portal coverage", passed: sr.all_portals_covered() });
    let (h, hv, _) = spanner.subgraph(witness);
    report.spanner = Some(spanner.report.clone());

    let k = cfg.k.unwrap_or_else(|| ((2.0 * report.costs.spanner) / (cfg.epsilon * st.cost)).ceil().max(1.0) as usize);
    report.k = k;
    let layers = decompose(&h, k, cfg.root).map_err(|e| e.in_stage("thinning"))?;
    let (ci, set) = layers.choose_cheapest();
    report.chosen_set = ci;
    report.costs.chosen_set = layers.costs[ci];
    report.invariants.push(Invariant { name: "at most two sets per vertex", passed: layers.max_sets_per_vertex(&h) <= 2 });
    let contraction = contract_and_zero(&h, set).map_err(|e| e.in_stage("thinning"))?;
    report.contracted_vertices = contraction.embedding.num_vertices();
    clock.lap("thinning");

    let mut local = vec![usize::MAX; witness.num_vertices()];
    for (i, &v) in hv.iter().enumerate() {
        local[v] = i;
    }
    let terms: Vec<usize> = problem.terminals.iter().map(|&t| contraction.vertex_map[local[t]]).collect();
    let cp = SteinerProblem::new(contraction.embedding.to_graph(), &terms)?;
    let (sol, width) = solve_dp(&cp, cfg.dp_width_cap).map_err(|e| match e {
        e @ Error::CapExceeded { .. } => e,
        e => e.in_stage("dp"),
    })?;
    report.width = Some(width);
    report.costs.dp = Some(sol.cost);
    clock.lap("dp");

    // put the contracted edges back: each class is connected through E_c
    let h_vertices = contraction.expand(sol.vertices.iter().copied());
    let vs: Vec<usize> = h_vertices.into_iter().map(|v| hv[v]).collect();
    let out = prune_to_tree(problem, &vs, "ptas").map_err(|e| e.in_stage("assemble"))?;
    clock.lap("assemble");
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_grid_map, GridMapParams};

    #[test]
    fn single_terminal_is_trivial() {
        let inst = gen_grid_map(&GridMapParams { rows: 2, cols: 2, seed: 1, merge_prob: 0.0, terminals: 1 }).unwrap();
        let (sol, rep) = ptas(&inst, &PtasConfig::default()).unwrap();
        assert_eq!(sol.cost, 1.0);
        assert_eq!(sol.vertices, inst.terminals);
        assert!(rep.invariants.iter().all(|i| i.passed));
    }

    #[test]
    fn never_worse_than_starter_and_deterministic() {
        for seed in 0..10 {
            let inst = gen_grid_map(&GridMapParams { rows: 3, cols: 3, seed, merge_prob: 0.3, terminals: 3 }).unwrap();
            let cfg = PtasConfig { with_oracle: true, ..Default::default() };
            let (a, rep) = ptas(&inst, &cfg).unwrap();
            let (b, _) = ptas(&inst, &cfg).unwrap();
            assert_eq!(a, b);
            assert!(a.cost <= rep.costs.starter);
            assert!(a.cost >= rep.opt.unwrap());
            assert!(rep.invariants.iter().all(|i| i.passed), "{:?}", rep.invariants);
        }
    }

    #[test]
    fn k_one_still_valid() {
        let inst = gen_grid_map(&GridMapParams { rows: 3, cols: 3, seed: 4, merge_prob: 0.2, terminals: 3 }).unwrap();
        let cfg = PtasConfig { k: Some(1), ..Default::default() };
        let (sol, rep) = ptas(&inst, &cfg).unwrap();
        assert_eq!(rep.k, 1);
        sol.validate(&SteinerProblem::from_instance(&inst).unwrap()).unwrap();
    }

    #[test]
    fn bad_config_is_rejected() {
        let inst = gen_grid_map(&GridMapParams::default()).unwrap();
        assert!(ptas(&inst, &PtasConfig { epsilon: 1.5, ..Default::default() }).is_err());
        assert!(ptas(&inst, &PtasConfig { k: Some(0), ..Default::default() }).is_err());
    }
}
