use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mapsteiner::check::{check, default_corpus, CheckConfig};
use mapsteiner::error::{Error, Result};
use mapsteiner::exact::{brute_force_opt, dreyfus_wagner_nw, solve_dp, SteinerProblem, BRUTE_FORCE_CAP, DEFAULT_DP_WIDTH_CAP, DW_TERMINAL_CAP};
use mapsteiner::instance::{gen_grid_map, GridMapParams, MapWeightedInstance, Side};
use mapsteiner::io::{instance_from_json, instance_to_json, solution_to_json, to_dot, InstanceJson, FORMAT_VERSION};
use mapsteiner::planar::treedec::tree_decomposition;
use mapsteiner::ptas::{ptas, PtasConfig, StarterChoice};
use mapsteiner::spanner::{build_spanner, DEFAULT_C_P, DEFAULT_PORTAL_CAP};
use mapsteiner::starter::primal_dual_starter;
use mapsteiner::thinning::{decompose, RootChoice};

#[derive(Parser)]
#[command(name = "mapsteiner", version, about = "Node-weighted Steiner trees on map graphs")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write Graphviz files for each stage into this directory.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactSolver {
    Bruteforce,
    Dw,
}

#[derive(Clone, Copy, ValueEnum)]
enum StarterArg {
    PrimalDual,
    Exact,
    AllVertices,
}

#[derive(clap::Args)]
struct SpannerArgs {
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long)]
    theta: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PORTAL_CAP)]
    portal_cap: usize,
    #[arg(long, default_value_t = DEFAULT_C_P)]
    c_p: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a grid map instance.
    Gen {
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        #[arg(long, default_value_t = 0.0)]
        merge_prob: f64,
        #[arg(long, default_value_t = 3)]
        terminals: usize,
    },
    /// List invariant violations of an instance.
    Validate {
        input: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Exact solution by brute force or Dreyfus–Wagner.
    SolveExact {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ExactSolver::Dw)]
        solver: ExactSolver,
    },
    /// Exact solution by tree-decomposition DP.
    SolveDp {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DP_WIDTH_CAP)]
        width_cap: usize,
    },
    /// Moat-growing starter with its dual certificate.
    SolveApprox { input: PathBuf },
    /// Build the spanner around the starter tree.
    Spanner {
        input: PathBuf,
        #[command(flatten)]
        args: SpannerArgs,
    },
    /// Layer the witness into k edge sets.
    Thin {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Dual BFS root face; the outer face by default.
        #[arg(long)]
        root: Option<usize>,
    },
    /// Run the full approximation pipeline.
    Ptas {
        input: PathBuf,
        #[command(flatten)]
        args: SpannerArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = StarterArg::PrimalDual)]
        starter: StarterArg,
        #[arg(long, default_value_t = DEFAULT_DP_WIDTH_CAP)]
        width_cap: usize,
        /// Also compute OPT for the report.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the invariant suite on a corpus or on instance files.
    Check {
        #[arg(long, conflicts_with = "inputs")]
        corpus: Option<String>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        inputs: Vec<PathBuf>,
    },
    /// Size and shape statistics of an instance.
    Stats { input: PathBuf },
}

fn read_instance(path: &Path) -> Result<MapWeightedInstance> {
    let text = fs::read_to_string(path)?;
    let j: InstanceJson = serde_json::from_str(&text)?;
    instance_from_json(&j)
}

fn write_dot(dir: &Option<PathBuf>, stage: &str, text: String) -> Result<()> {
    if let Some(d) = dir {
        fs::create_dir_all(d)?;
        fs::write(d.join(format!("{stage}.dot")), text)?;
    }
    Ok(())
}

fn problem(inst: &MapWeightedInstance) -> Result<SteinerProblem> {
    let p = SteinerProblem::from_instance(inst)?;
    if !p.is_feasible() {
        return Err(Error::Infeasible);
    }
    Ok(p)
}

fn tagged(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("format_version".into(), json!(FORMAT_VERSION));
    }
    v
}

fn ptas_config(args: &SpannerArgs, seed: u64) -> PtasConfig {
    PtasConfig { epsilon: args.epsilon, theta: args.theta, portal_cap: args.portal_cap, c_p: args.c_p, seed, ..Default::default() }
}

/// Output document, and whether the command found a failure it reports as data.
fn run(cli: &Cli) -> Result<(Value, bool)> {
    let seed = cli.seed;
    match &cli.cmd {
        Cmd::Gen { rows, cols, merge_prob, terminals } => {
            let p = GridMapParams { rows: *rows, cols: *cols, seed, merge_prob: *merge_prob, terminals: *terminals };
            let inst = gen_grid_map(&p)?;
            write_dot(&cli.dot, "witness", to_dot(&inst.witness, "witness", &inst.terminals, &[]))?;
            Ok((serde_json::to_value(instance_to_json(&inst))?, false))
        }
        Cmd::Validate { input, samples } => {
            let inst = read_instance(input)?;
            let v = inst.validate(*samples, seed);
            let list: Vec<Value> = v.iter().map(|x| json!({"kind": x.kind, "detail": x.detail})).collect();
            Ok((tagged(json!({"valid": v.is_empty(), "violations": list})), !v.is_empty()))
        }
        Cmd::SolveExact { input, solver } => {
            let inst = read_instance(input)?;
            let p = problem(&inst)?;
            let sol = match solver {
                ExactSolver::Bruteforce => brute_force_opt(&p, BRUTE_FORCE_CAP)?,
                ExactSolver::Dw => dreyfus_wagner_nw(&p, DW_TERMINAL_CAP)?,
            };
            let sol = mapsteiner::exact::SteinerSolution {
                solver: match solver {
                    ExactSolver::Bruteforce => "bruteforce".into(),
                    ExactSolver::Dw => "dw".into(),
                },
                ..sol
            };
            write_dot(&cli.dot, "solution", to_dot(&inst.witness, "solution", &sol.vertices, &[]))?;
            Ok((serde_json::to_value(solution_to_json(&inst.witness, &sol))?, false))
        }
        Cmd::SolveDp { input, width_cap } => {
            let inst = read_instance(input)?;
            let p = problem(&inst)?;
            let (sol, width) = solve_dp(&p, *width_cap)?;
            let mut v = serde_json::to_value(solution_to_json(&inst.witness, &sol))?;
            v["width"] = json!(width);
            Ok((v, false))
        }
        Cmd::SolveApprox { input } => {
            let inst = read_instance(input)?;
            let p = problem(&inst)?;
            let (sol, cert) = primal_dual_starter(&p)?;
            let mut v = serde_json::to_value(solution_to_json(&inst.witness, &sol))?;
            v["certificate"] = json!({
                "dual_total": cert.dual_total,
                "lower_bound": cert.lower_bound,
                "purchased": cert.purchase_order.len(),
                "max_overload": cert.max_overload,
            });
            Ok((v, false))
        }
        Cmd::Spanner { input, args } => {
            let inst = read_instance(input)?;
            let p = problem(&inst)?;
            let params = ptas_config(args, seed).portal_params()?;
            let (st, _) = primal_dual_starter(&p)?;
            let h = build_spanner(&inst.witness, &p.terminals, &st, &params)?;
            write_dot(&cli.dot, "spanner", to_dot(&inst.witness, "spanner", &h.vertices, &h.edges))?;
            let ids = |vs: &[usize]| vs.iter().map(|&v| inst.witness.id(v)).collect::<Vec<_>>();
            let edges: Vec<[u64; 2]> = h
                .edges
                .iter()
                .map(|&e| {
                    let (a, b) = inst.witness.edge_endpoints(e);
                    [inst.witness.id(a), inst.witness.id(b)]
                })
                .collect();
            Ok((tagged(json!({"vertices": ids(&h.vertices), "edges": edges, "report": h.report})), false))
        }
        Cmd::Thin { input, k, root } => {
            let inst = read_instance(input)?;
            let root = root.map_or(RootChoice::OuterFace, RootChoice::Face);
            let d = decompose(&inst.witness, *k, root)?;
            let (c, set) = d.choose_cheapest();
            write_dot(&cli.dot, "cheapest-set", to_dot(&inst.witness, "cheapest set", &[], set))?;
            let mut v = serde_json::to_value(&d)?;
            v["cheapest"] = json!(c);
            v["max_sets_per_vertex"] = json!(d.max_sets_per_vertex(&inst.witness));
            Ok((tagged(v), false))
        }
        Cmd::Ptas { input, args, k, starter, width_cap, oracle } => {
            let inst = read_instance(input)?;
            problem(&inst)?;
            let starter = match starter {
                StarterArg::PrimalDual => StarterChoice::PrimalDual,
                StarterArg::Exact => StarterChoice::Exact,
                StarterArg::AllVertices => StarterChoice::AllVertices,
            };
            let cfg = PtasConfig { k: *k, starter, dp_width_cap: *width_cap, with_oracle: *oracle, ..ptas_config(args, seed) };
            let (sol, report) = ptas(&inst, &cfg)?;
            write_dot(&cli.dot, "ptas", to_dot(&inst.witness, "ptas", &sol.vertices, &[]))?;
            let v = json!({"solution": solution_to_json(&inst.witness, &sol), "report": report});
            Ok((tagged(v), false))
        }
        Cmd::Check { corpus, count, inputs } => {
            let instances = match corpus.as_deref() {
                Some("default") => default_corpus(*count, seed),
                Some(other) => return Err(Error::InvalidParameter(format!("unknown corpus {other}"))),
                None => inputs
                    .iter()
                    .map(|p| Ok((p.display().to_string(), read_instance(p)?)))
                    .collect::<Result<Vec<_>>>()?,
            };
            let cfg = CheckConfig { ptas: PtasConfig { seed, ..Default::default() }, ..Default::default() };
            let rep = check(&instances, &cfg);
            let failed = !rep.passed();
            let mut v = serde_json::to_value(&rep)?;
            v["passed"] = json!(!failed);
            Ok((tagged(v), failed))
        }
        Cmd::Stats { input } => {
            let inst = read_instance(input)?;
            let w = &inst.witness;
            let g = w.to_graph();
            let regions = inst.sides.iter().filter(|&&s| s == Side::V).count();
            let v = json!({
                "vertices": w.num_vertices(),
                "edges": w.num_edges(),
                "faces": w.num_faces(),
                "regions": regions,
                "points": w.num_vertices() - regions,
                "terminals": inst.terminals.len(),
                "total_weight": g.total_weight(),
                "components": w.components().1,
                "min_fill_width": tree_decomposition(&g).width(),
            });
            Ok((tagged(v), false))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((v, failed)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let body = json!({"format_version": FORMAT_VERSION, "error": e.to_string(), "infeasible": e.is_infeasible()});
            println!("{}", serde_json::to_string_pretty(&body).expect("json values serialize"));
            ExitCode::from(1)
        }
    }
}
