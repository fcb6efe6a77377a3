use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Subcommand, ValueEnum};
use serde_json::json;

use gossipnet_core::construct::{
    greedy_mis_peeling, potential_dynamics, three_stable_from_optimal, two_stable_dynamics,
    best_response_run, PotentialKind, Schedule,
};
use gossipnet_core::instances::GeneratorSpec;
use gossipnet_core::model::Network;
use gossipnet_core::reductions::{
    bichromatic_to_matching_instance, stable_coloring_search, three_coloring_to_triple_graph,
    triple_graph_to_bichromatic,
};
use gossipnet_core::stability::{
    enumerate_stable_networks, exists_stable_network, find_improving_defection,
};
use gossipnet_core::suite;
use gossipnet_core::welfare::{optimal_total_welfare, welfare_report, WelfareMetric};
use gossipnet_core::{Error, Result, SolverConfig};

use crate::io;

const EXIT_OK: u8 = 0;
const EXIT_UNSTABLE: u8 = 1;
const EXIT_NONEXISTENT: u8 = 4;

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

#[derive(Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    family: Family,

    /// Emit a bundle with the family's candidate network/schedule instead of
    /// the bare instance.
    #[arg(long, global = true)]
    with_network: bool,

    /// Write the instance (or bundle) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write the candidate network to a file.
    #[arg(long, global = true)]
    network_out: Option<PathBuf>,

    /// Also write the move schedule to a file.
    #[arg(long, global = true)]
    schedule_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// Symmetric friends/enemies instance with an explicit enemy list.
    FriendsEnemies {
        #[arg(long)]
        n: usize,
        /// Enemy pairs as `i-j`, e.g. `--enemies 0-1,2-3`.
        #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
        enemies: Vec<(usize, usize)>,
    },
    /// Tiered bipartite fragmentation family on 2n agents.
    Bn {
        #[arg(long)]
        n: usize,
    },
    /// Row/column clique grid on r*c agents.
    Grid {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: usize,
    },
    /// Clique of `core` friends, each with a pendant partner.
    PendantClique {
        #[arg(long, default_value_t = 4)]
        core: usize,
    },
    /// Two 4-cliques braided by four triples (12 agents).
    TwinCliques,
    /// Hub 4-clique plus four triangles (12 agents).
    HubTriangles,
    /// Best-response cycling gadget with a core clique of size s.
    GossipCycle {
        #[arg(long, default_value_t = 6)]
        s: usize,
    },
    /// Stable-marriage encoding of a random preference profile.
    Marriage {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Strong/weak-tie nonexistence gadget (4 agents).
    StrongWeak,
    /// Strong-pairs nonexistence gadget with tie weight c.
    CNonexist {
        #[arg(long, default_value_t = 5)]
        c: i64,
    },
    /// Asymmetric nonexistence gadget (4 agents).
    AsymNonexist,
    /// Independent-set stability-testing gadget over a random seed graph.
    IsGadget {
        #[arg(long)]
        l_nodes: usize,
        #[arg(long, default_value_t = 0.5)]
        l_edge_prob: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two cliques joined by an almost-perfect matching.
    MatchedCliques {
        #[arg(long)]
        n: usize,
    },
    /// Random symmetric friends/enemies instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        enemy_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| format!("expected i-j, got {s:?}"))?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

impl Family {
    fn spec(&self) -> GeneratorSpec {
        match self {
            Family::FriendsEnemies { n, enemies } => GeneratorSpec::FriendsEnemies {
                n: *n,
                enemies: enemies.clone(),
            },
            Family::Bn { n } => GeneratorSpec::Bn { n: *n },
            Family::Grid { r, c } => GeneratorSpec::Grid { r: *r, c: *c },
            Family::PendantClique { core } => GeneratorSpec::PendantClique { core: *core },
            Family::TwinCliques => GeneratorSpec::TwinCliques,
            Family::HubTriangles => GeneratorSpec::HubTriangles,
            Family::GossipCycle { s } => GeneratorSpec::GossipCycle { s: *s },
            Family::Marriage { n, seed } => GeneratorSpec::Marriage {
                n: *n,
                seed: *seed,
            },
            Family::StrongWeak => GeneratorSpec::StrongWeak,
            Family::CNonexist { c } => GeneratorSpec::CNonexist { c: *c },
            Family::AsymNonexist => GeneratorSpec::AsymNonexist,
            Family::IsGadget {
                l_nodes,
                l_edge_prob,
                k,
                seed,
            } => GeneratorSpec::IsGadget {
                l_nodes: *l_nodes,
                l_edge_prob: *l_edge_prob,
                k: *k,
                seed: *seed,
            },
            Family::MatchedCliques { n } => GeneratorSpec::MatchedCliques { n: *n },
            Family::Random {
                n,
                enemy_prob,
                seed,
            } => GeneratorSpec::Random {
                n: *n,
                enemy_prob: *enemy_prob,
                seed: *seed,
            },
        }
    }
}

pub fn generate(args: GenerateArgs) -> Result<ExitCode> {
    let built = args.family.spec().build()?;
    if let (Some(path), Some(net)) = (&args.network_out, &built.network) {
        io::write_or_print(&net.to_json(), &Some(path.clone()))?;
    }
    if let (Some(path), Some(schedule)) = (&args.schedule_out, &built.schedule) {
        io::write_or_print(&io::schedule_to_json(schedule), &Some(path.clone()))?;
    }
    let text = if args.with_network {
        let mut doc = json!({ "instance": instance_value(&built.instance) });
        if let Some(net) = &built.network {
            doc["network"] = net_value(net);
        }
        if let Some(schedule) = &built.schedule {
            doc["schedule"] = json!({ "moves": schedule });
        }
        doc.to_string()
    } else {
        built.instance.to_json()
    };
    io::write_or_print(&text, &args.out)?;
    Ok(ExitCode::from(EXIT_OK))
}

fn instance_value(inst: &gossipnet_core::model::Instance) -> serde_json::Value {
    serde_json::from_str(&inst.to_json()).expect("instance JSON is valid")
}

fn net_value(net: &Network) -> serde_json::Value {
    serde_json::from_str(&net.to_json()).expect("network JSON is valid")
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Maximum-independent-set peeling (k-stable for every k).
    Peel,
    /// Polynomial 2-stable dynamics.
    Dyn2,
    /// Potential-guided 3-stable dynamics.
    Pot3,
    /// Potential-guided 4-stable dynamics.
    Pot4,
    /// Welfare-preserving repair of the exhaustive optimum into 3-stability.
    Repair3,
}

#[derive(Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Algorithm,

    /// Instance file; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Also write the bare network JSON to a file.
    #[arg(long)]
    network_out: Option<PathBuf>,

    /// Write the trajectory (one JSON line per state) for the dynamics
    /// algorithms.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

pub fn solve(args: SolveArgs, cfg: &SolverConfig) -> Result<ExitCode> {
    let doc = io::read_document(&args.input)?;
    let inst = doc.instance;
    let mut trace = None;
    let network = match args.alg {
        Algorithm::Peel => greedy_mis_peeling(&inst, cfg)?,
        Algorithm::Dyn2 => {
            let traj = two_stable_dynamics(&inst)?;
            let net = traj.final_network().clone();
            trace = Some(traj);
            net
        }
        Algorithm::Pot3 | Algorithm::Pot4 => {
            let k = if args.alg == Algorithm::Pot3 { 3 } else { 4 };
            let traj = potential_dynamics(&inst, k)?;
            let net = traj.final_network().clone();
            trace = Some(traj);
            net
        }
        Algorithm::Repair3 => {
            let (_, optimal) = optimal_total_welfare(&inst, cfg)?;
            three_stable_from_optimal(&inst, &optimal)?
        }
    };
    if let (Some(path), Some(traj)) = (&args.trace_out, &trace) {
        io::write_or_print(&traj.to_jsonl(), &Some(path.clone()))?;
    }
    if let Some(path) = &args.network_out {
        io::write_or_print(&network.to_json(), &Some(path.clone()))?;
    }
    let bundle = json!({
        "instance": instance_value(&inst),
        "network": net_value(&network),
    });
    println!("{bundle}");
    Ok(ExitCode::from(EXIT_OK))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    k: usize,

    /// Network file; defaults to the bundle's network on stdin.
    #[arg(long)]
    network: Option<PathBuf>,

    /// Instance (or bundle) file; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

pub fn verify(args: VerifyArgs, _cfg: &SolverConfig) -> Result<ExitCode> {
    let doc = io::read_document(&args.input)?;
    let network = match &args.network {
        Some(path) => io::read_network(path)?,
        None => doc.network.ok_or_else(|| {
            Error::Parse("no network: pass --network or pipe a solve bundle".into())
        })?,
    };
    match find_improving_defection(&doc.instance, &network, args.k) {
        None => {
            println!("STABLE");
            Ok(ExitCode::from(EXIT_OK))
        }
        Some(report) => {
            println!("UNSTABLE");
            println!("{}", report.to_json());
            Ok(ExitCode::from(EXIT_UNSTABLE))
        }
    }
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

#[derive(Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    k: usize,

    #[arg(long)]
    input: Option<PathBuf>,
}

pub fn enumerate(args: EnumerateArgs, cfg: &SolverConfig) -> Result<ExitCode> {
    let doc = io::read_document(&args.input)?;
    let parts = enumerate_stable_networks(&doc.instance, args.k, cfg)?;
    for part in &parts {
        println!("{}", part.to_json());
    }
    if parts.is_empty() {
        Ok(ExitCode::from(EXIT_NONEXISTENT))
    } else {
        Ok(ExitCode::from(EXIT_OK))
    }
}

// ---------------------------------------------------------------------------
// welfare
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, ValueEnum)]
pub enum Metric {
    Utility,
    Components,
}

#[derive(Args)]
pub struct WelfareArgs {
    #[arg(long)]
    k: usize,

    #[arg(long, value_enum)]
    metric: Metric,

    #[arg(long)]
    input: Option<PathBuf>,
}

pub fn welfare(args: WelfareArgs, cfg: &SolverConfig) -> Result<ExitCode> {
    let doc = io::read_document(&args.input)?;
    let metric = match args.metric {
        Metric::Utility => WelfareMetric::TotalUtility,
        Metric::Components => WelfareMetric::ComponentCount,
    };
    let report = welfare_report(&doc.instance, args.k, metric, cfg)?;
    println!("{}", report.to_json());
    if report.stable_exists {
        Ok(ExitCode::from(EXIT_OK))
    } else {
        Ok(ExitCode::from(EXIT_NONEXISTENT))
    }
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, ValueEnum)]
pub enum ReduceFrom {
    #[value(name = "3col")]
    ThreeColoring,
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum ReduceTo {
    #[value(name = "3ctpg")]
    TripleGraph,
    Scbg,
    Matching,
}

#[derive(Args)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    from: ReduceFrom,

    #[arg(long, value_enum)]
    to: ReduceTo,

    /// Graph file `{"n": .., "edges": [[i,j],..]}`; stdin when absent.
    graph: Option<PathBuf>,

    /// Also decide the produced stage (3-colorability via stable coloring,
    /// or 2-stable existence for the matching stage, bounds permitting).
    #[arg(long)]
    decide: bool,
}

pub fn reduce(args: ReduceArgs, cfg: &SolverConfig) -> Result<ExitCode> {
    let text = io::read_input(&args.graph)?;
    let graph = Network::from_json(&text)?;
    let tpg = three_coloring_to_triple_graph(&graph);
    let mut out = json!({
        "input": net_value(&graph),
        "tpg": { "graph": net_value(&tpg.graph), "triples": tpg.triples },
    });
    if args.to >= ReduceTo::Scbg {
        let k = triple_graph_to_bichromatic(&tpg)?;
        out["scbg"] = serde_json::from_str(&k.to_json()).expect("valid JSON");
        if args.decide {
            let coloring = stable_coloring_search(&k, cfg)?;
            out["stable_coloring"] = match coloring {
                Some(blocks) => json!(blocks),
                None => serde_json::Value::Null,
            };
        }
        if args.to == ReduceTo::Matching {
            let inst = bichromatic_to_matching_instance(&k)?;
            out["instance"] = instance_value(&inst);
            if args.decide {
                let net = exists_stable_network(&inst, 2, cfg)?;
                out["stable_network"] = match net {
                    Some(n) => net_value(&n),
                    None => serde_json::Value::Null,
                };
            }
        }
    }
    println!("{out}");
    Ok(ExitCode::from(EXIT_OK))
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, Default, ValueEnum)]
pub enum PotentialArg {
    #[default]
    SumSquares,
    SumCubes,
    Pot3,
    Pot4,
    UtilitySum,
}

#[derive(Args)]
pub struct TraceArgs {
    /// Start network; defaults to the bundle's network.
    #[arg(long)]
    network: Option<PathBuf>,

    /// Move schedule file; defaults to the bundle's schedule.
    #[arg(long)]
    schedule: Option<PathBuf>,

    /// Pick the best improving pair defection automatically each step
    /// instead of replaying a schedule.
    #[arg(long)]
    auto: bool,

    #[arg(long, default_value_t = 100)]
    max_steps: usize,

    #[arg(long, value_enum, default_value_t)]
    potential: PotentialArg,

    #[arg(long)]
    input: Option<PathBuf>,
}

pub fn trace(args: TraceArgs, _cfg: &SolverConfig) -> Result<ExitCode> {
    let doc = io::read_document(&args.input)?;
    let start = match &args.network {
        Some(path) => io::read_network(path)?,
        None => doc
            .network
            .clone()
            .unwrap_or_else(|| Network::empty(doc.instance.n())),
    };
    let schedule = if args.auto {
        Schedule::Auto
    } else {
        let moves = match &args.schedule {
            Some(path) => io::read_schedule(path)?,
            None => doc.schedule.clone().ok_or_else(|| {
                Error::Parse("no schedule: pass --schedule, --auto, or pipe a bundle".into())
            })?,
        };
        Schedule::Script(moves)
    };
    let potential = match args.potential {
        PotentialArg::SumSquares => PotentialKind::SumSquares,
        PotentialArg::SumCubes => PotentialKind::SumCubes,
        PotentialArg::Pot3 => PotentialKind::ThreeStable,
        PotentialArg::Pot4 => PotentialKind::FourStable,
        PotentialArg::UtilitySum => PotentialKind::UtilitySum,
    };
    let traj = best_response_run(&doc.instance, &start, &schedule, args.max_steps, potential)?;
    println!("{}", traj.to_jsonl());
    let summary = match traj.cycle {
        Some(c) => json!({ "cycle": { "first_visit": c.first_visit, "length": c.length } }),
        None => json!({ "cycle": null }),
    };
    println!("{summary}");
    Ok(ExitCode::from(EXIT_OK))
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, Default, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Markdown,
    Json,
}

#[derive(Args)]
pub struct ExperimentArgs {
    #[command(subcommand)]
    which: Experiment,
}

#[derive(Subcommand)]
enum Experiment {
    /// Run the full acceptance battery and report one line per criterion.
    PaperSuite {
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,

        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,

        /// Run only this criterion (1..=12) instead of the whole battery.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

pub fn experiment(args: ExperimentArgs, cfg: &SolverConfig) -> Result<ExitCode> {
    match args.which {
        Experiment::PaperSuite {
            format,
            out,
            criterion,
        } => {
            let results = match criterion {
                Some(id) => vec![suite::run_criterion(id, cfg.exec).ok_or_else(|| {
                    Error::Parse(format!("criterion {id} does not exist (1..=12)"))
                })?],
                None => suite::run_all(cfg.exec),
            };
            let poa = if criterion.is_none() {
                suite::poa_measurements(cfg.exec)
            } else {
                Vec::new()
            };
            let all_passed = results.iter().all(|r| r.passed);
            let text = match format {
                ReportFormat::Markdown => {
                    let mut lines = vec![
                        "# paper-suite report".to_string(),
                        String::new(),
                        "| # | criterion | result | details |".to_string(),
                        "|---|-----------|--------|---------|".to_string(),
                    ];
                    for r in &results {
                        lines.push(format!(
                            "| {} | {} | {} | {} |",
                            r.id,
                            r.name,
                            if r.passed { "pass" } else { "FAIL" },
                            r.details
                        ));
                    }
                    lines.push(String::new());
                    lines.push("## worst-case price measurements".to_string());
                    lines.push(String::new());
                    lines.push("| family | optimum | worst stable | measured PoA | claimed bound | satisfied |".to_string());
                    lines.push("|--------|---------|--------------|--------------|---------------|-----------|".to_string());
                    for (label, check) in &poa {
                        lines.push(format!(
                            "| {} | {} | {} | {} | {} | {} |",
                            label,
                            check.optimum,
                            check
                                .worst_stable
                                .map_or("-".into(), |r| r.to_string()),
                            check
                                .measured_poa
                                .map_or("-".into(), |r| r.to_string()),
                            check
                                .claimed_bound
                                .map_or("-".into(), |r| r.to_string()),
                            check
                                .bound_satisfied
                                .map_or("-".into(), |b| b.to_string()),
                        ));
                    }
                    lines.push(String::new());
                    lines.push(format!(
                        "overall: {}",
                        if all_passed { "all criteria pass" } else { "FAILURES PRESENT" }
                    ));
                    lines.join("\n")
                }
                ReportFormat::Json => json!({
                    "criteria": results.iter().map(|r| json!({
                        "id": r.id,
                        "name": r.name,
                        "passed": r.passed,
                        "details": r.details,
                    })).collect::<Vec<_>>(),
                    "poa_measurements": poa.iter().map(|(label, check)| json!({
                        "family": label,
                        "check": serde_json::from_str::<serde_json::Value>(
                            &serde_json::to_string(check).expect("serializable")
                        ).expect("valid"),
                    })).collect::<Vec<_>>(),
                    "all_passed": all_passed,
                })
                .to_string(),
            };
            io::write_or_print(&text, &out)?;
            Ok(ExitCode::from(if all_passed { EXIT_OK } else { EXIT_UNSTABLE }))
        }
    }
}
