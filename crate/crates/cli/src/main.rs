use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use flowattack::attack::{run_attack, score_trace, AttackConfig, TieBreakPolicy};
use flowattack::centrality::CentralityKind;
use flowattack::generate::{assign_random_integer_weights, generate, GeneratorSpec, GraphModel};
use flowattack::graph::WeightedGraph;
use flowattack::paths::DistanceMode;
use flowattack::rng::derive_seed;
use flowattack::robustness::{MetricKind, MetricSelection};
use flowattack_cli::batch::{run_batch, ExperimentConfig, NetworkSource, ResultTable};
use flowattack_cli::ingest::{convert_capacity_table, load_edge_list, write_edge_list, ColumnMap};
use flowattack_cli::plot::plot_results;

/// Targeted node attacks on weighted networks, scored by flow-based
/// robustness metrics.
#[derive(Parser)]
#[command(name = "flowattack", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network and write it as a u,v,capacity edge list.
    Generate(GenerateArgs),
    /// Run one adaptive attack and print its metric scores.
    Attack(AttackArgs),
    /// Run a seeded experiment sweep and write the result table CSV.
    Batch(BatchArgs),
    /// Render SVG charts from a result table.
    Plot(PlotArgs),
    /// Convert a raw capacity table (voltage, cables) to an edge list.
    Convert(ConvertArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Network model: er, ba, or ws.
    #[arg(long)]
    model: GraphModel,
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long)]
    seed: u64,
    /// WS rewiring probability.
    #[arg(long, default_value_t = 0.1)]
    ws_p: f64,
    /// Smallest random integer capacity.
    #[arg(long, default_value_t = 1)]
    weight_min: i64,
    /// Largest random integer capacity.
    #[arg(long, default_value_t = 10)]
    weight_max: i64,
    /// Retry until the instance is connected.
    #[arg(long)]
    connected: bool,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// Edge-list dataset to attack.
    #[arg(long, conflicts_with_all = ["model", "nodes", "edges"])]
    input: Option<PathBuf>,
    /// Generate the target instead: model plus nodes/edges/seed.
    #[arg(long, requires_all = ["nodes", "edges"])]
    model: Option<GraphModel>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    edges: Option<usize>,
    /// Generation seed (generated targets only).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    ws_p: f64,
    #[arg(long, default_value_t = 1)]
    weight_min: i64,
    #[arg(long, default_value_t = 10)]
    weight_max: i64,
    /// Node importance metric guiding the attack.
    #[arg(long)]
    centrality: CentralityKind,
    /// Metrics to score the attack with (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "ranf")]
    metrics: Vec<MetricKind>,
    /// Tie-break policy: seeded or lowest-id.
    #[arg(long, default_value = "seeded")]
    policy: String,
    #[arg(long, default_value_t = 0)]
    tie_seed: u64,
    #[arg(long, default_value = "reciprocal")]
    distance_mode: DistanceMode,
    /// Write the per-round trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the original-to-dense node id mapping here (dataset targets).
    #[arg(long)]
    nodemap: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    /// Models to sweep (comma-separated: er,ba,ws).
    #[arg(long, value_delimiter = ',', conflicts_with = "dataset")]
    models: Vec<GraphModel>,
    /// Node counts to sweep.
    #[arg(long, value_delimiter = ',', conflicts_with = "dataset")]
    n_list: Vec<usize>,
    /// Edge counts to sweep.
    #[arg(long, value_delimiter = ',', conflicts_with = "dataset")]
    m_list: Vec<usize>,
    /// Zip n-list and m-list pairwise instead of crossing them.
    #[arg(long)]
    pair_nm: bool,
    /// Attack a fixed edge-list dataset instead of generated networks.
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "ns,spb,spc,fb,cfb,cfc")]
    centralities: Vec<CentralityKind>,
    #[arg(long, value_delimiter = ',', default_value = "ranf")]
    metrics: Vec<MetricKind>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Master seed; every trial stream derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    weight_min: i64,
    #[arg(long, default_value_t = 10)]
    weight_max: i64,
    #[arg(long, default_value_t = 0.1)]
    ws_p: f64,
    #[arg(long, default_value = "reciprocal")]
    distance_mode: DistanceMode,
    /// Worker threads (0 = automatic). Thread count never changes output.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Result table path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the node id mapping of a dataset here.
    #[arg(long)]
    nodemap: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Result table CSV produced by `batch`.
    #[arg(long)]
    table: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ConvertArgs {
    /// Raw comma-separated capacity table.
    #[arg(long)]
    input: PathBuf,
    /// Edge-list output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// 0-based column of the first endpoint id.
    #[arg(long)]
    u_col: usize,
    /// 0-based column of the second endpoint id.
    #[arg(long)]
    v_col: usize,
    /// 0-based column of the voltage rating.
    #[arg(long)]
    voltage_col: usize,
    /// 0-based column of the cable count; capacity is voltage when absent.
    #[arg(long)]
    cables_col: Option<usize>,
    /// Skip the first line of the input.
    #[arg(long)]
    skip_header: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Attack(args) => cmd_attack(args),
        Command::Batch(args) => cmd_batch(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Convert(args) => cmd_convert(args),
    }
}

fn emit(out: Option<&PathBuf>, data: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, data).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout()
            .write_all(data.as_bytes())
            .context("writing to stdout"),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let mut spec =
        GeneratorSpec::new(args.model, args.nodes, args.edges, args.seed).with_rewire_p(args.ws_p);
    if args.connected {
        spec = spec.connected();
    }
    let topology = generate(&spec)?;
    let weighted = assign_random_integer_weights(
        &topology,
        args.weight_min,
        args.weight_max,
        derive_seed(args.seed, &[2]),
    )?;
    emit(args.out.as_ref(), &write_edge_list(&weighted))?;
    eprintln!(
        "generated {} network: {} nodes, {} edges",
        args.model,
        weighted.node_count(),
        weighted.edge_count()
    );
    Ok(ExitCode::SUCCESS)
}

fn attack_target(args: &AttackArgs) -> Result<WeightedGraph> {
    if let Some(path) = &args.input {
        let loaded = load_edge_list(path)?;
        if let Some(map_path) = &args.nodemap {
            fs::write(map_path, loaded.mapping_csv())
                .with_context(|| format!("writing {}", map_path.display()))?;
        }
        return Ok(loaded.graph);
    }
    let Some(model) = args.model else {
        bail!("provide either --input or --model with --nodes/--edges");
    };
    let spec = GeneratorSpec::new(
        model,
        args.nodes.expect("clap enforces --nodes"),
        args.edges.expect("clap enforces --edges"),
        args.seed,
    )
    .with_rewire_p(args.ws_p)
    .connected();
    let topology = generate(&spec)?;
    Ok(assign_random_integer_weights(
        &topology,
        args.weight_min,
        args.weight_max,
        derive_seed(args.seed, &[2]),
    )?)
}

fn cmd_attack(args: AttackArgs) -> Result<ExitCode> {
    let graph = attack_target(&args)?;
    let policy = match args.policy.as_str() {
        "seeded" => TieBreakPolicy::SeededRandom(args.tie_seed),
        "lowest-id" => TieBreakPolicy::LowestId,
        other => bail!("unknown tie-break policy '{other}' (expected seeded or lowest-id)"),
    };
    let config = AttackConfig::new(args.centrality)
        .with_policy(policy)
        .with_distance_mode(args.distance_mode)
        .with_metrics(MetricSelection::only(args.metrics.iter().copied()));
    eprintln!(
        "attacking {} nodes / {} edges with {} ({policy})",
        graph.node_count(),
        graph.edge_count(),
        args.centrality
    );
    let trace = run_attack(&graph, &config)?;
    if trace.tie_rounds() > 0 {
        eprintln!("tie-broken rounds: {}", trace.tie_rounds());
    }
    if let Some(path) = &args.trace {
        fs::write(path, trace.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut out = String::from("metric,score\n");
    for &metric in &args.metrics {
        let score = score_trace(&trace, metric)?;
        out.push_str(&format!("{metric},{score}\n"));
    }
    emit(None, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_batch(args: BatchArgs) -> Result<ExitCode> {
    let source = if let Some(path) = &args.dataset {
        let loaded = load_edge_list(path)?;
        if let Some(map_path) = &args.nodemap {
            fs::write(map_path, loaded.mapping_csv())
                .with_context(|| format!("writing {}", map_path.display()))?;
        }
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string());
        NetworkSource::Dataset {
            name,
            graph: loaded.graph,
        }
    } else {
        if args.models.is_empty() || args.n_list.is_empty() || args.m_list.is_empty() {
            bail!("provide --models, --n-list and --m-list, or --dataset");
        }
        let mut settings = Vec::new();
        if args.pair_nm {
            if args.n_list.len() != args.m_list.len() {
                bail!(
                    "--pair-nm needs --n-list and --m-list of equal length, got {} and {}",
                    args.n_list.len(),
                    args.m_list.len()
                );
            }
            for &model in &args.models {
                for (&n, &m) in args.n_list.iter().zip(&args.m_list) {
                    settings.push((model, n, m));
                }
            }
        } else {
            for &model in &args.models {
                for &n in &args.n_list {
                    for &m in &args.m_list {
                        settings.push((model, n, m));
                    }
                }
            }
        }
        NetworkSource::Generated { settings }
    };

    let config = ExperimentConfig {
        source,
        centralities: args.centralities.clone(),
        metrics: args.metrics.clone(),
        trials: args.trials,
        master_seed: args.seed,
        distance_mode: args.distance_mode,
        weight_range: (args.weight_min, args.weight_max),
        ws_rewire_p: args.ws_p,
        jobs: args.jobs,
    };
    let outcome = run_batch(&config)?;
    emit(args.out.as_ref(), &outcome.table.to_csv())?;
    eprintln!(
        "batch complete: {} rows, {} failures",
        outcome.table.rows.len(),
        outcome.failures.len()
    );
    for failure in &outcome.failures {
        eprintln!("failed cell: {failure}");
    }
    if outcome.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_plot(args: PlotArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.table)
        .with_context(|| format!("reading {}", args.table.display()))?;
    let table = ResultTable::parse_csv(&text)?;
    let paths = plot_results(&table, &args.out_dir)?;
    for path in &paths {
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_convert(args: ConvertArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let columns = ColumnMap {
        u: args.u_col,
        v: args.v_col,
        voltage: args.voltage_col,
        cables: args.cables_col,
    };
    let edges = convert_capacity_table(&text, &columns, args.skip_header)?;
    emit(args.output.as_ref(), &edges)?;
    Ok(ExitCode::SUCCESS)
}
