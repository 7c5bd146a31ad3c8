use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use locdetect::graph::{NetworkDocument, Region};
use locdetect::netgen::{generate, BeaconMode, ExperimentConfig};
use locdetect::oracle::{rr3p_localizable_set, ORACLE_NODE_LIMIT};
use locdetect::protocols::{self, Protocol};
use locdetect::report::{
    render_state_map, scenario, sweep, RunReport, Stat, SweepSpec, DEFAULT_SECONDS_PER_ROUND, SCENARIOS,
};
use locdetect::sim::{RunOptions, RunTrace};

/// Exit status when a protocol marks a node the oracle rejects; clap
/// already uses 2 for usage errors.
const UNSOUND: u8 = 3;

#[derive(Parser)]
#[command(name = "locdetect", version, about = "Localizability detection simulator for sensor networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random network and write it as JSON.
    Generate(GenerateArgs),
    /// Run one protocol on a network file.
    Run {
        #[arg(long, value_parser = parse_protocol)]
        protocol: Protocol,
        #[arg(long)]
        net: PathBuf,
        /// Round budget; defaults to ten rounds per node.
        #[arg(long)]
        budget: Option<usize>,
        /// Seconds per round for the energy estimate.
        #[arg(long, default_value_t = DEFAULT_SECONDS_PER_ROUND)]
        seconds_per_round: f64,
        /// Write the full trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Mean/min/max detection accuracy over a B x N grid.
    Sweep {
        #[arg(long, value_parser = parse_protocol)]
        protocol: Protocol,
        /// Comma-separated beacon densities; defaults to 0.01..0.20.
        #[arg(long, value_delimiter = ',')]
        b: Vec<f64>,
        /// Comma-separated density factors; defaults to 2.0..5.8.
        #[arg(long, value_delimiter = ',')]
        n: Vec<f64>,
        /// Number of seeds per cell, starting at 0.
        #[arg(long, default_value_t = 30)]
        seeds: u64,
        #[arg(long, default_value_t = 400)]
        nodes: usize,
        #[arg(long, value_enum, default_value_t = Table::Mean)]
        table: Table,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run all protocols on a built-in scenario.
    Scenario {
        /// One of the built-in names; `list` prints them.
        name: String,
        /// Directory for one SVG state map per protocol.
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
    /// Print the ground-truth localizable set of a network.
    Oracle {
        #[arg(long)]
        net: PathBuf,
    },
    /// Draw the node states of a trace as SVG.
    Render {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        net: PathBuf,
        /// States after this round instead of the final ones.
        #[arg(long)]
        round: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Mean,
    Min,
    Max,
    /// One row per cell with all statistics.
    Long,
}

#[derive(clap::Args)]
struct GenerateArgs {
    /// Configuration document; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "nodes", short = 's')]
    nodes: Option<usize>,
    #[arg(long = "density", short = 'n')]
    density: Option<f64>,
    #[arg(long = "beacons", short = 'b')]
    beacon_density: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Draw this share of beacons from two corner squares.
    #[arg(long)]
    skewed: Option<f64>,
    /// Central disc hole with this radius in meters (uniform placement).
    #[arg(long)]
    hole_radius: Option<f64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn parse_protocol(s: &str) -> Result<Protocol, String> {
    s.parse().map_err(|e: locdetect::Error| e.to_string())
}

fn load_net(path: &PathBuf) -> Result<locdetect::NetworkGraph64> {
    let doc = NetworkDocument::load(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(doc.build()?)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn generate_cmd(args: GenerateArgs) -> Result<ExitCode> {
    let mut config = match &args.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::new(400, 3.2, 0.1, 0),
    };
    if let Some(s) = args.nodes {
        config.nodes = s;
        if args.grid.is_none() && args.config.is_none() {
            config.grid = (s as f64).sqrt().ceil() as usize;
        }
    }
    if let Some(n) = args.density {
        config.density = n;
    }
    if let Some(b) = args.beacon_density {
        config.beacon_density = b;
    }
    if let Some(g) = args.grid {
        config.grid = g;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(f) = args.skewed {
        config.beacon_mode = BeaconMode::Skewed { corner_fraction: f };
    }
    if let Some(r) = args.hole_radius {
        let side = config.side();
        config.hole = Some(Region::Disc {
            cx: side / 2.0,
            cy: side / 2.0,
            r,
        });
    }
    let net = generate::<f64>(&config)?;
    let mut doc = net.to_document();
    doc.note = Some(serde_json::to_string(&config)?);
    emit(&serde_json::to_string_pretty(&doc)?, args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn run_cmd(
    protocol: Protocol,
    net_path: PathBuf,
    budget: Option<usize>,
    seconds_per_round: f64,
    trace_path: Option<PathBuf>,
) -> Result<ExitCode> {
    if !(seconds_per_round > 0.0) {
        bail!("--seconds-per-round must be positive");
    }
    let net = load_net(&net_path)?;
    let mut options = RunOptions::for_size(net.node_count());
    if let Some(b) = budget {
        options.budget = b;
    }
    let trace = protocols::run(&net, protocol, &options)?;
    let oracle = (net.node_count() <= ORACLE_NODE_LIMIT)
        .then(|| rr3p_localizable_set(&net))
        .transpose()?;
    let report = RunReport::new(
        net_path.display().to_string(),
        &net,
        &trace,
        oracle.as_ref(),
        seconds_per_round,
    );
    if let Some(path) = trace_path {
        std::fs::write(&path, serde_json::to_string_pretty(&trace)?)?;
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !report.is_sound() {
        eprintln!("soundness violation: {:?}", report.violations);
        return Ok(ExitCode::from(UNSOUND));
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn sweep_cmd(
    protocol: Protocol,
    b: Vec<f64>,
    n: Vec<f64>,
    seeds: u64,
    nodes: usize,
    table: Table,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let mut spec = SweepSpec::full(protocol);
    spec.nodes = nodes;
    spec.seeds = (0..seeds).collect();
    if !b.is_empty() {
        spec.b_values = b;
    }
    if !n.is_empty() {
        spec.n_values = n;
    }
    let result = sweep(&spec)?;
    let text = match table {
        Table::Mean => result.to_csv(Stat::Mean)?,
        Table::Min => result.to_csv(Stat::Min)?,
        Table::Max => result.to_csv(Stat::Max)?,
        Table::Long => result.to_long_csv()?,
    };
    emit(text.trim_end(), out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn scenario_cmd(name: &str, svg_dir: Option<PathBuf>) -> Result<ExitCode> {
    if name == "list" {
        for s in SCENARIOS {
            println!("{s}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let report = scenario(name)?;
    if let Some(dir) = svg_dir {
        std::fs::create_dir_all(&dir)?;
        let sc = locdetect::report::load_scenario::<f64>(name)?;
        let net = sc.final_network();
        for run in &report.runs {
            let path = dir.join(format!("{name}_{}.svg", run.protocol));
            render_state_map(&net, &run.final_states, &path)?;
        }
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !report.is_sound() {
        eprintln!("soundness violation in scenario {name}");
        return Ok(ExitCode::from(UNSOUND));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Generate(args) => generate_cmd(args),
        Command::Run {
            protocol,
            net,
            budget,
            seconds_per_round,
            trace,
        } => run_cmd(protocol, net, budget, seconds_per_round, trace),
        Command::Sweep {
            protocol,
            b,
            n,
            seeds,
            nodes,
            table,
            out,
        } => sweep_cmd(protocol, b, n, seeds, nodes, table, out),
        Command::Scenario { name, svg_dir } => scenario_cmd(&name, svg_dir),
        Command::Oracle { net } => {
            let net = load_net(&net)?;
            let set = rr3p_localizable_set(&net)?;
            println!("{}", serde_json::to_string_pretty(&set)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Render {
            trace,
            net,
            round,
            out,
        } => {
            let net = load_net(&net)?;
            let trace: RunTrace = serde_json::from_str(&std::fs::read_to_string(&trace)?)?;
            let states = match round {
                Some(r) => trace.states_at(r),
                None => trace.final_states.clone(),
            };
            render_state_map(&net, &states, &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
