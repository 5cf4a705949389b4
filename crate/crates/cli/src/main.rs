use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use motif_census::estimator::DEFAULT_SEED;
use motif_census::{
    exact_census, frame_totals, load_graph, run_sampled_census, CensusConfig, Graph,
};

mod report;

/// Sample cap when only a target cv is given.
const DEFAULT_MAX_SAMPLES: u64 = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "motifs", version, about = "Count 3- and 4-vertex network motifs exactly or by frame sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustive census of connected induced subgraphs
    Exact(GraphArgs),
    /// Monte Carlo census by equiprobable frame sampling
    Sample(SampleArgs),
    /// Exact fork, trident, and chain instance counts
    Frames(GraphArgs),
    /// Dump the arrcode lookup tables and koef coefficients as JSON
    Tables(TablesArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct GraphArgs {
    /// Edge list file (`-` for stdin): two labels per line, `#` comments
    #[arg(short, long)]
    input: PathBuf,
    /// Treat each line as an arc from the first label to the second
    #[arg(short, long)]
    directed: bool,
    /// Motif size
    #[arg(short, long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(3..=4))]
    size: u8,
    #[arg(short, long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads
    #[arg(short, long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    graph: GraphArgs,
    /// Total frame samples across experiments
    #[arg(short = 'n', long)]
    samples: Option<u64>,
    /// Stop once every motif seen at least 5 times has cv at or below this
    #[arg(long)]
    target_cv: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Samples per batch between accuracy checks
    #[arg(long, default_value_t = motif_census::estimator::DEFAULT_BATCH)]
    batch: u64,
    /// Fraction of 4-vertex samples spent on chains (rest on tridents)
    #[arg(long, default_value_t = 0.5)]
    chain_share: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
struct TablesArgs {
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

/// Everything needed to rerun a command, embedded in every report.
#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    mode: &'a str,
    #[serde(flatten)]
    graph: &'a GraphArgs,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_cv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    batch: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain_share: Option<f64>,
}

impl<'a> RunConfig<'a> {
    fn graph_only(mode: &'a str, graph: &'a GraphArgs) -> Self {
        Self {
            mode,
            graph,
            samples: None,
            target_cv: None,
            seed: None,
            batch: None,
            chain_share: None,
        }
    }
}

fn read_graph(args: &GraphArgs) -> Result<Graph> {
    let text = if args.input.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        fs::read_to_string(&args.input)
            .with_context(|| format!("reading {}", args.input.display()))?
    };
    load_graph(&text, args.directed).with_context(|| format!("parsing {}", args.input.display()))
}

fn emit(output: Option<&PathBuf>, body: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        bail!("--workers must be at least 1");
    }
    Ok(rayon::ThreadPoolBuilder::new().num_threads(workers).build()?)
}

fn cmd_exact(args: &GraphArgs) -> Result<()> {
    let g = read_graph(args)?;
    let census = thread_pool(args.workers)?.install(|| exact_census(&g, args.size as usize))?;
    let config = RunConfig::graph_only("exact", args);
    let body = match args.format {
        Format::Json => report::exact_json(&config, &g, &census)?,
        Format::Csv => report::exact_csv(&census),
    };
    emit(args.output.as_ref(), &body)
}

fn cmd_sample(args: &SampleArgs) -> Result<()> {
    let budget = match (args.samples, args.target_cv) {
        (Some(n), _) => n,
        (None, Some(_)) => DEFAULT_MAX_SAMPLES,
        (None, None) => bail!("sample mode needs --samples, --target-cv, or both"),
    };
    let g = read_graph(&args.graph)?;
    let census_config = CensusConfig {
        size: args.graph.size as usize,
        budget,
        target_cv: args.target_cv,
        seed: args.seed,
        workers: args.graph.workers,
        batch_size: args.batch,
        chain_share: args.chain_share,
    };
    let census = thread_pool(args.graph.workers)?.install(|| run_sampled_census(&g, &census_config))?;
    let config = RunConfig {
        mode: "sample",
        graph: &args.graph,
        samples: Some(budget),
        target_cv: args.target_cv,
        seed: Some(args.seed),
        batch: Some(args.batch),
        chain_share: Some(args.chain_share),
    };
    let body = match args.graph.format {
        Format::Json => report::sample_json(&config, &g, &census)?,
        Format::Csv => report::sample_csv(&census),
    };
    emit(args.graph.output.as_ref(), &body)
}

fn cmd_frames(args: &GraphArgs) -> Result<()> {
    let g = read_graph(args)?;
    let totals = frame_totals(&g);
    let config = RunConfig::graph_only("frames", args);
    let body = match args.format {
        Format::Json => report::frames_json(&config, &g, &totals)?,
        Format::Csv => report::frames_csv(&totals),
    };
    emit(args.output.as_ref(), &body)
}

fn cmd_tables(args: &TablesArgs) -> Result<()> {
    emit(args.output.as_ref(), &report::tables_json()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Exact(a) => cmd_exact(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Frames(a) => cmd_frames(a),
        Command::Tables(a) => cmd_tables(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
