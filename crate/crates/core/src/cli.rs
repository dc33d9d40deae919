//! Command-line surface: argument parsing into a validated [`RunConfig`] and
//! command execution.
//!
//! Exit codes: 0 success, 64 usage, 65 malformed input data, 70 internal
//! contract violation, 74 I/O failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::bench::{generate_graph, run_benchmark, sample_seeds, write_bench_csv, BenchConfig, BenchError, GraphModel};
use crate::graph::{export_dot, influence_subgraph, read_edge_list_file, write_edge_list, EdgeListOptions, Graph, GraphError, NodeId, SeedSet};
use crate::immunization::{immunize, Algorithm, DavaVariant, ImmunizationError, ImmunizeOptions, Scope};
use crate::labels::{load_seed_labels, SeedLabelError};
use crate::report::{write_report, ImmunizationRecord, Report, ReportError, SpreadRecord};
use crate::spectral::SpectralError;
use crate::spread::{saved_nodes, simulate_ic, CascadeParams, SpreadError};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_CONTRACT: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Contract(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Contract(_) => EXIT_CONTRACT,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Parse { .. } | GraphError::Empty => CliError::Data(e.to_string()),
            GraphError::Io(_) => CliError::Io(e.to_string()),
            GraphError::NodeOutOfRange { .. } => CliError::Contract(e.to_string()),
        }
    }
}

impl From<SeedLabelError> for CliError {
    fn from(e: SeedLabelError) -> Self {
        match e {
            SeedLabelError::InvalidThreshold(_) => CliError::Usage(e.to_string()),
            SeedLabelError::Graph(g) => g.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SpreadError> for CliError {
    fn from(e: SpreadError) -> Self {
        match e {
            SpreadError::InvalidParams(_) => CliError::Usage(e.to_string()),
            SpreadError::Graph(g) => g.into(),
            SpreadError::SeedBlocked(_) => CliError::Contract(e.to_string()),
        }
    }
}

impl From<ImmunizationError> for CliError {
    fn from(e: ImmunizationError) -> Self {
        match e {
            ImmunizationError::NoSeeds => CliError::Usage(e.to_string()),
            ImmunizationError::Graph(g) => g.into(),
            ImmunizationError::Spectral(SpectralError::InvalidConfig(_)) => CliError::Usage(e.to_string()),
            ImmunizationError::Spectral(_) => CliError::Contract(e.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Io(_) => CliError::Io(e.to_string()),
            ReportError::Format(_) | ReportError::UnknownId(_) => CliError::Data(e.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::InvalidKList(_) | BenchError::InvalidParam(_) => CliError::Usage(e.to_string()),
            BenchError::Spread(s) => s.into(),
            BenchError::Graph(g) => g.into(),
            BenchError::Csv(_) => CliError::Io(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "immunet", version, about = "Block toxic spread in interaction graphs under a node budget")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Edge list, one interaction per line.
    #[arg(long)]
    graph: PathBuf,
    /// Field delimiter; any whitespace when omitted.
    #[arg(long)]
    delimiter: Option<char>,
}

#[derive(Debug, Args)]
struct SeedArgs {
    /// Seed-label CSV with header `id,score`.
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Minimum detector score for a user to count as toxic.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct CascadeArgs {
    /// Edge activation probability.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
}

#[derive(Debug, Args)]
struct StrategyArgs {
    #[arg(long, default_value = "full")]
    scope: Scope,
    #[arg(long = "dava-variant", default_value = "iterative")]
    dava_variant: DavaVariant,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Select k nodes to block.
    Immunize {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        seeds: SeedArgs,
        #[arg(long)]
        algo: Algorithm,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run independent-cascade spread from the seeds.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        seeds: SeedArgs,
        /// Comma-separated ids to block.
        #[arg(long, value_delimiter = ',', conflicts_with = "result")]
        blocked: Vec<String>,
        /// Immunization result whose selection is blocked.
        #[arg(long)]
        result: Option<PathBuf>,
        #[command(flatten)]
        cascade: CascadeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Saved nodes of immunization results, or of algorithms run on the spot.
    Evaluate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        seeds: SeedArgs,
        #[arg(long = "result")]
        results: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        algo: Vec<Algorithm>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[command(flatten)]
        cascade: CascadeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time every algorithm over a list of budgets.
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        seeds: SeedArgs,
        #[arg(long, value_delimiter = ',')]
        algo: Vec<Algorithm>,
        #[arg(long = "k-list", value_delimiter = ',', required = true)]
        k_list: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[command(flatten)]
        cascade: CascadeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write `algorithm,k,elapsed_seconds,saved_nodes` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// DOT view of selected nodes and their neighborhood.
    Subgraph {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',', conflicts_with = "result")]
        nodes: Vec<String>,
        #[arg(long)]
        result: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic edge list (and optionally a seed-label file).
    Generate {
        /// Output edge list.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        model: GraphModel,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        param: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        seeds_out: Option<PathBuf>,
        #[arg(long, default_value_t = 25)]
        seed_count: usize,
    },
}

/// Nodes named either inline or through an immunization result file.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeSource {
    Ids(Vec<String>),
    ResultFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Immunize { algorithm: Algorithm, k: usize },
    Simulate { blocked: NodeSource },
    Evaluate { results: Vec<PathBuf>, algorithms: Vec<Algorithm>, k: Option<usize> },
    Bench { algorithms: Vec<Algorithm>, k_list: Vec<usize>, repetitions: usize, csv: Option<PathBuf> },
    Subgraph { nodes: NodeSource, radius: usize },
    Generate { model: GraphModel, n: usize, param: f64, seed: u64, seeds_out: Option<PathBuf>, seed_count: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub graph_path: PathBuf,
    pub delimiter: Option<char>,
    pub seeds_path: Option<PathBuf>,
    pub threshold: f64,
    pub cascade: CascadeParams,
    pub scope: Scope,
    pub dava_variant: DavaVariant,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn new(command: Command, graph: GraphArgs) -> Self {
        Self {
            command,
            graph_path: graph.graph,
            delimiter: graph.delimiter,
            seeds_path: None,
            threshold: 0.5,
            cascade: CascadeParams::default(),
            scope: Scope::Full,
            dava_variant: DavaVariant::Iterative,
            out: None,
        }
    }

    fn seeds(mut self, seeds: SeedArgs) -> Self {
        self.seeds_path = seeds.seeds;
        self.threshold = seeds.threshold;
        self
    }

    fn cascade(mut self, c: CascadeArgs) -> Self {
        self.cascade = CascadeParams { p: c.p, runs: c.runs, master_seed: c.master_seed };
        self
    }

    fn strategy(mut self, s: StrategyArgs) -> Self {
        self.scope = s.scope;
        self.dava_variant = s.dava_variant;
        self
    }

    fn out(mut self, out: Option<PathBuf>) -> Self {
        self.out = out;
        self
    }

    fn needs_seeds(&self) -> bool {
        match &self.command {
            Command::Immunize { algorithm, .. } => *algorithm == Algorithm::Dava,
            Command::Simulate { .. } | Command::Evaluate { .. } | Command::Bench { .. } => true,
            Command::Subgraph { .. } | Command::Generate { .. } => false,
        }
    }

    fn validate(self) -> Result<Self, CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.graph_path.as_os_str().is_empty() {
            return usage("--graph must not be empty".into());
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return usage(format!("--threshold {} outside [0, 1]", self.threshold));
        }
        if self.seeds_path.as_ref().is_some_and(|p| p.as_os_str().is_empty()) {
            return usage("--seeds must not be empty".into());
        }
        if self.needs_seeds() && self.seeds_path.is_none() {
            return usage("this command requires --seeds".into());
        }
        if let Err(e) = self.cascade.validate() {
            return usage(e.to_string());
        }
        match &self.command {
            Command::Evaluate { results, algorithms, k } => {
                if results.is_empty() && algorithms.is_empty() {
                    return usage("evaluate needs --result files or --algo with --k".into());
                }
                if !algorithms.is_empty() && k.is_none() {
                    return usage("--algo requires --k".into());
                }
            }
            Command::Bench { k_list, repetitions, .. } => {
                if k_list.contains(&0) || k_list.windows(2).any(|w| w[0] >= w[1]) {
                    return usage(format!("--k-list must be positive and strictly increasing, got {k_list:?}"));
                }
                if *repetitions == 0 {
                    return usage("--repetitions must be at least 1".into());
                }
            }
            Command::Subgraph { nodes: NodeSource::Ids(ids), .. } if ids.is_empty() => {
                return usage("subgraph needs --nodes or --result".into());
            }
            _ => {}
        }
        Ok(self)
    }
}

/// Parses `argv` (program name first). Help and version requests surface as
/// `Err(Ok(text))`; every other failure is a usage error.
pub fn parse_command<I, T>(argv: I) -> Result<RunConfig, Result<String, CliError>>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Ok(e.to_string()),
        _ => Err(CliError::Usage(e.to_string())),
    })?;
    let config = match cli.command {
        CliCommand::Immunize { graph, seeds, algo, k, strategy, out } => RunConfig::new(Command::Immunize { algorithm: algo, k: k as usize }, graph)
            .seeds(seeds)
            .strategy(strategy)
            .out(out),
        CliCommand::Simulate { graph, seeds, blocked, result, cascade, out } => {
            let blocked = match result {
                Some(p) => NodeSource::ResultFile(p),
                None => NodeSource::Ids(blocked),
            };
            RunConfig::new(Command::Simulate { blocked }, graph).seeds(seeds).cascade(cascade).out(out)
        }
        CliCommand::Evaluate { graph, seeds, results, algo, k, strategy, cascade, out } => {
            RunConfig::new(Command::Evaluate { results, algorithms: algo, k: k.map(|k| k as usize) }, graph)
                .seeds(seeds)
                .strategy(strategy)
                .cascade(cascade)
                .out(out)
        }
        CliCommand::Bench { graph, seeds, algo, k_list, repetitions, strategy, cascade, out, csv } => {
            let algorithms = if algo.is_empty() { Algorithm::ALL.to_vec() } else { algo };
            RunConfig::new(Command::Bench { algorithms, k_list, repetitions, csv }, graph)
                .seeds(seeds)
                .strategy(strategy)
                .cascade(cascade)
                .out(out)
        }
        CliCommand::Subgraph { graph, nodes, result, radius, out } => {
            let nodes = match result {
                Some(p) => NodeSource::ResultFile(p),
                None => NodeSource::Ids(nodes),
            };
            RunConfig::new(Command::Subgraph { nodes, radius }, graph).out(out)
        }
        CliCommand::Generate { graph, model, n, param, seed, seeds_out, seed_count } => RunConfig::new(
            Command::Generate { model, n, param, seed, seeds_out, seed_count },
            GraphArgs { graph, delimiter: None },
        ),
    };
    config.validate().map_err(Err)
}

/// Parses and runs, returning the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_command(argv) {
        Ok(config) => match run(&config) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Err(Ok(text)) => {
            print!("{text}");
            0
        }
        Err(Err(e)) => {
            eprint!("{e}");
            if !e.to_string().ends_with('\n') {
                eprintln!();
            }
            e.exit_code()
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn emit(report: &Report, path: Option<&Path>) -> Result<(), CliError> {
    let mut out = open_output(path)?;
    write_report(report, &mut out)?;
    out.flush()?;
    Ok(())
}

fn load_graph(config: &RunConfig) -> Result<Graph, CliError> {
    let options = EdgeListOptions { delimiter: config.delimiter, ..Default::default() };
    read_edge_list_file(&config.graph_path, &options).map_err(|e| match e {
        GraphError::Io(io) => CliError::Io(format!("{}: {io}", config.graph_path.display())),
        other => other.into(),
    })
}

fn load_seeds(config: &RunConfig, g: &Graph) -> Result<Option<SeedSet>, CliError> {
    let Some(path) = &config.seeds_path else { return Ok(None) };
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(Some(load_seed_labels(file, g, config.threshold)?))
}

fn resolve_nodes(g: &Graph, source: &NodeSource) -> Result<Vec<NodeId>, CliError> {
    let ids: Vec<String> = match source {
        NodeSource::Ids(ids) => ids.clone(),
        NodeSource::ResultFile(path) => match crate::report::read_result(path)? {
            Report::Immunization(record) => record.selected.into_iter().map(|s| s.id).collect(),
            _ => return Err(CliError::Data(format!("{}: not an immunization result", path.display()))),
        },
    };
    let unknown: Vec<&str> = ids.iter().filter(|id| g.index_of(id).is_none()).map(String::as_str).collect();
    if !unknown.is_empty() {
        return Err(CliError::Data(format!("unknown node ids: {}", unknown.join(", "))));
    }
    Ok(ids.iter().filter_map(|id| g.index_of(id)).collect())
}

fn options(config: &RunConfig) -> ImmunizeOptions {
    ImmunizeOptions { scope: config.scope, dava_variant: config.dava_variant, ..Default::default() }
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    if let Command::Generate { model, n, param, seed, seeds_out, seed_count } = &config.command {
        return run_generate(config, *model, *n, *param, *seed, seeds_out.as_deref(), *seed_count);
    }

    let load_started = Instant::now();
    let g = load_graph(config)?;
    let load_seconds = load_started.elapsed().as_secs_f64();
    let seeds = load_seeds(config, &g)?;

    match &config.command {
        Command::Immunize { algorithm, k } => {
            let result = immunize(&g, seeds.as_ref(), *algorithm, *k, &options(config))?;
            emit(&Report::Immunization(ImmunizationRecord::from_result(&result, &g)), config.out.as_deref())
        }
        Command::Simulate { blocked } => {
            let seeds = seeds.expect("validated");
            let blocked = resolve_nodes(&g, blocked)?;
            let outcome = simulate_ic(&g, &seeds, &blocked, &config.cascade)?;
            emit(&Report::Spread(SpreadRecord::new(&outcome, &blocked, &g)), config.out.as_deref())
        }
        Command::Evaluate { results, algorithms, k } => {
            let seeds = seeds.expect("validated");
            let mut reports = Vec::new();
            for path in results {
                let record = match crate::report::read_result(path)? {
                    Report::Immunization(record) => record,
                    _ => return Err(CliError::Data(format!("{}: not an immunization result", path.display()))),
                };
                let result = record.to_result(&g)?;
                let mut saved = saved_nodes(&g, &seeds, &result.selected, &config.cascade)?;
                saved.algorithm = Some(result.algorithm);
                saved.k = result.k;
                reports.push(saved);
            }
            for &algorithm in algorithms {
                let k = k.expect("validated");
                let result = immunize(&g, Some(&seeds), algorithm, k, &options(config))?;
                let mut saved = saved_nodes(&g, &seeds, &result.selected, &config.cascade)?;
                saved.algorithm = Some(algorithm);
                saved.k = k;
                reports.push(saved);
            }
            emit(&Report::Evaluation { reports }, config.out.as_deref())
        }
        Command::Bench { algorithms, k_list, repetitions, csv } => {
            let seeds = seeds.expect("validated");
            let bench_config = BenchConfig { repetitions: *repetitions, evaluate_saved: true, options: options(config) };
            let mut report = run_benchmark(&g, &seeds, algorithms, k_list, &config.cascade, &bench_config)?;
            report.graph_meta.load_seconds = Some(load_seconds);
            if let Some(path) = csv {
                let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                write_bench_csv(&report, BufWriter::new(file))?;
            }
            emit(&Report::Bench(report), config.out.as_deref())
        }
        Command::Subgraph { nodes, radius } => {
            let selected = resolve_nodes(&g, nodes)?;
            let sub = influence_subgraph(&g, &selected, *radius)?;
            let highlights: Vec<NodeId> = selected.iter().filter_map(|&v| sub.index_of(g.external_id(v))).collect();
            let mut out = open_output(config.out.as_deref())?;
            out.write_all(export_dot(&sub, &highlights).as_bytes())?;
            out.flush()?;
            Ok(())
        }
        Command::Generate { .. } => unreachable!("handled above"),
    }
}

fn run_generate(
    config: &RunConfig,
    model: GraphModel,
    n: usize,
    param: f64,
    seed: u64,
    seeds_out: Option<&Path>,
    seed_count: usize,
) -> Result<(), CliError> {
    let g = generate_graph(model, n, param, seed)?;
    let file = File::create(&config.graph_path).map_err(|e| CliError::Io(format!("{}: {e}", config.graph_path.display())))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "# {model} n={n} param={param} seed={seed}")?;
    write_edge_list(&g, &mut out)?;
    out.flush()?;
    if let Some(path) = seeds_out {
        let toxic = if model == GraphModel::CaterpillarLocalSpread {
            vec![crate::bench::CATERPILLAR_SOURCE]
        } else {
            sample_seeds(&g, seed_count, seed ^ 0x5eed)
        };
        let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "id,score")?;
        for v in 0..g.node_count() {
            let score = if toxic.binary_search(&v).is_ok() { 0.9 } else { 0.1 };
            writeln!(w, "{},{score}", g.external_id(v))?;
        }
        w.flush()?;
    }
    Ok(())
}
