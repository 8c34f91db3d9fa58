use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bodybar::document::{bar_joint_document, canonical, digest, parse_graph, write_document};
use bodybar::error::{exit, CliError, Result};
use bodybar::matrix_csv::{field_matrix, to_csv};
use bodybar::report::{check_graph, rank_graph, CheckOptions, Report};
use bodybar::trace::{from_document, parse_trace, to_document, write_trace};
use bodybar::verify::{self, VerifyOptions};
use bodybar_core::constructions::{random_tight_graph, reduce_to_seed};
use bodybar_core::field::MERSENNE_61;
use bodybar_core::rigidity::{RankConfig, DEFAULT_TRIALS};
use bodybar_core::sparsity::{SparsityEngine, BRUTE_CAP, CONNECTED_CAP};
use bodybar_core::BodyBarOrbitGraph;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Generic rigidity of periodic body-bar frameworks on the fixed 3-torus.
#[derive(Parser)]
#[command(name = "bodybar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide minimal rigidity by sparsity counts and by generic rank.
    Check {
        /// Graph document, or `-` for stdin.
        file: PathBuf,
        /// Sparsity engine; picked by edge count when omitted.
        #[arg(long, value_enum)]
        engine: Option<Engine>,
        #[arg(long, default_value_t = BRUTE_CAP)]
        brute_cap: usize,
        #[arg(long, default_value_t = CONNECTED_CAP)]
        connected_cap: usize,
        #[command(flatten)]
        rank: RankArgs,
        /// Add wall-clock time to the report.
        #[arg(long)]
        timing: bool,
    },
    /// Generic rank of the induced bar-joint framework.
    Rank {
        file: PathBuf,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        timing: bool,
    },
    /// Print the induced bar-joint framework as a graph document.
    Induce { file: PathBuf },
    /// Dump the periodic rigidity matrix at random field positions.
    Matrix {
        file: PathBuf,
        #[arg(long, env = "BODYBAR_SEED", default_value_t = 1)]
        positions_seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = MERSENNE_61)]
        prime: u64,
    },
    /// Build a random tight sparse graph by edge pinches.
    Generate {
        #[arg(long)]
        bodies: usize,
        #[arg(long, env = "BODYBAR_SEED", default_value_t = 1)]
        seed: u64,
    },
    /// Reduce a tight sparse graph to one body by splitting off edges.
    Reduce {
        file: PathBuf,
        /// Seed for the rank oracle used on graphs above the brute-force cap.
        #[arg(long, env = "BODYBAR_SEED", default_value_t = 1)]
        seed: u64,
    },
    /// Rebuild a graph from a reduction trace.
    Replay { trace: PathBuf },
    /// Cross-check both verdicts and the constructions on a random corpus.
    Verify {
        #[arg(long, default_value_t = verify::DEFAULT_CORPUS_SIZE)]
        corpus_size: usize,
        #[arg(long, default_value_t = verify::DEFAULT_MAX_BODIES)]
        max_bodies: usize,
        #[arg(long, default_value_t = verify::DEFAULT_MAX_EDGES)]
        max_edges: usize,
        /// Generator outputs to reduce; a tenth of the corpus by default.
        #[arg(long)]
        generated: Option<usize>,
        #[arg(long, env = "BODYBAR_SEED", default_value_t = 1)]
        seed: u64,
        /// Worker threads; all cores by default.
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args)]
struct RankArgs {
    #[arg(long, default_value_t = MERSENNE_61)]
    prime: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u32,
    #[arg(long, env = "BODYBAR_SEED", default_value_t = 1)]
    seed: u64,
    /// Row-reduce over the rationals instead of a prime field.
    #[arg(long)]
    exact: bool,
}

impl RankArgs {
    fn config(&self) -> RankConfig {
        RankConfig { prime: self.prime, trials: self.trials, seed: self.seed, exact: self.exact }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    BruteForce,
    Connected,
    Matroid,
}

impl From<Engine> for SparsityEngine {
    fn from(e: Engine) -> Self {
        match e {
            Engine::BruteForce => SparsityEngine::BruteForce,
            Engine::Connected => SparsityEngine::Connected,
            Engine::Matroid => SparsityEngine::Matroid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(path).map(|b| bytes = b)
    };
    res.map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    Ok(bytes)
}

fn as_text(path: &Path, bytes: &[u8]) -> Result<String> {
    String::from_utf8(bytes.to_vec()).map_err(|e| CliError::Read {
        path: path.to_path_buf(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
    })
}

/// The parsed graph and the digest of its bytes.
fn load_graph(path: &Path) -> Result<(BodyBarOrbitGraph, String)> {
    let bytes = read_input(path)?;
    let graph = parse_graph(&as_text(path, &bytes)?).map_err(CliError::Malformed)?;
    Ok((graph, digest(&bytes)))
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source })
}

fn emit_report(mut report: Report, started: Option<Instant>) -> Result<i32> {
    report.timing_ms = started.map(|t| t.elapsed().as_secs_f64() * 1e3);
    emit(&report.to_json())?;
    Ok(report.exit_code)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Check { file, engine, brute_cap, connected_cap, rank, timing } => {
            let started = timing.then(Instant::now);
            let (g, digest) = load_graph(&file)?;
            let opts = CheckOptions { engine: engine.map(Into::into), brute_cap, connected_cap, rank: rank.config() };
            emit_report(check_graph(&g, digest, &opts)?, started)
        }
        Command::Rank { file, rank, timing } => {
            let started = timing.then(Instant::now);
            let (g, digest) = load_graph(&file)?;
            emit_report(rank_graph(&g, digest, &rank.config())?, started)
        }
        Command::Induce { file } => {
            let (g, _) = load_graph(&file)?;
            emit(&write_document(&bar_joint_document(&g)))?;
            Ok(exit::OK)
        }
        Command::Matrix { file, positions_seed, format: Format::Csv, prime } => {
            let (g, _) = load_graph(&file)?;
            emit(&to_csv(&field_matrix(&g, prime, positions_seed)?))?;
            Ok(exit::OK)
        }
        Command::Generate { bodies, seed } => {
            emit(&canonical(&random_tight_graph(bodies, seed)?))?;
            Ok(exit::OK)
        }
        Command::Reduce { file, seed } => {
            let (g, digest) = load_graph(&file)?;
            let trace = reduce_to_seed(&g, &RankConfig::with_seed(seed))?;
            emit(&write_trace(&to_document(&g, &trace, digest, seed)))?;
            Ok(exit::OK)
        }
        Command::Replay { trace } => {
            let bytes = read_input(&trace)?;
            let doc = parse_trace(&as_text(&trace, &bytes)?).map_err(CliError::Malformed)?;
            let trace = from_document(&doc).map_err(CliError::Malformed)?;
            emit(&canonical(&trace.replay()?))?;
            Ok(exit::OK)
        }
        Command::Verify { corpus_size, max_bodies, max_edges, generated, seed, threads } => {
            if max_bodies == 0 || max_edges == 0 {
                return Err(CliError::Usage("--max-bodies and --max-edges must be positive".into()));
            }
            let mut opts = VerifyOptions::new(corpus_size, max_bodies, seed);
            opts.max_edges = max_edges;
            if let Some(n) = generated {
                opts.generated = n;
            }
            if let Some(t) = threads {
                opts.threads = t;
            }
            let report = verify::run(&opts);
            emit(&report.to_json())?;
            Ok(report.exit_code)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT as u8 } else { exit::OK as u8 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
