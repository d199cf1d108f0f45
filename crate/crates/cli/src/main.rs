use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use k4perc::asymptotics::{proof_constants, threshold_p};
use k4perc::bootstrap::{k4_closure_naive, percolates};
use k4perc::clique_process::k4_closure_fast;
use k4perc::enumeration::{census_table, enumerate_census, records_to_csv, verify_count_bounds, EnumerationError};
use k4perc::experiments::{
    largest_clique_scan, percolation_probability_scan, rows_to_csv, rows_to_json, ExperimentConfig,
    ExperimentError, DEFAULT_MAX_N, DEFAULT_MEMORY_LIMIT,
};
use k4perc::io::{edge_list_string, read_edge_list, EdgeListError};
use k4perc::structure::core_decomposition;
use k4perc::{sample_gnp, DuplicatePolicy, Graph};

const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_GUARD: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "k4perc", version, about = "K4-bootstrap percolation toolkit")]
struct Cli {
    /// Master seed for sampling and scans.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (0 = all cores). Never changes output.
    #[arg(long, global = true, env = "K4PERC_THREADS", default_value_t = 0)]
    threads: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Reject duplicate edges on input and turn failed checks into exit 1.
    #[arg(long, global = true)]
    strict: bool,
    /// Record per-trial wall time (makes scan output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Naive,
    Fast,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample G(n, p) and write it as an edge list.
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
        p: Option<f64>,
        /// Use p = sqrt(alpha / (n log n)).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// K4-bootstrap closure of an edge list.
    Closure {
        #[arg(long, value_enum, default_value_t = Algo::Fast)]
        algo: Algo,
        /// Edge list (stdin if omitted).
        input: Option<PathBuf>,
    },
    /// Exit 0 if the graph percolates, 1 if not.
    Percolate { input: Option<PathBuf> },
    /// Seed-edge / 3-core decomposition of an irreducible percolating graph.
    Core { input: Option<PathBuf> },
    /// Census of irreducible percolating graphs.
    Enumerate {
        #[arg(long)]
        k: usize,
        /// Enumerate k..=k_max (defaults to k).
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        ell_max: usize,
        /// Also check the labelled counting bound and print it to stderr.
        #[arg(long)]
        bounds: bool,
    },
    /// Numeric constants with spot checks.
    Constants {
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
    /// Percolation indicator per (alpha, trial).
    ScanThreshold(ScanArgs),
    /// Largest percolating clique over log n, with summaries.
    ScanClique(ScanArgs),
    /// Seed-edge counts per (alpha, trial).
    SeedCensus {
        #[command(flatten)]
        scan: ScanArgs,
        /// Edges examined per trial (0 = all).
        #[arg(long, default_value_t = 0)]
        cap: usize,
    },
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated alpha grid.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
    /// Memory guard in bytes.
    #[arg(long, default_value_t = DEFAULT_MEMORY_LIMIT)]
    memory_limit: u64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Guard(String),
    Negative(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => EXIT_FALSE,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Guard(_) => EXIT_GUARD,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Guard(m) | Failure::Negative(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<EdgeListError> for Failure {
    fn from(e: EdgeListError) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::ResourceGuard { .. } | ExperimentError::VertexCap { .. } => Failure::Guard(e.to_string()),
            ExperimentError::InvalidConfig(_) | ExperimentError::ThreadPool(_) => Failure::Usage(e.to_string()),
            ExperimentError::OracleMismatch { .. } => Failure::Negative(e.to_string()),
        }
    }
}

impl From<EnumerationError> for Failure {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::KOutOfRange(_) | EnumerationError::TooLargeForCanonical(_) => {
                Failure::Guard(e.to_string())
            }
            EnumerationError::Graph(_) => Failure::Usage(e.to_string()),
        }
    }
}

struct Ctx {
    out: Option<PathBuf>,
    format: Format,
    strict: bool,
}

impl Ctx {
    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => File::create(path)?.write_all(text.as_bytes())?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn read_graph(&self, input: &Option<PathBuf>) -> Result<Graph, Failure> {
        let policy = if self.strict {
            DuplicatePolicy::Strict
        } else {
            DuplicatePolicy::Lenient
        };
        let reader: Box<dyn Read> = match input {
            Some(path) => Box::new(File::open(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?),
            None => Box::new(io::stdin()),
        };
        Ok(read_edge_list(BufReader::new(reader), policy)?)
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn scan_config(cli: &Cli, s: &ScanArgs) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(s.n, s.alpha.clone(), s.trials, cli.seed);
    cfg.timing = cli.timing;
    cfg.max_n = s.max_n;
    cfg.memory_limit = s.memory_limit;
    cfg
}

fn emit_rows(ctx: &Ctx, rows: &[k4perc::experiments::ScanRow]) -> Result<(), Failure> {
    match ctx.format {
        Format::Csv => ctx.emit(&rows_to_csv(rows)),
        Format::Json => ctx.emit(&(rows_to_json(rows) + "\n")),
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let ctx = Ctx {
        out: cli.out.clone(),
        format: cli.format,
        strict: cli.strict,
    };
    match &cli.cmd {
        Command::Gnp { n, p, alpha } => {
            let p = match (p, alpha) {
                (Some(p), _) => *p,
                (None, Some(a)) => threshold_p(*n as u64, *a),
                (None, None) => unreachable!("clap requires one of --p/--alpha"),
            };
            if *n > DEFAULT_MAX_N {
                return Err(Failure::Guard(format!("n = {n} exceeds the vertex cap {DEFAULT_MAX_N}")));
            }
            let g = sample_gnp(*n, p, cli.seed).map_err(|e| Failure::Usage(e.to_string()))?;
            ctx.emit(&edge_list_string(&g))
        }
        Command::Closure { algo, input } => {
            let g = ctx.read_graph(input)?;
            let c = match algo {
                Algo::Naive => k4_closure_naive(&g),
                Algo::Fast => k4_closure_fast(&g),
            };
            ctx.emit(&edge_list_string(&c))
        }
        Command::Percolate { input } => {
            let g = ctx.read_graph(input)?;
            let yes = percolates(&g);
            ctx.emit(if yes { "true\n" } else { "false\n" })?;
            if yes {
                Ok(())
            } else {
                Err(Failure::Negative(String::new()))
            }
        }
        Command::Core { input } => {
            let g = ctx.read_graph(input)?;
            let d = core_decomposition(&g).map_err(|e| Failure::Negative(e.to_string()))?;
            ctx.emit(&json(&d))
        }
        Command::Enumerate {
            k,
            k_max,
            ell_max,
            bounds,
        } => {
            let hi = k_max.unwrap_or(*k);
            if hi < *k {
                return Err(Failure::Usage(format!("--k-max {hi} is below --k {k}")));
            }
            let mut records = Vec::new();
            for kk in *k..=hi {
                records.extend(enumerate_census(kk, *ell_max)?);
            }
            match ctx.format {
                Format::Json => ctx.emit(&json(&records))?,
                Format::Csv => ctx.emit(&records_to_csv(&records))?,
            }
            eprint!("{}", census_table(&records));
            if *bounds {
                let report = verify_count_bounds(&records, 0.1);
                eprint!("{}", json(&report));
                if ctx.strict && !report.all_pass {
                    return Err(Failure::Negative("counting bound violated".into()));
                }
            }
            Ok(())
        }
        Command::Constants { k } => {
            let report = proof_constants(*k).map_err(|e| Failure::Usage(e.to_string()))?;
            ctx.emit(&json(&report))?;
            if ctx.strict && !report.all_pass {
                return Err(Failure::Negative("spot checks failed".into()));
            }
            Ok(())
        }
        Command::ScanThreshold(s) => {
            let rows = percolation_probability_scan(&scan_config(cli, s))?;
            emit_rows(&ctx, &rows)
        }
        Command::ScanClique(s) => {
            let scan = largest_clique_scan(&scan_config(cli, s))?;
            match ctx.format {
                Format::Json => ctx.emit(&json(&scan)),
                Format::Csv => emit_rows(&ctx, &scan.rows),
            }
        }
        Command::SeedCensus { scan, cap } => {
            let mut cfg = scan_config(cli, scan);
            cfg.seed_edges = true;
            cfg.seed_edge_cap = *cap;
            let rows = percolation_probability_scan(&cfg)?;
            emit_rows(&ctx, &rows)
        }
    }
}

fn run_cli<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: thread pool: {e}");
            return EXIT_USAGE;
        }
    }
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(f) => {
            if !f.message().is_empty() {
                eprintln!("error: {}", f.message());
            }
            f.code()
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run_cli(std::env::args_os()))
}
