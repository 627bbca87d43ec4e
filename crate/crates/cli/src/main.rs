//! `lowdeg`: command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed or I/O error on output,
//! 2 unreadable or malformed input, 3 input violates a precondition (e.g. not
//! 2-edge-connected), 4 internal invariant failure.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lowdeg_core::bench::run_bench;
use lowdeg_core::builder::{read_tree, write_tree};
use lowdeg_core::generators::{gen_family, Family};
use lowdeg_core::oracle::{exhaustive_small_sweep, oracle_check, write_verdicts_csv, SweepError};
use lowdeg_core::verify::check_degree_bound;
use lowdeg_core::{compute_edge_dfs, low_degree_spanning_tree, Graph, SolveOptions};

#[derive(Parser)]
#[command(
    name = "lowdeg",
    version,
    about = "Low-degree spanning trees of 2-edge-connected graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a spanning tree with deg_T(v) <= ceil(deg_G(v)/2) + 1.
    Solve(SolveArgs),
    /// Check a tree file against a graph and print the degree report as CSV.
    Verify(VerifyArgs),
    /// Print the edge DFS of a graph.
    Dfs(DfsArgs),
    /// Generate a graph.
    Gen(GenArgs),
    /// Brute-force checks on small graphs.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Time the algorithm on random graphs of growing size.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Start vertex of the edge DFS.
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Tree root (defaults to the start vertex).
    #[arg(long)]
    root: Option<usize>,
    /// Skip the 2-edge-connectivity check.
    #[arg(long)]
    force: bool,
    /// Enable per-step invariant assertions.
    #[arg(long)]
    checked: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file.
    #[arg(short, long)]
    input: PathBuf,
    /// Tree file as written by `solve`.
    #[arg(short, long)]
    tree: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DfsArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    start: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Cycle,
    Complete,
    Wheel,
    Hypercube,
    Theta,
    #[value(name = "random-2ec")]
    Random2ec,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: FamilyName,
    /// Vertex count (cycle, complete, random-2ec) or rim size (wheel).
    #[arg(long)]
    n: Option<usize>,
    /// Hypercube dimension.
    #[arg(long)]
    dim: Option<u32>,
    /// Theta: number of paths.
    #[arg(long)]
    paths: Option<usize>,
    /// Theta: edges per path.
    #[arg(long)]
    len: Option<usize>,
    /// Random-2ec: chords beyond the Hamiltonian cycle.
    #[arg(long, default_value_t = 0)]
    extra: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Every 2-edge-connected simple graph on at most N vertices.
    Sweep {
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate all spanning trees of one graph.
    Check {
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated target edge counts (default 2^17 ..= 2^22).
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(1, e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Verify(args) => verify(args),
        Command::Dfs(args) => dfs(args),
        Command::Gen(args) => generate(args),
        Command::Oracle { command } => oracle(command),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lowdeg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let file = File::open(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    Graph::parse(BufReader::new(file))
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn solve(args: SolveArgs) -> CmdResult {
    let g = read_graph(&args.input)?;
    let opts = SolveOptions {
        start: args.start,
        root: args.root,
        force: args.force,
        checked: args.checked,
    };
    let solution = low_degree_spanning_tree(&g, opts)
        .map_err(|e| Failure::new(if e.is_precondition() { 3 } else { 4 }, e))?;
    let mut out = open_output(args.output.as_deref())?;
    write_tree(&mut out, &g, &solution.tree, &solution.report)?;
    out.flush()?;
    eprintln!(
        "c ok: {} tree edges, worst slack {}",
        solution.tree.edges.len(),
        solution.report.worst_slack.unwrap_or(0)
    );
    Ok(())
}

fn verify(args: VerifyArgs) -> CmdResult {
    let g = read_graph(&args.input)?;
    let file = File::open(&args.tree)
        .map_err(|e| Failure::new(2, format!("{}: {e}", args.tree.display())))?;
    let tree = read_tree(BufReader::new(file), &g)
        .map_err(|e| Failure::new(2, format!("{}: {e}", args.tree.display())))?;
    let report = match check_degree_bound(&g, &tree) {
        Ok(r) => r,
        Err(defect) => {
            eprintln!("c status: invalid tree: {defect}");
            return Err(Failure::new(1, "verification failed"));
        }
    };
    let mut out = open_output(args.output.as_deref())?;
    report.write_csv(&mut out)?;
    out.flush()?;
    let worst = report.worst_slack.unwrap_or(0);
    if report.ok {
        eprintln!("c status: ok worst_slack={worst}");
        Ok(())
    } else {
        eprintln!("c status: bound exceeded worst_slack={worst}");
        Err(Failure::new(1, "verification failed"))
    }
}

fn dfs(args: DfsArgs) -> CmdResult {
    let g = read_graph(&args.input)?;
    let list = compute_edge_dfs(&g, args.start).map_err(|e| Failure::new(3, e))?;
    let mut out = open_output(args.output.as_deref())?;
    list.write_to(&mut out)?;
    out.flush()?;
    Ok(())
}

fn generate(args: GenArgs) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::new(2, format!("this family needs --{flag}")))
    };
    let family = match args.family {
        FamilyName::Cycle => Family::Cycle {
            n: need(args.n, "n")?,
        },
        FamilyName::Complete => Family::Complete {
            n: need(args.n, "n")?,
        },
        FamilyName::Wheel => Family::Wheel {
            rim: need(args.n, "n")?,
        },
        FamilyName::Hypercube => Family::Hypercube {
            dim: args
                .dim
                .ok_or_else(|| Failure::new(2, "this family needs --dim"))?,
        },
        FamilyName::Theta => Family::Theta {
            paths: need(args.paths, "paths")?,
            len: need(args.len, "len")?,
        },
        FamilyName::Random2ec => Family::Random2ec {
            n: need(args.n, "n")?,
            extra: args.extra,
            seed: args.seed,
        },
    };
    let g = gen_family(&family).map_err(|e| Failure::new(2, e))?;
    let mut out = open_output(args.output.as_deref())?;
    g.write_to(&mut out)?;
    out.flush()?;
    Ok(())
}

fn oracle(command: OracleCommand) -> CmdResult {
    match command {
        OracleCommand::Sweep { max_n, output } => {
            let summary = exhaustive_small_sweep(max_n).map_err(|e| match e {
                SweepError::TooLarge(_) => Failure::new(2, e),
                SweepError::Failure { .. } => Failure::new(4, e),
            })?;
            let mut out = open_output(output.as_deref())?;
            write_verdicts_csv(&mut out, &summary.verdicts)?;
            out.flush()?;
            eprintln!(
                "c sweep max_n={}: {} graphs examined, {} 2-edge-connected, {} runs, 0 failures",
                summary.max_n, summary.graphs_examined, summary.graphs_processed, summary.runs
            );
            Ok(())
        }
        OracleCommand::Check { graph, output } => {
            let g = read_graph(&graph)?;
            let verdict = oracle_check(&g).map_err(|e| match e {
                lowdeg_core::oracle::OracleError::Refuted { .. } => Failure::new(4, e),
                _ => Failure::new(3, e),
            })?;
            let mut out = open_output(output.as_deref())?;
            write_verdicts_csv(&mut out, std::slice::from_ref(&verdict))?;
            out.flush()?;
            if !verdict.two_edge_connected {
                eprintln!("c graph is not 2-edge-connected; algorithm not run");
            }
            Ok(())
        }
    }
}

fn bench(args: BenchArgs) -> CmdResult {
    let sizes = if args.sizes.is_empty() {
        (17..=22).map(|e| 1usize << e).collect()
    } else {
        args.sizes
    };
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Failure::new(2, "sizes must be ascending"));
    }
    let report = run_bench(&sizes, args.seed, args.reps);
    let mut out = open_output(args.output.as_deref())?;
    report.write_csv(&mut out)?;
    out.flush()?;
    for (size, row) in sizes.iter().zip(&report.rows) {
        if let Err(e) = row {
            eprintln!("c size {size} failed: {e}");
        }
    }
    match report.slope {
        Some(s) => eprintln!("c slope={s:.4}"),
        None => eprintln!("c slope omitted (fewer than two rows)"),
    }
    Ok(())
}
