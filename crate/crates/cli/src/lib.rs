//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams and exit code.
//!
//! Exit codes: 0 when a command succeeds (or a query is solved), 2 when a
//! query is infeasible, 1 on usage, input, or I/O errors.

mod bench;
mod commands;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use bench::{BenchRow, IntList};

#[derive(Parser, Debug)]
#[command(
    name = "stgq",
    version,
    about = "Social and social-temporal group queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random graph and schedule.
    Gen(GenArgs),
    /// Solve a social group query exactly.
    SolveSgq(SolveSgqArgs),
    /// Solve a social-temporal group query exactly.
    SolveStgq(SolveStgqArgs),
    /// Run a reference baseline.
    Baseline(BaselineArgs),
    /// Compare STGArrange against PCArrange on one instance.
    Compare(CompareArgs),
    /// Write the integer program as LP text.
    ExportIp(ExportIpArgs),
    /// Sweep a parameter grid and emit CSV.
    Bench(bench::BenchArgs),
}

#[derive(Args, Debug, Clone)]
struct GraphArgs {
    /// Graph file (`u v weight` per line).
    #[arg(long)]
    graph: PathBuf,
    /// Initiator vertex; defaults to the `# initiator` comment of the graph file.
    #[arg(long, short = 'q')]
    initiator: Option<String>,
    /// Group size, initiator included.
    #[arg(short = 'p', long = "attendees")]
    p: usize,
    /// Social radius in edges.
    #[arg(short = 's', long = "radius", default_value_t = 1)]
    s: usize,
}

#[derive(Args, Debug, Clone)]
struct AcquaintanceArgs {
    /// Most non-neighbors any attendee may have in the group.
    #[arg(short = 'k', long = "acquaintance", default_value_t = 0)]
    k: usize,
    /// Starting exponent of the interior-unfamiliarity condition.
    #[arg(long, default_value_t = stgq_core::sgq::DEFAULT_THETA0)]
    theta0: u32,
}

#[derive(Args, Debug, Clone)]
struct ScheduleArgs {
    /// Schedule file (`slots T`, then `u 0110...`).
    #[arg(long)]
    schedule: PathBuf,
    /// Activity length in slots.
    #[arg(short = 'm', long = "length")]
    m: usize,
    #[arg(long, default_value_t = stgq_core::stgq::DEFAULT_PHI0)]
    phi0: u32,
    #[arg(long, default_value_t = stgq_core::stgq::DEFAULT_PHI_MAX)]
    phi_max: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Prune {
    Distance,
    Acquaintance,
    Exterior,
    Availability,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(short = 'n', long, default_value_t = 100)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Model::Attachment)]
    model: Model,
    #[arg(long, default_value_t = 3)]
    edges_per_vertex: usize,
    #[arg(long, default_value_t = 1)]
    weight_min: u32,
    #[arg(long, default_value_t = 100)]
    weight_max: u32,
    /// Number of time slots.
    #[arg(long, default_value_t = 24)]
    horizon: usize,
    #[arg(long, default_value_t = 0.6)]
    avail_prob: f64,
    /// Probability that a slot repeats the previous slot's state.
    #[arg(long, default_value_t = 0.7)]
    run_bias: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Where to write the graph file.
    #[arg(long = "graph-out")]
    graph_out: PathBuf,
    /// Where to write the schedule file.
    #[arg(long = "schedule-out")]
    schedule_out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Attachment,
    Uniform,
}

#[derive(Args, Debug)]
struct SolveSgqArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    acq: AcquaintanceArgs,
    /// Pruning strategies to switch off.
    #[arg(long, value_enum, value_delimiter = ',')]
    disable: Vec<Prune>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SolveStgqArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    acq: AcquaintanceArgs,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long, value_enum, value_delimiter = ',')]
    disable: Vec<Prune>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Enumerate every candidate group (social query).
    Brute,
    /// Solve one social query per start slot (temporal query).
    PerSlot,
    /// Greedy phone-call imitation (temporal query, ignores -k).
    PcArrange,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    acq: AcquaintanceArgs,
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(short = 'm', long = "length")]
    m: Option<usize>,
    /// Largest number of groups the brute-force enumeration may visit.
    #[arg(long, default_value_t = stgq_core::baselines::DEFAULT_ENUMERATION_CAP)]
    cap: u128,
    /// Use brute force instead of the exact search inside each slot.
    #[arg(long)]
    brute_slots: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Sgq,
    Stgq,
}

#[derive(Args, Debug)]
struct ExportIpArgs {
    #[arg(long, value_enum)]
    variant: Variant,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(short = 'k', long = "acquaintance", default_value_t = 0)]
    k: usize,
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(short = 'm', long = "length")]
    m: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Everything that ends a command with exit code 1.
#[derive(Debug)]
pub enum CliError {
    Core(stgq_core::Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Usage(String),
    Output(String),
    /// The reader of standard output went away; not reported.
    BrokenPipe,
}

impl CliError {
    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.tag(),
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Output(_) | CliError::BrokenPipe => "output",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(msg) | CliError::Output(msg) => f.write_str(msg),
            CliError::BrokenPipe => f.write_str("broken pipe"),
        }
    }
}

impl From<stgq_core::Error> for CliError {
    fn from(e: stgq_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::BrokenPipe;
        }
        CliError::Output(e.to_string())
    }
}

/// How a successful command ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Done,
    Infeasible,
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().next().unwrap_or_default();
                    let msg = first.strip_prefix("error: ").unwrap_or(first);
                    let _ = writeln!(err, "error[usage]: {msg}");
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a, out),
        Command::SolveSgq(a) => commands::solve_sgq(a, out),
        Command::SolveStgq(a) => commands::solve_stgq(a, out),
        Command::Baseline(a) => commands::baseline(a, out),
        Command::Compare(a) => commands::compare(a, out),
        Command::ExportIp(a) => commands::export_ip(a, out),
        Command::Bench(a) => bench::run(a, out),
    };
    match result {
        Ok(Status::Done) => 0,
        Ok(Status::Infeasible) => 2,
        Err(CliError::BrokenPipe) => 0,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.tag());
            1
        }
    }
}
