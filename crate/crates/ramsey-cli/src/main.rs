//! Batch front end over the engine: one command per invocation, tables or
//! JSON on standard output, diagnostics on standard error.
//!
//! Exit codes: 0 success (including an arrow relation that fails, which is
//! a finished determination), 2 invalid input, 3 a size cap or search
//! budget was exceeded, 4 a degree search that ended UNDETERMINED.

mod cache;
mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "ramsey",
    version,
    about = "Exact Ramsey-degree calculations on small graphs",
    after_help = "Inputs are files or '-' for standard input. Commands taking several \
inputs name them, comma separated: --input z=k6.g6,y=k3.g6,x=k2.g6 \
(sim-arrow repeats p= for each pattern; alpha takes host= and x=, the host \
always in ocg-json). Paths containing commas are not supported."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Color universe size.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Input path(s); see --help for multi-part inputs.
    #[arg(long, global = true)]
    input: Option<String>,

    /// Encoding of graph inputs.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Graph6)]
    format: FormatArg,

    /// Number of colors in an arrow query or degree search.
    #[arg(long, global = true)]
    k: Option<usize>,

    /// Color tolerance of an arrow query; omitted means monochromatic.
    #[arg(long, global = true)]
    t: Option<usize>,

    /// Size cap for enum listings and degree-search targets.
    #[arg(long, global = true)]
    max_size: Option<usize>,

    /// Host size cap for degree-search; defaults to --max-size + 2.
    #[arg(long, global = true)]
    max_host_size: Option<usize>,

    /// Node budget for coloring searches.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Cache directory; hits replay recorded bytes and exit codes.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Tsv)]
    output: OutputArg,

    /// Worker threads; 0 keeps the machine default. Output bytes do not
    /// depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Reserved for future randomized subcommands; accepted and unused.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Extension family for extensions, gadget and alpha.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Ordered)]
    mode: ModeArg,

    /// Structure class for member, enum and degree-search.
    #[arg(long, global = true, value_enum)]
    class: Option<ClassArg>,

    /// Part count cap for report-elementary.
    #[arg(long, global = true, default_value_t = 3)]
    max_parts: usize,

    /// Part size cap for report-elementary.
    #[arg(long, global = true, default_value_t = 2)]
    max_part_size: usize,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq, Debug)]
enum Command {
    /// Count proper colorings of the ordered input graph.
    Sigma,
    /// Count order-and-coloring expansions of the input graph up to
    /// isomorphism.
    Tau,
    /// Order-expansion degree |X|! / |Aut(X)|.
    Autdeg,
    /// Chromatic number of the input graph.
    Chrom,
    /// Test membership of the input in a class.
    Member,
    /// List class members up to --max-size vertices.
    Enum,
    /// List the extension catalog of the input graph.
    Extensions,
    /// Decide whether every k-coloring of x-copies in z admits a y-copy
    /// spanning at most t colors.
    Arrow,
    /// Simultaneous arrow over several patterns at once.
    SimArrow,
    /// Build the disjoint-union gadget hosting every extension of the
    /// input graph.
    Gadget,
    /// Extension-type coloring of the x-copies inside a colored host.
    Alpha,
    /// Bound the Ramsey degree of the input graph within size caps.
    DegreeSearch,
    /// Closed forms against enumeration for complete multipartite bases.
    ReportElementary,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Sigma => "sigma",
            Command::Tau => "tau",
            Command::Autdeg => "autdeg",
            Command::Chrom => "chrom",
            Command::Member => "member",
            Command::Enum => "enum",
            Command::Extensions => "extensions",
            Command::Arrow => "arrow",
            Command::SimArrow => "sim-arrow",
            Command::Gadget => "gadget",
            Command::Alpha => "alpha",
            Command::DegreeSearch => "degree-search",
            Command::ReportElementary => "report-elementary",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum FormatArg {
    Graph6,
    Edges,
    OcgJson,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum OutputArg {
    Tsv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum ModeArg {
    /// Proper colorings of the ordered base.
    Ordered,
    /// Orders with nondecreasing proper colorings, up to isomorphism.
    Monotone,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum ClassArg {
    NColorable,
    NColorableOrdered,
    NChromatic,
    NChromaticOrdered,
    KnFree,
    ColoredOrdered,
    MonotoneColoredOrdered,
}

/// What a finished command prints and how it exits. Exit 4 (UNDETERMINED
/// degree search) still carries a report, so it travels here rather than
/// through CliError.
pub struct Outcome {
    pub stdout: String,
    pub exit: u8,
}

pub struct CliError {
    pub exit: u8,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> CliError {
        CliError {
            exit: 2,
            message: message.into(),
        }
    }
}

impl From<ramsey_core::Error> for CliError {
    fn from(e: ramsey_core::Error) -> CliError {
        let exit = match e {
            ramsey_core::Error::SizeCapExceeded { .. }
            | ramsey_core::Error::BudgetExceeded { .. } => 3,
            _ => 2,
        };
        CliError {
            exit,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            eprintln!("ramsey: could not size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit)
        }
        Err(err) => {
            eprintln!("ramsey: {}", err.message);
            ExitCode::from(err.exit)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let prepared = commands::prepare(cli)?;
    let key = cache::entry_key(&prepared.key_material);
    if let Some(dir) = &cli.cache {
        if let Some(hit) = cache::lookup(dir, &key) {
            return Ok(hit);
        }
    }
    let outcome = commands::execute(prepared.job, cli.output)?;
    if let Some(dir) = &cli.cache {
        cache::store(dir, &key, &prepared.key_material, &outcome)?;
    }
    Ok(outcome)
}
