use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use btkit::commands::{
    cmd_check, cmd_glue, cmd_levels, cmd_mahler, cmd_member, cmd_norm, cmd_omega, cmd_sheaf,
    cmd_tree, CmdOut,
};
use btkit::config::{OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "btkit",
    about = "Exact arithmetic on the rank-1 tree: filtration groups, distribution norms, and facet sheaves",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Odd prime every computation works over
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,
    /// Working precision in digits (env BTKIT_PRECISION)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Total degree where power series are cut off
    #[arg(long, global = true, default_value_t = 30)]
    truncation: u32,
    /// Radius of the tree window around the origin
    #[arg(long, global = true, default_value_t = 2)]
    radius: u32,
    /// Comma-separated exponents a in [-1, 0); each radius is p^a
    #[arg(long, global = true, default_value = "-1", allow_hyphen_values = true)]
    r_exponents: String,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed for the property suites (env BTKIT_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the per-suite sample counts
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the tree ball around the origin with its facet poset
    Tree,
    /// Show the coordinate bounds cutting out a facet's filtration group
    Levels {
        /// Facet, written vertex:n or edge:n
        facet: String,
        /// Congruence level (default 2)
        #[arg(long)]
        e: Option<u32>,
    },
    /// Test a matrix for membership in a facet's filtration group
    Member {
        /// Matrix, written [[a,b],[c,d]] with rational or p^v*u entries
        g: String,
        /// Facet, written vertex:n or edge:n
        #[arg(long, default_value = "vertex:0")]
        facet: String,
        /// Congruence level (default 2)
        #[arg(long)]
        e: Option<u32>,
    },
    /// Evaluate the filtration valuation of a group element
    Omega {
        /// Matrix, written [[a,b],[c,d]]
        g: String,
        /// Facet, written vertex:n or edge:n
        #[arg(long, default_value = "vertex:0")]
        facet: String,
        /// Congruence level (default 2, must be at least 2)
        #[arg(long)]
        e: Option<u32>,
    },
    /// Expand a polynomial in the binomial basis and verify on a grid
    Mahler {
        /// Comma-separated rational coefficients, constant term first
        poly: String,
        /// Number of grid points checked
        #[arg(long, default_value_t = 50)]
        points: u32,
    },
    /// Compute norms of a distribution series at each configured radius
    Norm {
        /// Point mass at this matrix
        #[arg(long)]
        dirac: Option<String>,
        /// The series log(1 + b_i)
        #[arg(long)]
        log_var: Option<usize>,
        /// The coordinate series b_i
        #[arg(long)]
        var: Option<usize>,
        /// Facet chart for --dirac
        #[arg(long, default_value = "vertex:0")]
        facet: String,
        /// Congruence level for --dirac (default 2)
        #[arg(long)]
        e: Option<u32>,
    },
    /// Show the coordinate transport between two facet groups
    Glue {
        /// Source facet, written vertex:n or edge:n
        source: String,
        /// Target facet, written vertex:n or edge:n
        target: String,
        /// Congruence level (default 2)
        #[arg(long)]
        e: Option<u32>,
    },
    /// Build the facet sheaf of a smooth representation on the window
    Sheaf {
        /// Representation: trivial, p1-functions, or steinberg
        rep: String,
        /// Congruence level (default 2)
        #[arg(long)]
        e: Option<u32>,
    },
    /// Run a seeded property suite (or `all`)
    Check {
        /// Suite name
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn run(cli: Cli) -> Result<CmdOut> {
    let g = &cli.global;
    let cfg = RunConfig::new(
        g.p,
        g.precision,
        g.truncation,
        g.radius,
        &g.r_exponents,
        g.format,
        g.seed,
        g.samples,
    )?;
    match &cli.command {
        Command::Tree => cmd_tree(&cfg),
        Command::Levels { facet, e } => cmd_levels(&cfg, facet, *e),
        Command::Member { g, facet, e } => cmd_member(&cfg, g, facet, *e),
        Command::Omega { g, facet, e } => cmd_omega(&cfg, g, facet, *e),
        Command::Mahler { poly, points } => cmd_mahler(&cfg, poly, *points),
        Command::Norm {
            dirac,
            log_var,
            var,
            facet,
            e,
        } => cmd_norm(&cfg, dirac.as_deref(), *log_var, *var, facet, *e),
        Command::Glue { source, target, e } => cmd_glue(&cfg, source, target, *e),
        Command::Sheaf { rep, e } => cmd_sheaf(&cfg, rep, *e),
        Command::Check { suite } => cmd_check(&cfg, suite),
    }
}

/// Writes to stdout, treating a closed pipe as a normal exit.
fn emit(s: &str) {
    use std::io::Write;
    if let Err(err) = std::io::stdout().write_all(s.as_bytes()) {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

fn main() {
    let cli = Cli::parse();
    let format = cli.global.format;
    match run(cli) {
        Ok(out) => {
            match format {
                OutputFormat::Text => emit(&out.text),
                OutputFormat::Json => {
                    let pretty =
                        serde_json::to_string_pretty(&out.json).expect("serializable value");
                    emit(&pretty);
                    emit("\n");
                }
                OutputFormat::Dot => match &out.dot {
                    Some(dot) => emit(dot),
                    None => {
                        eprintln!("error: this command has no dot output");
                        std::process::exit(1);
                    }
                },
            }
            if !out.ok {
                std::process::exit(1);
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}
