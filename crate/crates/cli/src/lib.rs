//! `diamram` command line: every subcommand prints one JSON document.
//!
//! Exit codes: 0 success or all checks passed, 1 a check failed (or the
//! computation declined the input, e.g. an obtuse triangle for `embed`),
//! 2 usage or input error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod commands;
pub mod verify;

pub use verify::{verify_paper, Status, Suite, VerificationReport};

/// JSON schema version carried by every document this tool writes.
pub const SCHEMA: u64 = 1;

/// Search nodes allowed per colorability decision unless `--slow` is given.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Parser)]
#[command(name = "diamram", version, about = "Diameter graphs, diameter-Ramsey witnesses and degeneracy checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a point set and print it as PointSet JSON.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Diameter, diameter pairs and diameter graph of a point set.
    Diam {
        /// PointSet JSON file.
        #[arg(long)]
        input: PathBuf,
    },
    /// The r-uniform diameter hypergraph H_r as Hypergraph JSON.
    Hyper {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'r', default_value_t = 2)]
        r: usize,
    },
    /// Exact chromatic number of a hypergraph.
    Chrom(ChromArgs),
    /// Decide R -> (P)_r by coloring the congruent copies of P in R.
    Arrow {
        /// PointSet JSON of the host R.
        #[arg(long)]
        host: PathBuf,
        /// PointSet JSON of the pattern P.
        #[arg(long)]
        pattern: PathBuf,
        #[arg(short = 'r')]
        r: usize,
    },
    /// Product-of-simplices host whose diameter equals that of a given
    /// triangle or simplex and which contains it.
    Embed(EmbedArgs),
    /// Random placements of the isosceles gadget under the mod-8 coloring.
    Gadget(GadgetArgs),
    /// Evidence for t-degeneracy: the smallest diameter reachable by adding
    /// a regular t-simplex through an anchor point.
    Degen(DegenArgs),
    /// Coordinate witness x_i(j) < 1/2 for rotated unit tetrahedra in R^9.
    #[command(name = "t5-witness")]
    T5Witness {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the registered verification checks.
    #[command(name = "verify-paper")]
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = Suite::Fast)]
        suite: Suite,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Balanced partitions of [2n] as 0/1 vectors (n even).
    Kk {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Characteristic vectors of the n-subsets of [rn + (k-1)(r-1)].
    Kneser {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Regular simplex with m vertices, centered at the origin.
    Simplex {
        #[arg(short = 'm')]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        side: f64,
    },
    /// Regular polygon with n vertices.
    Polygon {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Vertices of a box with exact side lengths, e.g. `--sides 3,4,12/5`.
    Brick {
        #[arg(long, value_delimiter = ',', required = true)]
        sides: Vec<String>,
    },
    /// Origin of R^6 with the six unit vectors.
    T5,
    /// Regular heptagon, or with `--pattern` its triangle {p1, p2, p4}.
    Heptagon {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        pattern: bool,
    },
}

#[derive(Debug, Args)]
pub struct ChromArgs {
    /// Hypergraph JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Only try up to this many colors; reports `"colorable": false` beyond.
    #[arg(long)]
    pub max_colors: Option<usize>,
    /// Lift the default search budget.
    #[arg(long)]
    pub slow: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmbedMethod {
    /// Right or acute triangle construction for three sides, otherwise
    /// the almost-regular simplex construction.
    Auto,
    Right,
    Acute,
    AlmostRegular,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Side lengths as exact decimals or fractions. Three values give a
    /// triangle; C(n,2) values give an n-simplex in pair order 01,02,..,12,..
    #[arg(long, value_delimiter = ',', required = true)]
    pub sides: Vec<String>,
    #[arg(long, value_enum, default_value_t = EmbedMethod::Auto)]
    pub method: EmbedMethod,
    /// Colors for the right triangle construction.
    #[arg(long, default_value_t = 2)]
    pub colors: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    /// Legs 1 + xi over base 2.
    Legs,
    /// Apex height sqrt(xi) over base 2.
    ApexHeight,
}

#[derive(Debug, Args)]
pub struct GadgetArgs {
    /// Radius of the ball holding the placements.
    #[arg(long = "K", default_value_t = 2.0)]
    pub k: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ShapeArg::Legs)]
    pub shape: ShapeArg,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct DegenArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(short = 't')]
    pub t: usize,
    /// Examine only this point; all points otherwise.
    #[arg(long)]
    pub anchor: Option<usize>,
    #[arg(long, default_value_t = diamram::degeneracy::DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = diamram::degeneracy::DEFAULT_MARGIN)]
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Why a command produced no result.
#[derive(Debug)]
pub(crate) enum Failure {
    /// Bad flags, unreadable or malformed input: exit 2.
    Input(String),
    /// The library declined a well-formed input: exit 1.
    Declined { kind: &'static str, message: String, payload: Value },
}

impl From<diamram::Error> for Failure {
    fn from(e: diamram::Error) -> Self {
        use diamram::Error as E;
        let kind = match &e {
            E::InvalidPointSet(_) | E::InvalidParameter(_) | E::Parse(_) | E::TooLarge(_) | E::SingletonEdge(_) => {
                return Failure::Input(e.to_string())
            }
            E::Degenerate(_) => "degenerate",
            E::NotRealizable { .. } => "not_realizable",
            E::SumConditionViolated { .. } => "sum_condition_violated",
            E::ObtuseTriangle { .. } => "obtuse_triangle",
            E::ConstraintViolated(_) => "constraint_violated",
            E::BudgetExhausted(_) => "budget_exhausted",
            E::OptimizerFailed(_) => "optimizer_failed",
        };
        let payload = match &e {
            E::SumConditionViolated { sum, required, deficit } => {
                json!({"sum": sum, "required": required, "deficit": deficit})
            }
            E::ObtuseTriangle { excess } => json!({"excess": excess}),
            E::BudgetExhausted(nodes) => json!({"nodes": nodes, "hint": "rerun with --slow"}),
            _ => Value::Null,
        };
        Failure::Declined { kind, message: e.to_string(), payload }
    }
}

/// A finished command: its document and whether its checks passed.
pub(crate) struct Done {
    pub doc: Value,
    pub ok: bool,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CommandOutput { code, stdout: text, stderr: String::new() }
            } else {
                let doc = json!({"schema": SCHEMA, "error": {"kind": "usage", "message": text.trim_end()}});
                CommandOutput { code, stdout: pretty(&doc), stderr: text }
            };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(Done { doc, ok }) => CommandOutput { code: if ok { 0 } else { 1 }, stdout: pretty(&doc), stderr: String::new() },
        Err(Failure::Input(message)) => {
            let doc = json!({"schema": SCHEMA, "error": {"kind": "input", "message": message}});
            CommandOutput { code: 2, stdout: pretty(&doc), stderr: format!("error: {message}\n") }
        }
        Err(Failure::Declined { kind, message, payload }) => {
            let doc = json!({"schema": SCHEMA, "ok": false, "error": {"kind": kind, "message": message, "details": payload}});
            CommandOutput { code: 1, stdout: pretty(&doc), stderr: format!("{message}\n") }
        }
    }
}

fn pretty(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}
