mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "tentspace", version, about = "Norms, Carleson constants and embedding checks on the unit disk")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Deepest dyadic level for box suprema.
    #[arg(long, global = true, default_value_t = 10)]
    pub depth: u32,
    /// Quadrature node budget, `R` or `RxA` (radial x angular); `R` alone means `Rx(2R)`.
    #[arg(long, global = true)]
    pub nodes: Option<String>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: all cores). Never changes the numbers.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// TOML file supplying `f`, `g`, `mu` or `battery` in the text grammar.
    #[arg(long, global = true)]
    pub spec_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norms and seminorms of an analytic function.
    Norm {
        #[arg(value_enum)]
        kind: NormKind,
        #[command(flatten)]
        args: FunctionArgs,
        /// Measure for `tent`.
        #[arg(long)]
        mu: Option<String>,
        /// Weight exponent for `dirichlet`.
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
    },
    /// Carleson-type constants of a measure.
    Carleson {
        #[arg(value_enum)]
        kind: CarlesonKind,
        #[arg(long)]
        mu: Option<String>,
        /// Logarithmic power (`log`, `blasco`, `vanishing`).
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Kernel exponent for `blasco`.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Embedding ratios of F(p, p alpha - 2, s) into the tent space of a measure.
    Embed {
        #[arg(long)]
        mu: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        /// Battery member (repeatable); the standard battery when absent.
        #[arg(long = "battery")]
        battery: Vec<String>,
    },
    /// Boundedness report for J_g, I_g or M_g.
    Op {
        #[arg(value_enum)]
        which: OpKind,
        #[arg(long)]
        g: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "battery")]
        battery: Vec<String>,
    },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
    /// Points of an r-lattice.
    Lattice {
        #[arg(long, default_value_t = 0.4)]
        r: f64,
        #[arg(long, default_value_t = 0.9)]
        cap: f64,
    },
}

#[derive(Args, Debug)]
pub struct FunctionArgs {
    #[arg(long)]
    pub f: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum NormKind {
    Fps,
    Bloch,
    Dirichlet,
    Tent,
    Logf,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum CarlesonKind {
    Box,
    Log,
    Blasco,
    Vanishing,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum OpKind {
    Jg,
    Ig,
    Mg,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command, &cli.global) {
        Ok(outcome) => ExitCode::from(outcome),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
