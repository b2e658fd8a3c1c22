use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toric_core::solver::DEFAULT_SEED;
use toric_core::toric::MonomialOrder;

mod commands;
mod input;

use commands::{CmdError, Output};

#[derive(Parser, Debug)]
#[command(name = "solve", version, about = "Sparse polynomial systems over the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for liftings, shift vectors and linear forms.
    #[arg(long, global = true, env = "SOLVE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-8, value_parser = positive_f64)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short, global = true)]
    pub verbose: bool,
    /// Write the main intermediate matrix to this file as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    pub matrix_dump: Option<PathBuf>,
    /// Treat INPUT as the system itself: `vars: x, y; x + y - 1; x - y`.
    #[arg(long, global = true)]
    pub inline: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mixed volume of the Newton polytopes (BKK bound).
    #[command(alias = "bkk")]
    Mv { input: String },
    /// Dense Macaulay matrix of n + 1 polynomials in n variables.
    Macaulay {
        input: String,
        /// Degrees d_0..d_n (default: total degrees).
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<i64>>,
    },
    /// Canny–Emiris matrix of n + 1 polynomials in n variables.
    CeMatrix { input: String },
    /// Koszul matrix of three bilinear forms, or solve two of them.
    Koszul { input: String },
    /// Roots in the torus of a square system.
    Solve { input: String },
    /// Toric Groebner basis, multiplication maps and lex basis.
    Gb {
        input: String,
        /// `auto`, or a JSON file `{"summands": [[vertex, ..], ..], "degrees": [[..], ..]}`.
        #[arg(long, default_value = "auto")]
        summands: String,
        /// Truncation multidegree (default: sum of the degrees).
        #[arg(long, value_delimiter = ',')]
        bstop: Option<Vec<u32>>,
        #[arg(long, default_value_t = MonomialOrder::GRevLex)]
        order: MonomialOrder,
        /// Include per-degree elimination statistics.
        #[arg(long)]
        stats: bool,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("tolerance must be positive".into())
    }
}

fn run(cli: Cli) -> Result<Output, CmdError> {
    let c = &cli.common;
    match cli.command {
        Command::Mv { input } => commands::mixed_volume(c, &input),
        Command::Macaulay { input, degrees } => commands::macaulay(c, &input, degrees),
        Command::CeMatrix { input } => commands::ce_matrix(c, &input),
        Command::Koszul { input } => commands::koszul(c, &input),
        Command::Solve { input } => commands::solve(c, &input),
        Command::Gb {
            input,
            summands,
            bstop,
            order,
            stats,
        } => commands::gb(c, &input, &summands, bstop, order, stats),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.common.format;
    match run(cli) {
        Ok(out) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Text => print!("{}", out.text),
            }
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
