use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

mod commands;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "hivecount", version, about = "Littlewood-Richardson coefficients from hive polytopes")]
struct Cli {
    /// Wrap the output in a JSON envelope with method, rank and timings.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct TripleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Naive,
    Barvinok,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViaArg {
    Direct,
    Hive,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderArg {
    Natural,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count lattice points of a hive polytope (or a polytope file).
    Count {
        #[arg(long, allow_hyphen_values = true, required_unless_present_any = ["polytope", "input_file"])]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "lambda")]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "lambda")]
        nu: Option<String>,
        #[arg(long, value_enum, default_value = "barvinok")]
        method: MethodArg,
        /// Polytope in the `m d+1` / `linearity` text format.
        #[arg(long, conflicts_with_all = ["lambda", "input_file"])]
        polytope: Option<PathBuf>,
        /// One triple per line: `lambda mu nu`, parts separated by commas.
        #[arg(long, conflicts_with = "lambda")]
        input_file: Option<PathBuf>,
        /// Seed for the random directions used by the Barvinok evaluation.
        #[arg(long, default_value_t = hivecount::counting::DEFAULT_SEED)]
        seed: u64,
        /// Largest free dimension the naive enumerator accepts.
        #[arg(long, default_value_t = hivecount::counting::DEFAULT_NAIVE_CAP)]
        cap: usize,
    },
    /// Decide whether the coefficient is nonzero by LP feasibility.
    Nonzero {
        #[command(flatten)]
        triple: TripleArgs,
    },
    /// Kostka number K_{lambda, mu}.
    Kostka {
        #[arg(long)]
        lambda: String,
        /// Content; need not be weakly decreasing.
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum, default_value = "hive")]
        via: ViaArg,
    },
    /// Decompose V_lambda (x) V_mu with Klimyk's formula.
    Klimyk {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        /// Largest weight size handled by the brute-force weight enumeration.
        #[arg(long, default_value_t = hivecount::klimyk::DEFAULT_SIZE_CAP)]
        cap: u64,
    },
    /// Fit the stretched coefficient n -> c_{n lambda, n mu}^{n nu}; always prints JSON.
    Stretch {
        #[command(flatten)]
        triple: TripleArgs,
        /// Largest dilation factor sampled (default: enough for every candidate period).
        #[arg(long)]
        n_max: Option<u64>,
        /// Candidate periods, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        periods: Vec<usize>,
    },
    /// Placing triangulation of the homogenized hive matrix of side `rank`.
    Triangulate {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value = "natural")]
        order: OrderArg,
        /// Seed for `--order random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the cell list here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the hive polytope (or its homogenized g-hive form) as a polytope file.
    Export {
        #[command(flatten)]
        triple: TripleArgs,
        /// Export `{ x >= 0 : M x = b }` instead of `{ B h = b, R h <= 0 }`.
        #[arg(long)]
        homogenized: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// What a subcommand produced: plain text for humans, and the JSON `result` payload.
pub struct Outcome {
    pub text: String,
    pub result: Value,
    pub method: Option<String>,
    pub rank: Option<usize>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    method: Option<&'a str>,
    rank: Option<usize>,
    timings: Timings,
    result: &'a Value,
}

#[derive(Serialize)]
struct Timings {
    total_ms: f64,
}

fn run(cli: Cli) -> Result<(&'static str, Outcome), CliError> {
    Ok(match cli.command {
        Command::Count {
            lambda,
            mu,
            nu,
            method,
            polytope,
            input_file,
            seed,
            cap,
        } => {
            let out = if let Some(path) = polytope {
                commands::count_polytope(&path, method, seed, cap)?
            } else if let Some(path) = input_file {
                commands::count_file(&path, method, seed, cap)?
            } else {
                let (Some(mu), Some(nu)) = (mu, nu) else {
                    return Err(CliError::Input("count needs --lambda, --mu and --nu".into()));
                };
                commands::count(
                    &TripleArgs {
                        lambda: lambda.unwrap_or_default(),
                        mu,
                        nu,
                    },
                    method,
                    seed,
                    cap,
                )?
            };
            ("count", out)
        }
        Command::Nonzero { triple } => ("nonzero", commands::nonzero(&triple)?),
        Command::Kostka { lambda, mu, via } => ("kostka", commands::kostka(&lambda, &mu, via)?),
        Command::Klimyk { lambda, mu, cap } => ("klimyk", commands::klimyk(&lambda, &mu, cap)?),
        Command::Stretch { triple, n_max, periods } => ("stretch", commands::stretch(&triple, n_max, &periods)?),
        Command::Triangulate {
            rank,
            order,
            seed,
            output,
        } => ("triangulate", commands::triangulate(rank, order, seed, output.as_deref())?),
        Command::Export {
            triple,
            homogenized,
            output,
        } => ("export", commands::export(&triple, homogenized, output.as_deref())?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let json_mode = cli.json;
    let start = Instant::now();
    match run(cli) {
        Ok((command, out)) => {
            if json_mode {
                let env = Envelope {
                    command,
                    method: out.method.as_deref(),
                    rank: out.rank,
                    timings: Timings {
                        total_ms: start.elapsed().as_secs_f64() * 1e3,
                    },
                    result: &out.result,
                };
                println!("{}", serde_json::to_string_pretty(&env).expect("envelope serializes"));
            } else if !out.text.is_empty() {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if json_mode {
                println!("{}", json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
