use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cpem::io::{self, GenParams};
use cpem::model::Instance;
use cpem::{oracle, reduce};

#[derive(Parser)]
#[command(name = "cpem", version)]
#[command(
    about = "Exact max-weight matching with bounded admissible edge crossings \
                   in 2-layered bipartite drawings"
)]
struct Cli {
    /// Decimal digits used when parsing and printing weights.
    #[arg(long, global = true, default_value_t = 6)]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print the solution to stdout.
    Solve {
        file: PathBuf,
        /// Override the crossing budget from the file.
        #[arg(long)]
        c: Option<u8>,
        /// Also write an SVG drawing of the instance and solution.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Solve with a reference oracle (exponential; for verification).
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Enumeration size cap.
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
    },
    /// Verify a solution file against an instance.
    Check { file: PathBuf, solution: PathBuf },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long)]
        na: usize,
        #[arg(long)]
        nb: usize,
        /// Number of edges.
        #[arg(short = 'm', long)]
        edges: usize,
        /// Target number of admissible pairs (clamped to what exists).
        #[arg(short = 'k', long)]
        pairs: usize,
        #[arg(long, default_value_t = 1)]
        c: u8,
        #[arg(long, default_value = "0.1")]
        wmin: String,
        #[arg(long, default_value = "10.0")]
        wmax: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Emit an SVG drawing of an instance.
    Render {
        file: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Method {
    Brute,
    Fpt2k,
}

enum CliError {
    /// Exit code 1: the input is well-formed text but invalid, or a check
    /// failed.
    Invalid(String),
    /// Exit code 2: filesystem trouble.
    Io(String),
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path, precision: u32) -> Result<Instance, CliError> {
    let text = read_file(path)?;
    io::parse_instance(&text, precision).map_err(|errs| {
        let mut msg = format!("{}: invalid instance", path.display());
        for e in errs {
            msg.push_str(&format!("\n  {e}"));
        }
        CliError::Invalid(msg)
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { file, c, svg } => {
            let inst = load_instance(&file, cli.precision)?;
            let budget = c.unwrap_or_else(|| inst.c());
            let sol = reduce::solve_with_budget(&inst, budget)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            print!("{}", io::write_solution(&inst, &sol));
            if let Some(svg_path) = svg {
                write_file(&svg_path, &io::render_svg(&inst, Some(&sol)))?;
            }
            Ok(())
        }
        Command::Oracle { file, method, cap } => {
            let inst = load_instance(&file, cli.precision)?;
            let sol = match method {
                Method::Brute => oracle::brute_force_capped(&inst, cap),
                Method::Fpt2k => oracle::fpt_2k_capped(&inst, cap),
            }
            .map_err(|e| CliError::Invalid(e.to_string()))?;
            print!("{}", io::write_solution(&inst, &sol));
            Ok(())
        }
        Command::Check { file, solution } => {
            let inst = load_instance(&file, cli.precision)?;
            let text = read_file(&solution)?;
            let parsed = io::parse_solution(&text, cli.precision).map_err(|errs| {
                let mut msg = format!("{}: invalid solution file", solution.display());
                for e in errs {
                    msg.push_str(&format!("\n  {e}"));
                }
                CliError::Invalid(msg)
            })?;
            let sol = io::check_solution(&inst, &parsed).map_err(|errs| {
                let mut msg = String::from("check failed");
                for e in errs {
                    msg.push_str(&format!("\n  {e}"));
                }
                CliError::Invalid(msg)
            })?;
            println!(
                "ok: weight {}, {} edges, {} crossings",
                io::format_weight(sol.weight(), inst.precision()),
                sol.matching().len(),
                sol.realized_crossings().len()
            );
            Ok(())
        }
        Command::Gen {
            na,
            nb,
            edges,
            pairs,
            c,
            wmin,
            wmax,
            seed,
            out,
        } => {
            let parse_w = |s: &str| {
                io::parse_weight(s, cli.precision)
                    .map_err(|e| CliError::Invalid(format!("weight `{s}`: {e}")))
            };
            let params = GenParams {
                n_a: na,
                n_b: nb,
                m: edges,
                target_k: pairs,
                c,
                w_min: parse_w(&wmin)?,
                w_max: parse_w(&wmax)?,
                seed,
                precision: cli.precision,
            };
            let inst = io::generate(&params).map_err(|e| CliError::Invalid(e.to_string()))?;
            if inst.pair_count() < pairs {
                eprintln!(
                    "warning: only {} crossing pairs exist; requested {}",
                    inst.pair_count(),
                    pairs
                );
            }
            let text = io::write_instance(&inst);
            match out {
                Some(path) => write_file(&path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Render { file, out } => {
            let inst = load_instance(&file, cli.precision)?;
            let svg = io::render_svg(&inst, None);
            match out {
                Some(path) => write_file(&path, &svg),
                None => {
                    print!("{svg}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
