use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bredon_core::error::Error;
use bredon_core::repr::DEFAULT_ORDER_CAP;
use bredon_core::report::{self, HomologyOptions, MethodChoice, EXIT_OK, EXIT_VALIDATION};

#[derive(Parser)]
#[command(name = "bredon", version, about = "Bredon homology and K-homology of Coxeter groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,

    /// Largest finite special subgroup the engine will realize.
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP, global = true)]
    order_cap: u128,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Chain,
    Closed,
}

#[derive(Subcommand)]
enum Command {
    /// Spherical subsets with their types and orders.
    Classify { matrix: PathBuf },
    /// Bredon homology, K-homology and the cross-check between methods.
    Homology {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Print character tables and induction matrices.
        #[arg(long)]
        dump_tables: bool,
        /// Print the cells of the quotient complex and the differentials.
        #[arg(long)]
        cells: bool,
        /// Record wall-clock time per method.
        #[arg(long)]
        timing: bool,
    },
    /// Check every corpus file in a directory against its expected values.
    Validate { dir: PathBuf },
    /// Cells of the quotient complex and block structure of the differentials.
    Cells { matrix: PathBuf },
}

fn emit<T: Serialize>(output: Output, value: &T, text: impl FnOnce(&T) -> String) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Output::Text => print!("{}", text(value)),
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    let cap = cli.order_cap;
    match cli.command {
        Command::Classify { matrix } => {
            let w = report::read_matrix(&matrix)?;
            emit(cli.output, &report::classify_report(&w), report::classification_text);
            Ok(EXIT_OK)
        }
        Command::Homology { matrix, method, max_degree, dump_tables, cells, timing } => {
            let w = report::read_matrix(&matrix)?;
            let opts = HomologyOptions {
                method: match method {
                    MethodArg::Auto => MethodChoice::Auto,
                    MethodArg::Chain => MethodChoice::Chain,
                    MethodArg::Closed => MethodChoice::Closed,
                },
                max_degree,
                order_cap: cap,
                timing,
            };
            let r = report::run_homology(&w, &opts)?;
            let cells = if cells { Some(report::cells_report(&w, cap)?) } else { None };
            match cli.output {
                Output::Json => {
                    let mut value = serde_json::to_value(&r).expect("serializable");
                    if let Some(c) = &cells {
                        value["cells"] = serde_json::to_value(c).expect("serializable");
                    }
                    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
                }
                Output::Text => {
                    print!("{}", report::run_report_text(&r));
                    if let Some(c) = &cells {
                        print!("{}", report::cells_text(c));
                    }
                }
            }
            // Tables are a text debugging aid; keep stdout parseable in JSON mode.
            if dump_tables {
                let tables = report::tables_text(&w, cap)?;
                match cli.output {
                    Output::Json => eprint!("{tables}"),
                    Output::Text => print!("{tables}"),
                }
            }
            Ok(if r.agreed() { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Validate { dir } => {
            let r = report::validate_corpus(&dir)?;
            emit(cli.output, &r, report::validation_text);
            Ok(if r.failures == 0 { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Cells { matrix } => {
            let w = report::read_matrix(&matrix)?;
            emit(cli.output, &report::cells_report(&w, cap)?, report::cells_text);
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(report::exit_code(&e) as u8)
        }
    }
}
