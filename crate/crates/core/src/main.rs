use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use partisan_chocolate::chocolate::render_table;
use partisan_chocolate::engine::DEFAULT_NODE_BUDGET;
use partisan_chocolate::verify::{self, Suite};
use partisan_chocolate::{value_table, Bar, Error, Player, SumGame};

#[derive(Parser)]
#[command(
    name = "chocolate",
    version,
    about = "Values and optimal play for partisan chocolate bars"
)]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value of a bar such as "+(2,3)" or "-(1,3)".
    Value {
        #[arg(allow_hyphen_values = true)]
        bar: String,
    },
    /// Values of positive bars (n, m), largest m on top.
    Table {
        #[arg(default_value_t = 9)]
        max_n: u32,
        #[arg(default_value_t = 9)]
        max_m: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Value, outcome and best move of a sum like "-(2,4) -(1,3) +(2,3)".
    Analyze {
        #[arg(allow_hyphen_values = true, default_value = "")]
        sum: String,
        #[arg(long, default_value = "L")]
        mover: Player,
    },
    /// The engine's move in a sum.
    BestMove {
        #[arg(allow_hyphen_values = true, default_value = "")]
        sum: String,
        #[arg(long, default_value = "L")]
        mover: Player,
    },
    /// Run a verification suite: table, oracle, patterns, floss, iso, lemmas,
    /// claim, strategy or all.
    Verify {
        suite: Suite,
        bound: Option<u32>,
        #[arg(long = "bound", value_name = "N", conflicts_with = "bound")]
        bound_flag: Option<u32>,
        #[arg(long, value_name = "N", default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Serve the HTTP game API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

const DEFAULT_VERIFY_BOUND: u32 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e.downcast_ref::<Error>() {
                Some(Error::Parse { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn print_json(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("json value")
    );
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Value { bar } => {
            let bar: Bar = bar.parse()?;
            let value = bar.value()?;
            if cli.json {
                print_json(
                    json!({ "bar": bar.to_string(), "value": value, "approx": value.to_f64() }),
                );
            } else {
                println!("{value}");
            }
        }
        Command::Table { max_n, max_m, csv } => {
            let grid = value_table(max_n, max_m)?;
            if cli.json {
                let rows: Vec<_> = grid.iter().rev().collect();
                print_json(json!({ "max_n": max_n, "max_m": max_m, "rows_top_down": rows }));
            } else {
                print!("{}", render_table(&grid, if csv { "," } else { ", " }));
            }
        }
        Command::Analyze { sum, mover } => {
            let game: SumGame = sum.parse()?;
            let value = game.value()?;
            let outcome = game.outcome()?;
            let best = game.best_move(mover)?;
            if cli.json {
                print_json(json!({
                    "sum": game.to_string(),
                    "value": value,
                    "approx": value.to_f64(),
                    "outcome": outcome,
                    "mover": mover,
                    "best_move": best,
                }));
            } else {
                println!("value {value}");
                println!("outcome {outcome}");
                match best {
                    Some(b) => println!(
                        "best move for {mover}: {} (resulting value {})",
                        b.mv, b.resulting_value
                    ),
                    None => println!("best move for {mover}: none"),
                }
            }
        }
        Command::BestMove { sum, mover } => {
            let game: SumGame = sum.parse()?;
            let best = game.best_move(mover)?;
            if cli.json {
                print_json(json!({ "sum": game.to_string(), "mover": mover, "best_move": best }));
            } else {
                match best {
                    Some(b) => {
                        println!("{}", b.mv);
                        println!("resulting value {}", b.resulting_value);
                        println!("squares removed {}", b.squares_removed);
                    }
                    None => println!("none"),
                }
            }
        }
        Command::Verify {
            suite,
            bound,
            bound_flag,
            node_budget,
        } => {
            let bound = bound.or(bound_flag).unwrap_or(DEFAULT_VERIFY_BOUND);
            let reports = verify::run(suite, bound, node_budget);
            let passed = reports.iter().all(|r| r.passed);
            if cli.json {
                print_json(
                    json!({ "suite": suite, "bound": bound, "passed": passed, "reports": reports }),
                );
            } else {
                for r in &reports {
                    println!("{r}");
                }
            }
            // timings vary between runs, so they stay off stdout
            for r in &reports {
                eprintln!("{}: {:.3}s", r.check, r.elapsed.as_secs_f64());
            }
            return Ok(ExitCode::from(if passed { 0 } else { 1 }));
        }
        Command::Serve { listen, journal } => {
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(partisan_chocolate::serve(listen, journal))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
