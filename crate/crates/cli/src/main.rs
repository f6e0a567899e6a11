use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lefweave::{parse, run, Options, Status};

#[derive(Parser)]
#[command(name = "lefweave", version, about = "Run scripts over Weinstein Lefschetz presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every statement and print one JSON object per command.
    Run {
        file: PathBuf,
        /// Also write the JSON output to this file.
        #[arg(long)]
        json_out: Option<PathBuf>,
        /// Override the depth of every `search`.
        #[arg(long)]
        depth: Option<usize>,
        /// Override the width of every `search`.
        #[arg(long)]
        width: Option<usize>,
        /// Replay a seeded random move sequence on each printed datum.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and resolve names only.
    Check { file: PathBuf },
}

fn read(file: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(file).map_err(|e| {
        eprintln!("error: {}: {e}", file.display());
        ExitCode::from(Status::Error as u8)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(c) => return c,
            };
            match parse(&text) {
                Ok(ws) => {
                    println!("{{\"command\":\"check\",\"items\":{},\"ok\":true}}", ws.items.len());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {}:{e}", file.display());
                    ExitCode::from(Status::Error as u8)
                }
            }
        }
        Command::Run {
            file,
            json_out,
            depth,
            width,
            seed,
        } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(c) => return c,
            };
            let ws = match parse(&text) {
                Ok(ws) => ws,
                Err(e) => {
                    eprintln!("error: {}:{e}", file.display());
                    return ExitCode::from(Status::Error as u8);
                }
            };
            let opts = Options { depth, width, seed };
            let out = match run(&ws, &opts) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {}:{e}", file.display());
                    return ExitCode::from(Status::Error as u8);
                }
            };
            let text = out.render();
            print!("{text}");
            if let Some(path) = json_out {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(Status::Error as u8);
                }
            }
            ExitCode::from(out.status as u8)
        }
    }
}
