mod args;
mod commands;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Cycle(a) => commands::cycle(a, cli.format),
        Command::Sweep(a) => commands::sweep(a),
        Command::Gap(a) => commands::gap(a, cli.format),
        Command::Asymptotes(a) => commands::asymptote_report(a, cli.format),
        Command::Thresholds(a) => commands::thresholds(a, cli.format),
        Command::Verify(a) => return run_verify(a, cli.format),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_solver_failure() { 2 } else { 1 })
        }
    }
}

fn run_verify(args: &args::VerifyArgs, format: Format) -> ExitCode {
    let checks = verify::run(verify::Ctx {
        seed: args.seed,
        points: args.points,
    });
    match format {
        Format::Text => print!("{}", verify::render(&checks)),
        Format::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "module": c.module,
                        "check": c.name,
                        "pass": c.outcome.is_ok(),
                        "detail": match &c.outcome { Ok(d) | Err(d) => d },
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("JSON values always serialize"));
        }
    }
    if checks.iter().all(|c| c.outcome.is_ok()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
