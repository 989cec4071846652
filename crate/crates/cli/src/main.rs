use std::process::ExitCode;

use clap::Parser;
use vfree::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command, &cli.config) {
        Ok(report) => {
            if cli.config.json {
                println!("{}", report.json);
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => fail(&e, cli.config.json),
    }
}

fn fail(e: &CliError, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string_pretty(e).expect("error serializes"));
    }
    eprintln!("error: {e}");
    ExitCode::from(e.exit as u8)
}
