use std::fs;
use std::process::ExitCode;

use clap::Parser;
use gl2q_cli::run::EXIT_USAGE;
use gl2q_cli::{run_command, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.command.output();
    let outcome = match run_command(&cli.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let json = outcome.json(output.timing);
    if let Some(path) = &output.out {
        if let Err(e) = fs::write(path, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if output.json {
        println!("{json}");
    } else {
        println!("{}", outcome.text);
    }
    ExitCode::from(outcome.exit_code())
}
