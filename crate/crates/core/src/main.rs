use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use stiefel_holonomy::cli::{emit, error_exit_code, execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_exit_code(&e));
        }
    };
    match emit(&outcome, cli.command.out_path()) {
        Ok(Some(report)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(report.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    eprintln!("{}", outcome.summary);
    ExitCode::from(outcome.exit_code())
}
