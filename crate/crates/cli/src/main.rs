use std::process::ExitCode;

use abgreen_cli::{run, usage_failure, Cli, EXIT_INVALID};
use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            print!(
                "{}",
                usage_failure(e.to_string().trim_end().to_string()).render()
            );
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let outcome = run(&cli);
    match &cli.out {
        Some(path) if !outcome.is_error => {
            if let Err(e) = std::fs::write(path, &outcome.report) {
                let f = usage_failure(format!("cannot write {}: {e}", path.display()));
                print!("{}", f.render());
                return ExitCode::from(EXIT_INVALID as u8);
            }
        }
        _ => print!("{}", outcome.report),
    }
    ExitCode::from(outcome.exit_code as u8)
}
