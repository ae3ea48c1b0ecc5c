use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use longmem::cli::{self, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if e.use_stderr() {
                eprintln!("{}", Cli::command().render_usage());
                eprintln!("error kind=usage");
            }
            return ExitCode::from(code as u8);
        }
    };
    let cfg = RunConfig::from(cli.command);
    match cli::execute(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "error kind={} command={} message={}",
                e.kind(),
                cfg.command.name(),
                e
            );
            ExitCode::from(1)
        }
    }
}
