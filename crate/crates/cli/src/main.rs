use std::process::ExitCode;

use clap::Parser;
use rtp_cli::cli::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = rtp_cli::run(&cli);
    print!("{}", outcome.stdout);
    ExitCode::from(outcome.exit_code as u8)
}
