use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lorentz_harmonics::cli::{run, Cli, CliError as LhError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => {
            let _ = lock.flush();
            ExitCode::from(code as u8)
        }
        Err(LhError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
