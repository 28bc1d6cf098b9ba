use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = idealrank_cli::run_args(std::env::args_os());
    let _ = std::io::stdout().write_all(&outcome.stdout);
    let _ = std::io::stderr().write_all(&outcome.stderr);
    ExitCode::from(u8::try_from(outcome.code).unwrap_or(1))
}
