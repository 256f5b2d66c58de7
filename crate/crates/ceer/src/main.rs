use std::process::ExitCode;

fn main() -> ExitCode {
    ceer::cli::run()
}
