use std::process::ExitCode;

fn main() -> ExitCode {
    vbsq::cli::run()
}
