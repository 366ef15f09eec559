use std::process::ExitCode;

fn main() -> ExitCode {
    steklov::cli::main_with(std::env::args_os())
}
