use std::process::ExitCode;

fn main() -> ExitCode {
    nctspin::cli::main_with(std::env::args_os())
}
