use std::process::ExitCode;

fn main() -> ExitCode {
    endonet::cli::main_with(std::env::args_os())
}
