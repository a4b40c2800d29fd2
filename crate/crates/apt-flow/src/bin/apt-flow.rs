use std::process::ExitCode;

fn main() -> ExitCode {
    apt_flow::cli::main_entry()
}
