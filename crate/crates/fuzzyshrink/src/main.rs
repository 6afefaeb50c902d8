use std::process::ExitCode;

fn main() -> ExitCode {
    fuzzyshrink::cli::main_entry()
}
