use std::process::ExitCode;

fn main() -> ExitCode {
    cooccur_audit::cli::main()
}
