use std::process::ExitCode;

fn main() -> ExitCode {
    proofdesk_server::cli::main()
}
