use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = sdoflab_cli::configure_threads() {
        eprintln!("error: {}", e.message);
        return ExitCode::from(e.code as u8);
    }
    let code = sdoflab_cli::run(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
