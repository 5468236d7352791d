use std::process::ExitCode;

fn main() -> ExitCode {
    let code = match std::panic::catch_unwind(|| suspensia_cli::run(std::env::args_os())) {
        Ok(code) => code,
        Err(_) => suspensia_cli::EXIT_INPUT,
    };
    ExitCode::from(code as u8)
}
