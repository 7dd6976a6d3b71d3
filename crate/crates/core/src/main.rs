use std::io::Write;
use std::process::ExitCode;

use fractal_traces::cli::{error_document, exit, parse_config, run};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config = match parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            println!(
                "{}",
                error_document(
                    "usage",
                    "usage",
                    e.kind().as_str().unwrap_or("usage error"),
                    &[e.to_string()]
                )
            );
            return ExitCode::from(exit::USAGE as u8);
        }
    };
    let outcome = run(&config);
    if !outcome.body.is_empty() {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{}", outcome.body);
    }
    ExitCode::from(outcome.code as u8)
}
