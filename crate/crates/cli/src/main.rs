use std::process::ExitCode;

use clap::Parser;

use rho_cli::{execute, Cli, Exit};

fn threads(cli: &Cli) -> Option<usize> {
    cli.threads.or_else(|| std::env::var("RHO_THREADS").ok()?.parse().ok()).filter(|&t| t > 0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { 0 });
        }
    };
    if let Some(n) = threads(&cli) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    match execute(&cli) {
        Ok(out) => {
            let text = if cli.json { out.report.to_json().map(|j| j + "\n") } else { Ok(out.report.to_text()) };
            match text {
                Ok(t) => print!("{t}"),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(Exit::Usage as u8);
                }
            }
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Exit::Usage as u8)
        }
    }
}
