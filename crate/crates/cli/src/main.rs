use std::io::Write;

use clap::Parser;
use qtriple_cli::{run, Cli, EXIT_CONFIG};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("QTRIPLE_LOG")).init();
    let cli = Cli::parse();
    let outcome = run(&cli);
    let written = match &cli.opts.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        std::process::exit(EXIT_CONFIG);
    }
    std::process::exit(outcome.code);
}
