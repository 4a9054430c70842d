//! Runs a sweep config and prints the CSV to stdout.
//!
//! cargo run --example run_config -- crates/core/configs/zeno-rabi.json

use std::process::ExitCode;

use zeno_entropy::config::parse_config;
use zeno_entropy::experiment::run_experiment;
use zeno_entropy::output::emit_csv;

fn main() -> ExitCode {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/configs/zeno-rabi.json").to_owned()
    });
    let text = match std::fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(4);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match run_experiment(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(3);
        }
    };
    if let Err(e) = emit_csv(&out.rows, std::io::stdout().lock()) {
        eprintln!("{e}");
        return ExitCode::from(4);
    }
    eprintln!("{:?}", out.summary);
    ExitCode::SUCCESS
}
