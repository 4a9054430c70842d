//! Command-line front end.
//!
//! Failures print one line `error kind=<kind> code=<code>: <message>` on
//! stderr and exit with `code`.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use crate::config::{parse_config, ConfigError, ExperimentConfig};
use crate::error::Error;
use crate::experiment::{run_experiment, sweep_points, RunOutput};
use crate::output::{write_outputs, Format, OutputError};
use crate::presets;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "zeno-entropy",
    version,
    about = "Measurement-outcome entropy sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the sweep described by a config and write the results.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Both)]
        format: FormatArg,
    },
    /// List the built-in systems.
    Presets,
    /// Parse and validate a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Both,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Both => Format::Both,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl ToString) -> Self {
        Self {
            code,
            kind,
            message: message.to_string(),
        }
    }

    /// Single-line rendering for stderr.
    pub fn line(&self) -> String {
        let message = self
            .message
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        format!("error kind={} code={}: {}", self.kind, self.code, message)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let kind = match e {
            ConfigError::Parse(_) => "parse",
            ConfigError::Schema(_) => "schema",
            ConfigError::Validation(_) => "validation",
        };
        Failure::new(EXIT_CONFIG, kind, e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) => Failure::new(EXIT_CONFIG, "validation", e),
            _ => Failure::new(EXIT_NUMERICAL, "numerical", e),
        }
    }
}

impl From<OutputError> for Failure {
    fn from(e: OutputError) -> Self {
        Failure::new(EXIT_IO, "io", e)
    }
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_IO,
            "io",
            format!("cannot read {}: {e}", path.display()),
        )
    })?;
    Ok(parse_config(&text)?)
}

fn summary_line(out: &RunOutput) -> String {
    let s = &out.summary;
    let fmt = |v: Option<f64>| v.map_or_else(|| "none".to_owned(), |x| format!("{x:?}"));
    let crossing = match &s.first_below_threshold {
        Some(c) => {
            let p = c.point;
            let mut parts = vec![format!("row={}", c.row)];
            if let Some(n) = p.n {
                parts.push(format!("N={n}"));
            }
            for (name, v) in [("t", p.t), ("f", p.f), ("delta_a", p.delta_a)] {
                if let Some(v) = v {
                    parts.push(format!("{name}={v:?}"));
                }
            }
            parts.join(",")
        }
        None => "none".to_owned(),
    };
    format!(
        "rows={} log_base={} min_entropy={} max_entropy={} threshold={:?} first_below={}",
        s.rows,
        s.log_base.as_str(),
        fmt(s.min_entropy),
        fmt(s.max_entropy),
        s.threshold,
        crossing
    )
}

/// Executes one parsed command, returning the text for stdout.
pub fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Presets => Ok(presets::catalogue()
            .iter()
            .map(|(name, description)| format!("{name}\t{description}\n"))
            .collect()),
        Command::Validate { config } => {
            let cfg = load(&config)?;
            Ok(format!(
                "ok protocol={} system={} points={}\n",
                cfg.protocol.as_str(),
                cfg.system_label(),
                sweep_points(&cfg).len()
            ))
        }
        Command::Run {
            config,
            out_dir,
            format,
        } => {
            let cfg = load(&config)?;
            let out = run_experiment(&cfg)?;
            let written = write_outputs(&out_dir, &out, format.into())?;
            for path in &written {
                info!("wrote {}", path.display());
            }
            let mut text = summary_line(&out);
            text.push('\n');
            for path in written {
                text.push_str(&format!("wrote {}\n", path.display()));
            }
            Ok(text)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::from(EXIT_OK)
        }
        Err(failure) => {
            eprintln!("{}", failure.line());
            ExitCode::from(failure.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_line_is_single_line() {
        let f = Failure::new(EXIT_NUMERICAL, "numerical", "a\nb   c");
        assert_eq!(f.line(), "error kind=numerical code=3: a b c");
    }

    #[test]
    fn error_codes() {
        assert_eq!(
            Failure::from(ConfigError::Schema("x".into())).code,
            EXIT_CONFIG
        );
        assert_eq!(
            Failure::from(Error::InvalidConfig("x".into())).code,
            EXIT_CONFIG
        );
        assert_eq!(Failure::from(Error::ZeroTotalWeight).code, EXIT_NUMERICAL);
        let io = OutputError::Io(std::io::Error::other("disk full"));
        assert_eq!(Failure::from(io).code, EXIT_IO);
    }

    #[test]
    fn parses_run_arguments() {
        let cli = Cli::try_parse_from([
            "zeno-entropy",
            "run",
            "--config",
            "c.json",
            "--format",
            "csv",
        ])
        .unwrap();
        match cli.command {
            Command::Run {
                out_dir, format, ..
            } => {
                assert_eq!(out_dir, PathBuf::from("."));
                assert_eq!(format, FormatArg::Csv);
            }
            other => panic!("{other:?}"),
        }
        assert!(
            Cli::try_parse_from(["zeno-entropy", "run", "--config", "c", "--format", "xml"])
                .is_err()
        );
    }

    #[test]
    fn presets_listing() {
        let text = execute(Command::Presets).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("two-level-rabi\t"));
    }
}
