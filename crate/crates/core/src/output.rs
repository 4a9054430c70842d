//! CSV and JSON emission.
//!
//! Floats are written in shortest round-trip decimal form, so parsing an
//! emitted file recovers every value bit for bit. Absent fields are empty in
//! CSV and `null` in JSON.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::experiment::{ResultRow, RunOutput, COLUMNS};

pub const CSV_FILE: &str = "results.csv";
pub const JSON_FILE: &str = "results.json";

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

/// Writes the header and one line per row, `\n` terminated.
pub fn emit_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), OutputError> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(COLUMNS)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ResultRow]) -> Result<String, OutputError> {
    let mut buf = Vec::new();
    emit_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>, OutputError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != COLUMNS {
        return Err(OutputError::Io(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unexpected CSV header {header:?}"),
        )));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(OutputError::from))
        .collect()
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit_json<W: Write>(output: &RunOutput, mut out: W) -> Result<(), OutputError> {
    serde_json::to_writer_pretty(&mut out, output)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn json_string(output: &RunOutput) -> Result<String, OutputError> {
    let mut buf = Vec::new();
    emit_json(output, &mut buf)?;
    Ok(String::from_utf8(buf).expect("json output is UTF-8"))
}

pub fn parse_json(text: &str) -> Result<RunOutput, OutputError> {
    Ok(serde_json::from_str(text)?)
}

/// Writes `results.csv` and/or `results.json` into `dir`, creating it if
/// needed. Returns the paths written.
pub fn write_outputs(
    dir: &Path,
    output: &RunOutput,
    format: Format,
) -> Result<Vec<PathBuf>, OutputError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if format.csv() {
        let path = dir.join(CSV_FILE);
        emit_csv(&output.rows, io::BufWriter::new(fs::File::create(&path)?))?;
        written.push(path);
    }
    if format.json() {
        let path = dir.join(JSON_FILE);
        emit_json(output, io::BufWriter::new(fs::File::create(&path)?))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, Protocol};
    use crate::entropy::LogBase;
    use crate::experiment::run_experiment;
    use crate::model::DistributionMode;

    fn sample_row() -> ResultRow {
        ResultRow {
            protocol: Protocol::Continuous,
            preset: "three-level".into(),
            n0: 2,
            n: None,
            t: Some(0.1),
            f: Some(1.0 / 3.0),
            delta_a: Some(1e-7),
            log_base: LogBase::Bits,
            distribution: Some(DistributionMode::PaperLiteral),
            zeno_formula: None,
            survival_probability: 0.9999999999999999,
            entropy_nats: 2.964749048503508e-7,
            entropy_bits: 4.277227650232e-7,
            total_weight: Some(0.7),
            validity_flag: None,
        }
    }

    #[test]
    fn empty_rows_give_header_only() {
        assert_eq!(csv_string(&[]).unwrap(), format!("{}\n", COLUMNS.join(",")));
    }

    #[test]
    fn single_row_in_column_order() {
        let text = csv_string(&[sample_row()]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[1],
            "continuous,three-level,2,,0.1,0.3333333333333333,1e-7,bits,paper_literal,,\
             0.9999999999999999,2.964749048503508e-7,4.277227650232e-7,0.7,"
        );
        assert!(!text.contains('\r'));
    }

    #[test]
    fn csv_round_trip() {
        let out = run_experiment(
            &parse_config(
                r#"{"system": {"preset": "two-level-rabi", "omega": 1.3}, "protocol": "zeno", "n0": 0,
                    "sweep": {"N": [1, 7, 300], "t": [0.4, 1.1]}}"#,
            )
            .unwrap(),
        )
        .unwrap();
        let mut rows = out.rows.clone();
        rows.push(sample_row());
        assert_eq!(parse_csv(&csv_string(&rows).unwrap()).unwrap(), rows);
    }

    #[test]
    fn json_round_trip() {
        let mut cfg = parse_config(
            r#"{"system": {"preset": "three-level"}, "protocol": "zeno", "n0": 1,
                "sweep": {"N": [5, 50], "t": [0.7]}, "monte_carlo": {"trials": 500, "seed": 11}}"#,
        )
        .unwrap();
        cfg.threshold = Some(0.05);
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.monte_carlo.len(), 2);
        assert_eq!(parse_json(&json_string(&out).unwrap()).unwrap(), out);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(parse_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn writes_requested_formats() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(
            &parse_config(
                r#"{"system": {"preset": "commuting"}, "protocol": "free", "n0": 1, "sweep": {"t": [1.0]}}"#,
            )
            .unwrap(),
        )
        .unwrap();
        let paths = write_outputs(dir.path(), &out, Format::Csv).unwrap();
        assert_eq!(paths, vec![dir.path().join(CSV_FILE)]);
        assert!(!dir.path().join(JSON_FILE).exists());
        let paths = write_outputs(&dir.path().join("nested"), &out, Format::Both).unwrap();
        assert_eq!(paths.len(), 2);
    }
}
