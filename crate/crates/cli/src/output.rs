//! Rendering of reports and tables.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

pub const METHODOLOGY: &str = "Euclidean distances, exact search. nnc: every point's k nearest \
neighbors in the pooled set, the point itself excluded; equal distances go to the smaller pooled \
index (empirical rows first). mr: an empirical point counts as memorized when the closest \
generated point lies strictly inside rho times its distance to the nearest other empirical \
point. Monte-Carlo samples use iid coordinates from the named marginal law.";

/// Writes `body` to `path`, or to standard output.
pub fn emit(path: Option<&Path>, body: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Shortest representation that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "NA".into())
}

/// A CSV table preceded by one `#` comment line echoing the parameters.
pub struct CsvTable {
    echo: String,
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new(echo: &str, columns: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(columns).expect("in-memory write");
        Self {
            echo: format!("# {echo}\n"),
            writer,
        }
    }

    /// Fields containing commas or quotes are quoted.
    pub fn row(&mut self, fields: &[String]) {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        let body = self.writer.into_inner().expect("in-memory flush");
        self.echo + std::str::from_utf8(&body).expect("utf-8 fields")
    }
}
