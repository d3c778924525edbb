//! Point-set CSV files: one point per row, comma separated, optional header.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};
use scenval_core::{Label, PointSet};

use crate::error::{CliError, CliResult};

fn parse_row(record: &StringRecord) -> Option<Vec<f64>> {
    record.iter().map(|f| f.parse::<f64>().ok()).collect()
}

/// Reads a point set. A first row that is not entirely numeric is a header.
pub fn read_points(path: &Path, label: Label) -> CliResult<PointSet> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(Trim::All)
        .from_reader(file);

    let parse_err = |line: u64, message: String| CliError::Parse {
        path: path.to_owned(),
        line,
        message,
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        let Some(row) = parse_row(&record) else {
            if i == 0 {
                continue;
            }
            return Err(parse_err(line, format!("non-numeric field in {:?}", record.iter().collect::<Vec<_>>())));
        };
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(line, format!("row has {} columns, expected {w}", row.len())));
            }
            _ => {}
        }
        rows.push(row);
    }
    PointSet::new(&rows, label).map_err(|e| CliError::core(path.display().to_string(), e))
}

/// Writes one point per row with 17 significant digits, so reading back is lossless.
pub fn write_points<W: Write>(out: W, points: &PointSet) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    let header: Vec<String> = (0..points.dim()).map(|c| format!("x{c}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for p in points.iter() {
        let fields: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()
}
