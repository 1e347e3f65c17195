//! CSV input and output.
//!
//! Input is a rectangular numeric table with an optional header row. When the
//! header's last column is named `label`, that column holds `0` (inlier) or
//! `1` (outlier). Output numbers use `.` as the decimal separator regardless
//! of locale.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use rdos_core::{Dataset, Label, Point};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("row {row}: {source}")]
    Csv { row: u64, source: csv::Error },

    #[error("file is empty")]
    Empty,

    #[error("row {row}: expected {expected} columns, found {found}")]
    Ragged { row: u64, expected: usize, found: usize },

    #[error("row {row}, column {col}: `{value}` is not a finite number")]
    NotNumeric { row: u64, col: usize, value: String },

    #[error("row {row}: label `{value}` must be 0 or 1")]
    BadLabel { row: u64, value: String },

    #[error("header has no feature columns")]
    NoFeatures,

    #[error(transparent)]
    Data(#[from] rdos_core::Error),
}

fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads a dataset from any CSV source. Row numbers in errors are 1-based
/// file lines, header included.
pub fn parse_csv<R: Read>(reader: R) -> Result<Dataset, LoadError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut records = rdr.records();
    let first = match records.next() {
        None => return Err(LoadError::Empty),
        Some(r) => r.map_err(|source| LoadError::Csv { row: 1, source })?,
    };

    // `nan` and `inf` parse as numbers; they are bad data, not a header
    let is_header = first.iter().any(|f| f.parse::<f64>().is_err());
    let width = first.len();
    let (names, has_label) = if is_header {
        let names: Vec<String> = first.iter().map(str::to_string).collect();
        let has_label = names.last().is_some_and(|n| n.eq_ignore_ascii_case("label"));
        (Some(names), has_label)
    } else {
        (None, false)
    };
    let n_features = if has_label { width - 1 } else { width };
    if n_features == 0 {
        return Err(LoadError::NoFeatures);
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut pending = if is_header { None } else { Some(first) };
    let mut row_no = 1u64;
    loop {
        let record = match pending.take() {
            Some(r) => r,
            None => match records.next() {
                None => break,
                Some(r) => {
                    row_no += 1;
                    r.map_err(|source| LoadError::Csv { row: row_no, source })?
                }
            },
        };
        if record.len() == 1 && record.get(0) == Some("") {
            // blank line
            continue;
        }
        if record.len() != width {
            return Err(LoadError::Ragged {
                row: row_no,
                expected: width,
                found: record.len(),
            });
        }
        let mut coords = Vec::with_capacity(n_features);
        for (j, field) in record.iter().take(n_features).enumerate() {
            coords.push(parse_number(field).ok_or_else(|| LoadError::NotNumeric {
                row: row_no,
                col: j + 1,
                value: field.to_string(),
            })?);
        }
        if has_label {
            let raw = &record[n_features];
            let label = match parse_number(raw) {
                Some(0.0) => Label::Inlier,
                Some(1.0) => Label::Outlier,
                _ => {
                    return Err(LoadError::BadLabel {
                        row: row_no,
                        value: raw.to_string(),
                    })
                }
            };
            labels.push(label);
        }
        rows.push(Point::new(coords)?);
    }
    if rows.is_empty() {
        return Err(LoadError::Empty);
    }

    let mut data = Dataset::new(rows)?;
    if has_label {
        data = data.with_labels(labels)?;
    }
    if let Some(mut names) = names {
        names.truncate(n_features);
        data = data.with_names(names)?;
    }
    Ok(data)
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset, LoadError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(io::BufReader::new(file))
}

/// Writes `data` with a header row. Coordinates are printed in shortest
/// round-trip form, so reading the file back reproduces the values exactly.
pub fn write_dataset<W: Write>(data: &Dataset, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = match data.names() {
        Some(n) => n.to_vec(),
        None => (1..=data.dim()).map(|j| format!("x{j}")).collect(),
    };
    if data.labels().is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for (i, p) in data.points().iter().enumerate() {
        let mut row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        if let Some(labels) = data.labels() {
            row.push(if labels[i].is_outlier() { "1" } else { "0" }.into());
        }
        w.write_record(&row)?;
    }
    w.flush()
}

/// Formats `x` with 9 significant digits in plain or exponent notation,
/// whichever is shorter after trailing zeros are dropped.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    rounded.to_string()
}
