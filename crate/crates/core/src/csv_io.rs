//! CSV ingestion and output for samples.
//!
//! One value per row for univariate data, two comma-separated columns for
//! paired data. A first row that does not parse as numbers is a header.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sample::{Dataset, Observations, PairedSample, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    OneColumn,
    TwoColumn,
}

impl Schema {
    fn columns(self) -> usize {
        match self {
            Schema::OneColumn => 1,
            Schema::TwoColumn => 2,
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

fn parse_row(record: &csv::StringRecord, row: usize) -> Result<Vec<f64>> {
    record
        .iter()
        .enumerate()
        .map(|(col, cell)| {
            let cell = cell.trim();
            let value: f64 = cell.parse().map_err(|_| Error::NonNumericCell {
                row,
                column: col + 1,
                cell: cell.to_owned(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    index: row - 1,
                    value,
                });
            }
            Ok(value)
        })
        .collect()
}

/// Reads a sample from CSV. Rows are numbered from 1 in error messages.
pub fn load_csv<R: Read>(source: R, schema: Schema) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let expected = schema.columns();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); expected];
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let row = i + 1;
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row,
                found: record.len(),
                expected,
            });
        }
        if record.iter().any(|c| c.trim().is_empty()) {
            return Err(Error::LengthMismatch {
                xs: columns[0].len() + usize::from(!record[0].trim().is_empty()),
                ys: columns.last().map_or(0, Vec::len)
                    + usize::from(!record[expected - 1].trim().is_empty()),
            });
        }
        match parse_row(&record, row) {
            Ok(values) => {
                for (column, v) in columns.iter_mut().zip(values) {
                    column.push(v);
                }
            }
            Err(Error::NonNumericCell { .. }) if row == 1 => continue,
            Err(e) => return Err(e),
        }
    }

    match schema {
        Schema::OneColumn => {
            let values = columns.pop().unwrap_or_default();
            Ok(Dataset::Univariate(Sample::new(values)?))
        }
        Schema::TwoColumn => {
            let ys = columns.pop().unwrap_or_default();
            let xs = columns.pop().unwrap_or_default();
            if xs.is_empty() {
                return Err(Error::EmptySample);
            }
            Ok(Dataset::Paired(PairedSample::new(xs, ys)?))
        }
    }
}

/// Convenience wrapper returning a univariate sample.
pub fn load_sample<R: Read>(source: R) -> Result<Sample> {
    match load_csv(source, Schema::OneColumn)? {
        Dataset::Univariate(s) => Ok(s),
        Dataset::Paired(_) => unreachable!("one-column schema yields a univariate sample"),
    }
}

/// Convenience wrapper returning a paired sample.
pub fn load_paired<R: Read>(source: R) -> Result<PairedSample> {
    match load_csv(source, Schema::TwoColumn)? {
        Dataset::Paired(p) => Ok(p),
        Dataset::Univariate(_) => unreachable!("two-column schema yields a paired sample"),
    }
}

/// Writes one value per row, without a header. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_csv<W: Write>(sample: &Sample, sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    for v in sample.values() {
        writer.write_record([v.to_string()]).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::Csv(e.to_string()))
}

/// Writes `x,y` rows, without a header.
pub fn write_paired_csv<W: Write>(data: &PairedSample, sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    for i in 0..data.len() {
        writer
            .write_record([data.xs()[i].to_string(), data.ys()[i].to_string()])
            .map_err(csv_err)?;
    }
    writer.flush().map_err(|e| Error::Csv(e.to_string()))
}
