use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Every JSON report: what ran, with what resolved settings, and the result.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub config: &'a C,
    pub report: &'a R,
}

pub fn json<C: Serialize, R: Serialize>(command: &str, config: &C, report: &R) -> Result<String, CliError> {
    let doc = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        config,
        report,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

/// Builds a CSV document from a header and rows of already formatted cells.
pub fn csv<I, R>(header: &[&str], rows: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Io(format!("writing csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Shortest decimal that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    v.to_string()
}
