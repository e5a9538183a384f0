use std::io::Read;

use serde::Serialize;

use super::{classify, DichotomousContext, InterferenceReport};
use crate::error::{Error, Result};
use crate::scalars::parse_rational;

/// One classified CSV row: `P(a₁), P(b₁|a₁), P(b₁|a₂), P(b₁)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsvRow {
    pub row: usize,
    pub report: InterferenceReport,
}

fn row_error(row: usize, message: impl Into<String>) -> Error {
    Error::Row {
        row,
        message: message.into(),
    }
}

/// Reads rows of four probabilities. A first line whose leading field is not
/// a number is treated as a header; blank lines and `#` comments are skipped.
/// Row numbers in errors are 1-based line numbers.
pub fn classify_csv<R: Read>(reader: R) -> Result<Vec<CsvRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for (index, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(index + 1);
            row_error(line, e.to_string())
        })?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(index + 1);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let first = record.get(0).unwrap_or("");
        if out.is_empty()
            && index == 0
            && parse_rational(first).is_err()
            && first.parse::<f64>().is_err()
        {
            continue;
        }
        if record.len() != 4 {
            return Err(row_error(
                line,
                format!("expected 4 fields, found {}", record.len()),
            ));
        }
        let mut values = Vec::with_capacity(4);
        for field in record.iter() {
            let v = parse_rational(field)
                .map_err(|_| row_error(line, format!("`{field}` is not a probability")))?;
            values.push(v);
        }
        let mut v = values.into_iter();
        let ctx = DichotomousContext::from_first_outcome(
            v.next().expect("4 fields"),
            v.next().expect("4 fields"),
            v.next().expect("4 fields"),
            v.next().expect("4 fields"),
        )
        .map_err(|e| row_error(line, e.to_string()))?;
        out.push(CsvRow {
            row: line,
            report: classify(&ctx),
        });
    }
    Ok(out)
}

pub fn classify_csv_str(text: &str) -> Result<Vec<CsvRow>> {
    classify_csv(text.as_bytes())
}
