use std::io::Write;

use serde_json::Value;

use crate::config::Format;
use crate::failure::Failure;

/// A command's result: a JSON document plus a header and a rectangular table
/// used for the text and CSV formats.
pub struct Rendered {
    pub json: Value,
    pub preamble: Vec<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Rendered {
    /// Key/value output, one row per field.
    pub fn pairs(json: Value, preamble: Vec<String>, pairs: Vec<(&str, String)>) -> Self {
        Self {
            json,
            preamble,
            headers: vec!["quantity".into(), "value".into()],
            rows: pairs
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v])
                .collect(),
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
        let io = |e: std::io::Error| Failure::io(format!("write failed: {e}"));
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                writeln!(out, "{text}").map_err(io)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                let csv_err = |e: csv::Error| Failure::io(format!("write failed: {e}"));
                w.write_record(&self.headers).map_err(csv_err)?;
                for row in &self.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                w.flush().map_err(io)
            }
            Format::Table => {
                for line in &self.preamble {
                    writeln!(out, "{line}").map_err(io)?;
                }
                if !self.preamble.is_empty() && !self.headers.is_empty() {
                    writeln!(out).map_err(io)?;
                }
                out.write_all(table(&self.headers, &self.rows).as_bytes())
                    .map_err(io)
            }
        }
    }
}

/// Left-aligned columns separated by two spaces, with a rule under the header.
pub fn table(headers: &[String], rows: &[Vec<String>]) -> String {
    if headers.is_empty() {
        return String::new();
    }
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(headers);
    out.push_str(&line(
        &widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>(),
    ));
    for row in rows {
        out.push_str(&line(row));
    }
    out
}
