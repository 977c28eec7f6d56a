//! CSV and JSON writers. Both carry the resolved configuration so a
//! result file documents how it was produced.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use parastab::experiments::SweepResult;
use serde::Serialize;

use crate::config::{to_config_text, OutputFormat, RunConfig};

pub const GENERATOR: &str = concat!("parastab ", env!("CARGO_PKG_VERSION"));

fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV: `#` header block (generator, optional timestamp, config, units,
/// notes), one header row, then one line per row. Numbers use 17
/// significant digits; failed cells are empty and the last column holds
/// the row error, if any.
pub fn render_csv(cfg: &RunConfig, table: &SweepResult, reproducible: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {GENERATOR}");
    if !reproducible {
        let _ = writeln!(out, "# generated_unix_time = {}", unix_time());
    }
    out.push_str("# config:\n");
    for line in to_config_text(cfg).lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "#   {line}");
        }
    }
    let units: Vec<String> = table
        .columns
        .iter()
        .map(|c| format!("{}={}", c.name, if c.unit.is_empty() { "1" } else { &c.unit }))
        .collect();
    let _ = writeln!(out, "# units: {}", units.join(", "));
    for note in &table.notes {
        let _ = writeln!(out, "# note: {}", note.replace('\n', " "));
    }
    let header: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).chain(["error"]).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &table.rows {
        for v in &row.values {
            if let Some(x) = v {
                let _ = write!(out, "{x:.16e}");
            }
            out.push(',');
        }
        if let Some(e) = &row.error {
            out.push_str(&csv_field(e));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonColumn<'a> {
    name: &'a str,
    unit: &'a str,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    values: &'a [Option<f64>],
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    generator: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix_time: Option<u64>,
    config: String,
    columns: Vec<JsonColumn<'a>>,
    rows: Vec<JsonRow<'a>>,
    notes: &'a [String],
}

/// JSON mirror of [`render_csv`].
pub fn render_json(cfg: &RunConfig, table: &SweepResult, reproducible: bool) -> String {
    let doc = JsonDoc {
        generator: GENERATOR,
        generated_unix_time: (!reproducible).then(unix_time),
        config: to_config_text(cfg),
        columns: table
            .columns
            .iter()
            .map(|c| JsonColumn {
                name: &c.name,
                unit: &c.unit,
            })
            .collect(),
        rows: table
            .rows
            .iter()
            .map(|r| JsonRow {
                values: &r.values,
                error: r.error.as_deref(),
            })
            .collect(),
        notes: &table.notes,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn render(cfg: &RunConfig, table: &SweepResult, reproducible: bool) -> String {
    match cfg.format {
        OutputFormat::Csv => render_csv(cfg, table, reproducible),
        OutputFormat::Json => render_json(cfg, table, reproducible),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
