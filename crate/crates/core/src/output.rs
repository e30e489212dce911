//! CSV and JSON writers with a `#`-prefixed metadata header.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header lines written before the CSV body, each prefixed with `# `.
#[derive(Debug, Clone, Default)]
pub struct Metadata {
    lines: Vec<String>,
}

impl Metadata {
    pub fn new(tool: &str) -> Self {
        Self { lines: vec![format!("{tool} {}", env!("CARGO_PKG_VERSION"))] }
    }

    pub fn with(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.lines.push(format!("{key}: {value}"));
        self
    }

    pub fn with_config<T: Serialize>(self, config: &T) -> Result<Self> {
        let json = serde_json::to_string(config)?;
        Ok(self.with("config", json))
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }
}

/// Writes `# ` metadata lines followed by a CSV table.
pub fn write_csv<W: Write>(mut out: W, meta: &Metadata, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    for line in meta.lines() {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, meta: &Metadata, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    write_csv(fs::File::create(path)?, meta, header, rows)
}

/// Reads a CSV written by [`write_csv`], returning the metadata lines and the records.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<String>, Vec<Vec<String>>)> {
    let meta: Vec<String> =
        text.lines().take_while(|l| l.starts_with('#')).map(|l| l.trim_start_matches('#').trim().to_string()).collect();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec?.iter().map(String::from).collect());
    }
    Ok((meta, header, rows))
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_round_trip_with_metadata() {
        let meta = Metadata::new("fracchain").with("seed", 7);
        let mut buf = Vec::new();
        write_csv(&mut buf, &meta, &["a", "b"], &[vec!["1".into(), fmt_f64(0.5)]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let (m, h, rows) = read_csv(&text).unwrap();
        assert_eq!(m[1], "seed: 7");
        assert_eq!(h, vec!["a", "b"]);
        assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.5);
    }
}
