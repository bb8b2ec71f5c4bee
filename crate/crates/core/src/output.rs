//! Tabular results as CSV or JSON, written atomically.
//!
//! CSV files open with `# key = value` metadata lines, then a header row.
//! Nothing time-dependent is written, so identical runs give identical bytes.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::anneal::StateHistogram;
use crate::error::{Error, Result};

/// Environment variable that relocates relative `--out` paths.
pub const OUT_DIR_ENV: &str = "LHZ_JPO_OUT_DIR";

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Float(f64),
    /// Printed with six significant digits.
    Probability(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format!("{f:e}"),
            Cell::Probability(p) => format_probability(*p),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Float(f) => Value::from(*f),
            Cell::Probability(p) => {
                let v: f64 = format_probability(*p).parse().expect("formatted number");
                Value::from(v)
            }
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

/// Fixed-point with six significant digits; zero prints as `0`.
pub fn format_probability(p: f64) -> String {
    if p == 0.0 || !p.is_finite() {
        return if p == 0.0 { "0".into() } else { p.to_string() };
    }
    let decimals = (5 - p.abs().log10().floor() as i32).max(0) as usize;
    format!("{p:.decimals$}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            // keep each entry on one comment line
            out.push_str(&format!("# {k} = {}\n", v.replace('\n', " ")));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, cell) in self.columns.iter().zip(row) {
                    m.insert(c.clone(), cell.json());
                }
                Value::Object(m)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(meta));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON value");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// `state,count,probability` rows, sorted by state, empty states omitted
/// unless `dense`.
pub fn histogram_table(hist: &StateHistogram, dense: bool) -> Table {
    let mut t = Table::new(&["state", "count", "probability"]);
    t.meta("trials", hist.trials)
        .meta("settled", hist.settled())
        .meta("unsettled", hist.unsettled)
        .meta("seed", hist.seed);
    for s in 0..hist.counts.len() {
        let n = hist.counts[s];
        if n == 0 && !dense {
            continue;
        }
        let s = s as u8;
        t.push(vec![
            hist.label(s).into(),
            n.into(),
            Cell::Probability(hist.probability(s)),
        ]);
    }
    t
}

pub fn emit_histogram(hist: &StateHistogram, format: Format, dense: bool) -> String {
    histogram_table(hist, dense).render(format)
}

#[derive(Deserialize)]
struct JsonHistogram {
    metadata: Map<String, Value>,
    rows: Vec<JsonRow>,
}

#[derive(Deserialize)]
struct JsonRow {
    state: String,
    count: u64,
}

/// Reads back a histogram written by [`emit_histogram`] in JSON form.
pub fn parse_histogram_json(text: &str) -> Result<StateHistogram> {
    let bad = |m: String| Error::Parse {
        source_name: "histogram JSON".into(),
        field: "rows".into(),
        message: m,
    };
    let doc: JsonHistogram = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let meta_u64 = |k: &str| -> Result<u64> {
        doc.metadata
            .get(k)
            .and_then(Value::as_str)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("metadata `{k}` missing")))
    };
    let width = doc.rows.first().map_or(4, |r| r.state.len()) as u8;
    let mut hist = StateHistogram::new(width, meta_u64("seed")?);
    hist.trials = meta_u64("trials")?;
    hist.unsettled = meta_u64("unsettled")?;
    for r in &doc.rows {
        let s = u8::from_str_radix(&r.state, 2).map_err(|e| bad(e.to_string()))?;
        if r.state.len() != width as usize || s as usize >= hist.counts.len() {
            return Err(bad(format!("bad state label {}", r.state)));
        }
        hist.counts[s as usize] = r.count;
    }
    Ok(hist)
}

/// Resolves `path` against the output-directory override when relative.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_digits() {
        assert_eq!(format_probability(0.5), "0.500000");
        assert_eq!(format_probability(1.0), "1.00000");
        assert_eq!(format_probability(0.125), "0.125000");
        assert_eq!(format_probability(1.0 / 3.0), "0.333333");
        assert_eq!(format_probability(0.001), "0.00100000");
        assert_eq!(format_probability(0.0), "0");
    }

    fn two_state() -> StateHistogram {
        let mut h = StateHistogram::new(4, 9);
        for k in 0..1000 {
            h.record(Some(if k % 2 == 0 { 0b0101 } else { 0b1010 }));
        }
        h
    }

    #[test]
    fn histogram_csv() {
        let csv = emit_histogram(&two_state(), Format::Csv, false);
        let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(
            data,
            vec!["state,count,probability", "0101,500,0.500000", "1010,500,0.500000"]
        );
        assert!(csv.contains("# seed = 9\n"));
        let dense = emit_histogram(&two_state(), Format::Csv, true);
        assert_eq!(dense.lines().filter(|l| !l.starts_with('#')).count(), 17);
    }

    #[test]
    fn json_round_trip() {
        let mut h = two_state();
        h.record(None);
        let back = parse_histogram_json(&emit_histogram(&h, Format::Json, false)).unwrap();
        assert_eq!(back, h);
        let back = parse_histogram_json(&emit_histogram(&h, Format::Json, true)).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/out.csv");
        write_atomic(&p, "a\n").unwrap();
        write_atomic(&p, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
