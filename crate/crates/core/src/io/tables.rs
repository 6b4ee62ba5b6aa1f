use std::collections::BTreeSet;
use std::io::Read;

use crate::error::{Error, Result};

/// Flat `key = value` lines. Blank lines and `#` comments are skipped, a
/// leading `--` on keys is dropped, and repeated keys are rejected.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                row: i + 1,
                column: "-".into(),
                message: "expected key = value".into(),
            });
        };
        let key = k.trim().trim_start_matches("--").to_string();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Parse {
                row: i + 1,
                column: "key".into(),
                message: format!("bad key '{}'", k.trim()),
            });
        }
        if !seen.insert(key.clone()) {
            return Err(Error::Parse {
                row: i + 1,
                column: key,
                message: "key given twice".into(),
            });
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Named numeric columns, e.g. per-fold scores of two methods.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreColumns {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl ScoreColumns {
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| Error::invalid(format!("no column '{name}' (have: {})", self.names.join(", "))))
    }
}

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).flexible(false).trim(csv::Trim::All).from_reader(input)
}

/// A headed CSV of numbers. Every cell must parse as a finite real.
pub fn read_score_columns<R: Read>(input: R) -> Result<ScoreColumns> {
    let mut r = csv_reader(input);
    let names: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if names.is_empty() || names.iter().all(String::is_empty) {
        return Err(Error::invalid("score file has no header"));
    }
    let mut columns = vec![Vec::new(); names.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        for (c, cell) in rec.iter().enumerate() {
            let v = cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                row: line + 2,
                column: names[c].clone(),
                message: format!("'{cell}' is not a finite number"),
            })?;
            columns[c].push(v);
        }
    }
    if columns[0].is_empty() {
        return Err(Error::invalid("score file has no rows"));
    }
    Ok(ScoreColumns { names, columns })
}

/// Rows of F1 values: the first column names the technique, the remaining
/// header cells name datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct F1Grid {
    pub datasets: Vec<String>,
    pub rows: Vec<(String, Vec<f64>)>,
}

impl F1Grid {
    pub fn row(&self, technique: &str) -> Option<&[f64]> {
        self.rows.iter().find(|(t, _)| t == technique).map(|(_, v)| v.as_slice())
    }
}

pub fn read_f1_grid<R: Read>(input: R) -> Result<F1Grid> {
    let mut r = csv_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.len() < 2 {
        return Err(Error::invalid("F1 grid needs a technique column and at least one dataset column"));
    }
    let datasets = header[1..].to_vec();
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let name = rec.get(0).unwrap_or_default().to_string();
        if name.is_empty() {
            return Err(Error::Parse {
                row: line + 2,
                column: header[0].clone(),
                message: "empty technique name".into(),
            });
        }
        let values = rec
            .iter()
            .skip(1)
            .enumerate()
            .map(|(c, cell)| {
                cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                    row: line + 2,
                    column: datasets[c].clone(),
                    message: format!("'{cell}' is not a finite number"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((name, values));
    }
    if rows.is_empty() {
        return Err(Error::invalid("F1 grid has no rows"));
    }
    Ok(F1Grid { datasets, rows })
}
