use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::domain::{Class, Dataset};
use crate::error::{Error, Result};
use crate::resample::ResampleReport;

/// How a labelled CSV file is laid out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvSchema {
    /// Header name of the label column, or its 0-based index when the file
    /// has no header. Without a header an empty name means the last column.
    pub label_column: String,
    pub positive_label: String,
    /// When unset, the first non-positive value seen becomes the negative label.
    pub negative_label: Option<String>,
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            label_column: "label".into(),
            positive_label: "1".into(),
            negative_label: None,
            delimiter: b',',
            has_header: true,
        }
    }
}

impl CsvSchema {
    pub fn with_label(mut self, column: impl Into<String>, positive: impl Into<String>) -> Self {
        self.label_column = column.into();
        self.positive_label = positive.into();
        self
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
    read_csv(File::open(path)?, schema)
}

/// Parses a labelled CSV. Errors name the 1-based line and the column.
pub fn read_csv<R: Read>(input: R, schema: &CsvSchema) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();

    let mut line = 0usize;
    let header: Option<Vec<String>> = if schema.has_header {
        line += 1;
        match records.next() {
            Some(r) => Some(r?.iter().map(|s| s.trim().to_string()).collect()),
            None => return Err(Error::invalid("empty CSV: no header row")),
        }
    } else {
        None
    };

    let mut names: Vec<String> = Vec::new();
    let mut label_at: Option<usize> = None;
    let mut width = 0usize;
    if let Some(h) = &header {
        label_at = h.iter().position(|c| *c == schema.label_column);
        let Some(at) = label_at else {
            return Err(Error::invalid(format!(
                "label column '{}' not in header",
                schema.label_column
            )));
        };
        width = h.len();
        names = h.iter().enumerate().filter(|(i, _)| *i != at).map(|(_, c)| c.clone()).collect();
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut negative = schema.negative_label.clone();
    for record in records {
        line += 1;
        let record = record?;
        if record.len() == 1 && record.get(0).is_some_and(|c| c.trim().is_empty()) {
            continue;
        }
        if header.is_none() && label_at.is_none() {
            width = record.len();
            let at = if schema.label_column.is_empty() {
                width - 1
            } else {
                schema.label_column.parse::<usize>().map_err(|_| {
                    Error::invalid("without a header the label column must be an index")
                })?
            };
            if at >= width {
                return Err(Error::invalid(format!("label column {at} beyond {width} columns")));
            }
            label_at = Some(at);
            names = (0..width - 1).map(|i| format!("f{i}")).collect();
        }
        let at = label_at.unwrap_or_default();
        if record.len() != width {
            return Err(Error::Parse {
                row: line,
                column: "*".into(),
                message: format!("{} fields, expected {width}", record.len()),
            });
        }
        let column_name = |i: usize| match &header {
            Some(h) => h[i].clone(),
            None => i.to_string(),
        };
        let mut row = Vec::with_capacity(width - 1);
        for (i, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if i == at {
                if cell == schema.positive_label {
                    labels.push(Class::Positive);
                } else if negative.as_deref() == Some(cell) {
                    labels.push(Class::Negative);
                } else if negative.is_none() {
                    negative = Some(cell.to_string());
                    labels.push(Class::Negative);
                } else {
                    return Err(Error::Parse {
                        row: line,
                        column: column_name(i),
                        message: format!("unknown label value '{cell}'"),
                    });
                }
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                _ => {
                    return Err(Error::Parse {
                        row: line,
                        column: column_name(i),
                        message: format!("'{cell}' is not a finite number"),
                    })
                }
            }
        }
        rows.push(row);
    }
    if names.is_empty() {
        return Err(Error::invalid("CSV has no feature columns"));
    }
    let negative = negative.unwrap_or_else(|| default_negative(&schema.positive_label));
    Ok(Dataset::new(names, rows, labels)?.with_label_names(schema.positive_label.clone(), negative))
}

fn default_negative(positive: &str) -> String {
    if positive == "0" { "1" } else { "0" }.to_string()
}

pub fn save_csv(d: &Dataset, path: impl AsRef<Path>, schema: &CsvSchema) -> Result<()> {
    let mut f = File::create(path)?;
    write_csv(d, &mut f, schema)?;
    f.flush()?;
    Ok(())
}

/// Writes features then the label column. Values use the shortest text that
/// parses back to the same double.
pub fn write_csv<W: Write>(d: &Dataset, out: W, schema: &CsvSchema) -> Result<()> {
    let mut w = csv::WriterBuilder::new().delimiter(schema.delimiter).from_writer(out);
    if schema.has_header {
        let label = if schema.label_column.is_empty() { "label" } else { &schema.label_column };
        let mut header: Vec<&str> = d.feature_names().iter().map(String::as_str).collect();
        header.push(label);
        w.write_record(&header)?;
    }
    let mut record: Vec<String> = Vec::with_capacity(d.n_features() + 1);
    for i in 0..d.n_rows() {
        record.clear();
        record.extend(d.row(i).iter().map(|v| v.to_string()));
        record.push(d.label_name(d.label(i)).to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// `out.csv` → `out.csv.provenance.json`.
pub fn sidecar_path(path: impl AsRef<Path>) -> PathBuf {
    let mut s = path.as_ref().as_os_str().to_owned();
    s.push(".provenance.json");
    PathBuf::from(s)
}

/// Saves the dataset and, next to it, the report's provenance as JSON.
pub fn save_with_provenance(
    d: &Dataset,
    path: impl AsRef<Path>,
    schema: &CsvSchema,
    report: &ResampleReport,
) -> Result<PathBuf> {
    save_csv(d, &path, schema)?;
    let side = sidecar_path(&path);
    let mut f = File::create(&side)?;
    serde_json::to_writer_pretty(&mut f, report)?;
    f.write_all(b"\n")?;
    Ok(side)
}
