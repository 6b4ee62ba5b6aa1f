use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::domain::{Class, Dataset};
use crate::error::{Error, Result};
use crate::resample::ResampleReport;

fn check_dims(d: &Dataset, dims: &[usize]) -> Result<()> {
    if !(dims.len() == 2 || dims.len() == 3) {
        return Err(Error::invalid(format!("scatter needs 2 or 3 dimensions, got {}", dims.len())));
    }
    if let Some(&bad) = dims.iter().find(|&&i| i >= d.n_features()) {
        return Err(Error::invalid(format!(
            "feature index {bad} out of range for {} features",
            d.n_features()
        )));
    }
    if (1..dims.len()).any(|i| dims[..i].contains(&dims[i])) {
        return Err(Error::invalid("scatter dimensions must be distinct"));
    }
    Ok(())
}

/// Per-row `original` / `synthetic` tags; every row is original without a report.
pub fn origins(d: &Dataset, report: Option<&ResampleReport>) -> Vec<&'static str> {
    let mut tags = vec!["original"; d.n_rows()];
    if let Some(r) = report {
        for row in r.generated_rows() {
            if row < tags.len() {
                tags[row] = "synthetic";
            }
        }
    }
    tags
}

/// Plot data: the selected feature columns, then `label` and `origin`.
pub fn scatter_csv(d: &Dataset, dims: &[usize], report: Option<&ResampleReport>) -> Result<String> {
    check_dims(d, dims)?;
    let tags = origins(d, report);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = dims.iter().map(|&i| d.feature_names()[i].as_str()).collect();
    header.extend(["label", "origin"]);
    w.write_record(&header)?;
    for (i, tag) in tags.iter().enumerate() {
        let mut rec: Vec<String> = dims.iter().map(|&c| d.row(i)[c].to_string()).collect();
        rec.push(d.label_name(d.label(i)).to_string());
        rec.push(tag.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A static SVG of two features: circles coloured by class, synthetic rows
/// drawn as hollow diamonds.
pub fn scatter_svg(d: &Dataset, dims: [usize; 2], report: Option<&ResampleReport>) -> Result<String> {
    check_dims(d, &dims)?;
    const SIZE: f64 = 480.0;
    const PAD: f64 = 40.0;
    let tags = origins(d, report);
    let range = |c: usize| {
        let (lo, hi) = d
            .rows()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[c]), hi.max(r[c])));
        if d.is_empty() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let ((x0, x1), (y0, y1)) = (range(dims[0]), range(dims[1]));
    let px = |v: f64| PAD + (v - x0) / (x1 - x0) * (SIZE - 2.0 * PAD);
    let py = |v: f64| SIZE - PAD - (v - y0) / (y1 - y0) * (SIZE - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{w}" height="{w}" fill="none" stroke="gray"/>"#,
        w = SIZE - 2.0 * PAD
    );
    let names = d.feature_names();
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        SIZE - 10.0,
        xml_escape(&names[dims[0]])
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        SIZE / 2.0,
        SIZE / 2.0,
        xml_escape(&names[dims[1]])
    );
    for (i, tag) in tags.iter().enumerate() {
        let colour = if d.label(i) == Class::Positive { "#d62728" } else { "#1f77b4" };
        let (x, y) = (px(d.row(i)[dims[0]]), py(d.row(i)[dims[1]]));
        if *tag == "synthetic" {
            let _ = writeln!(
                s,
                r#"<path d="M{x:.2} {:.2} L{:.2} {y:.2} L{x:.2} {:.2} L{:.2} {y:.2} Z" fill="none" stroke="{colour}"/>"#,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0
            );
        } else {
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{colour}" fill-opacity="0.7"/>"#);
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes the plot-data CSV and, for two dimensions and a given path, the SVG.
pub fn emit_scatter(
    d: &Dataset,
    dims: &[usize],
    path: impl AsRef<Path>,
    report: Option<&ResampleReport>,
    svg_path: Option<&Path>,
) -> Result<()> {
    fs::write(path, scatter_csv(d, dims, report)?)?;
    if let Some(p) = svg_path {
        if dims.len() != 2 {
            return Err(Error::invalid("the SVG rendering is 2-D only"));
        }
        fs::write(p, scatter_svg(d, [dims[0], dims[1]], report)?)?;
    }
    Ok(())
}
