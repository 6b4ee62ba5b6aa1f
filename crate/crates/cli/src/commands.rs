use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::time::Instant;

use qsmote::eval::{run_experiment, ExperimentResult, Metric};
use qsmote::io::{
    gen_gaussian_binary, read_csv, read_f1_grid, read_score_columns, save_with_provenance, scatter_csv, scatter_svg,
    sha256_hex, write_csv, CsvSchema, RunReport, SynthSpec,
};
use qsmote::metrics::{improvement_pct, wilcoxon_signed_rank, WilcoxonOutcome};
use qsmote::resample::ResampleReport;
use qsmote::{domain, resample, BalanceTarget, Dataset, ResamplePlan};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::config::resolved;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag combinations (exit 1).
    Usage(String),
    /// Unreadable or invalid input data (exit 2).
    Data(qsmote::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Data(e) => write!(f, "{e}"),
        }
    }
}

impl From<qsmote::Error> for CliError {
    fn from(e: qsmote::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.into())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// What a command produced, before the output format is chosen.
struct Outcome {
    result: Value,
    text: String,
    csv: String,
}

struct Run<'a> {
    common: &'a Common,
    report: RunReport,
}

impl<'a> Run<'a> {
    fn new<T: Serialize>(command: &str, args: &T, common: &'a Common) -> Self {
        let mut report = RunReport::new(command, common.seed(), resolved(args));
        // Already read once while merging flags; record what was applied.
        if let Some(p) = &common.config {
            if let Ok(bytes) = fs::read(p) {
                report.add_input(p.display().to_string(), &bytes);
            }
        }
        Run { common, report }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::Data(qsmote::Error::InvalidInput(format!("cannot read {}: {e}", path.display()))))?;
        self.report.add_input(path.display().to_string(), &bytes);
        Ok(bytes)
    }

    fn dataset(&mut self, path: &Path, schema: &CsvSchema) -> Result<Dataset> {
        let bytes = self.read(path)?;
        Ok(read_csv(bytes.as_slice(), schema)?)
    }

    fn finish(mut self, out: Outcome) -> Result<String> {
        self.report.result = out.result;
        let json = self.report.to_json()?;
        if let Some(p) = &self.common.report {
            fs::write(p, &json)?;
        }
        Ok(match self.common.format {
            Format::Json => json,
            Format::Text => out.text,
            Format::Csv => out.csv,
        })
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Data(e.into()))
}

/// Dispatches a parsed command and returns what goes to stdout.
pub fn run(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Imbalance(a) => imbalance(a),
        Command::Resample(a) => resample_cmd(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Compare(a) => compare(a),
        Command::Wilcoxon(a) => wilcoxon(a),
        Command::Improve(a) => improve(a),
        Command::Bench(a) => bench(a),
        Command::Scatter(a) => scatter(a),
    }
}

fn csv_bytes(d: &Dataset, schema: &CsvSchema) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(d, &mut buf, schema)?;
    Ok(buf)
}

fn per_feature(v: &[f64], n: usize, what: &str) -> Result<Vec<f64>> {
    match v.len() {
        1 => Ok(vec![v[0]; n]),
        len if len == n => Ok(v.to_vec()),
        len => Err(usage(format!("--{what} has {len} values for {n} features"))),
    }
}

fn gen(a: &GenArgs) -> Result<String> {
    let run = Run::new("gen", a, &a.common);
    let n = a.features;
    let spec = SynthSpec {
        class_means: [per_feature(&a.majority_mean, n, "majority-mean")?, per_feature(&a.minority_mean, n, "minority-mean")?],
        class_scales: [
            per_feature(&a.majority_scale, n, "majority-scale")?,
            per_feature(&a.minority_scale, n, "minority-scale")?,
        ],
        ..SynthSpec::new(a.n_majority, a.n_minority, n, a.common.seed())
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let d = gen_gaussian_binary(&spec)?;
    let bytes = csv_bytes(&d, &CsvSchema::default())?;
    let result = json!({
        "rows": d.n_rows(),
        "n_majority": a.n_majority,
        "n_minority": a.n_minority,
        "n_features": n,
        "output": a.output.as_ref().map(|p| p.display().to_string()),
        "sha256": sha256_hex(&bytes),
    });
    let text = match &a.output {
        Some(p) => {
            fs::write(p, &bytes)?;
            format!("wrote {} rows ({} majority, {} minority) to {}\n", d.n_rows(), a.n_majority, a.n_minority, p.display())
        }
        None => String::from_utf8_lossy(&bytes).into_owned(),
    };
    let csv = if a.output.is_some() {
        format!("rows,n_majority,n_minority,n_features\n{},{},{},{n}\n", d.n_rows(), a.n_majority, a.n_minority)
    } else {
        text.clone()
    };
    run.finish(Outcome { result, text, csv })
}

fn imbalance(a: &ImbalanceArgs) -> Result<String> {
    let schema = a.schema.schema().map_err(usage)?;
    let mut run = Run::new("imbalance", a, &a.common);
    let d = run.dataset(&a.input, &schema)?;
    let before = domain::imbalance_report(&d)?;
    let out = domain::make_imbalanced(&d, a.ir, a.common.seed())?;
    let after = domain::imbalance_report(&out)?;
    let bytes = csv_bytes(&out, &schema)?;
    fs::write(&a.output, &bytes)?;
    let ir = |r: &domain::ImbalanceReport| r.ir.map_or("undefined".to_string(), |v| format!("{v:.4}"));
    let mut text = String::from("stage\tmajority\tminority\tir\n");
    let mut csv = String::from("stage,majority,minority,ir\n");
    for (stage, r) in [("before", &before), ("after", &after)] {
        let _ = writeln!(text, "{stage}\t{}\t{}\t{}", r.majority_count, r.minority_count, ir(r));
        let _ = writeln!(csv, "{stage},{},{},{}", r.majority_count, r.minority_count, r.ir.map_or(String::new(), |v| v.to_string()));
    }
    let result = json!({
        "before": before,
        "after": after,
        "output": a.output.display().to_string(),
        "sha256": sha256_hex(&bytes),
    });
    run.finish(Outcome { result, text, csv })
}

fn report_summary(r: &ResampleReport) -> Result<Value> {
    let mut v = to_value(r)?;
    if let Value::Object(m) = &mut v {
        m.remove("provenance");
    }
    Ok(v)
}

fn resample_cmd(a: &ResampleArgs) -> Result<String> {
    let schema = a.schema.schema().map_err(usage)?;
    let plan = a.plan.plan(a.method, a.common.seed()).map_err(|e| usage(e.to_string()))?;
    let mut run = Run::new("resample", a, &a.common);
    let d = run.dataset(&a.input, &schema)?;
    let (out, rep) = resample(&d, &plan)?;
    let sidecar = save_with_provenance(&out, &a.output, &schema, &rep)?;
    let digest = sha256_hex(&fs::read(&a.output)?);

    let mut text = String::new();
    let _ = writeln!(text, "method\t{}", rep.method.name());
    let _ = writeln!(text, "minority_class\t{}", d.label_name(rep.minority_class));
    let _ = writeln!(text, "counts_before\t{} minority / {} majority", rep.counts_before.minority, rep.counts_before.majority);
    let _ = writeln!(text, "counts_after\t{} minority / {} majority", rep.counts_after.minority, rep.counts_after.majority);
    let _ = writeln!(text, "synthetic\t{}", rep.n_synthetic);
    if rep.n_quantum_derived > 0 {
        let _ = writeln!(text, "quantum_derived\t{}", rep.n_quantum_derived);
    }
    if rep.n_removed > 0 {
        let _ = writeln!(text, "removed\t{}", rep.n_removed);
    }
    if rep.k_clamped {
        let _ = writeln!(text, "k\t{} (requested {})", rep.k_used, rep.k_requested);
    }
    if let Some(f) = &rep.fallback {
        let _ = writeln!(text, "fallback\t{f}");
    }
    if rep.overshoot > 0 {
        let _ = writeln!(text, "overshoot\t{}", rep.overshoot);
    }
    let _ = writeln!(text, "output\t{}\nprovenance\t{}", a.output.display(), sidecar.display());

    let csv = format!(
        "method,minority_before,majority_before,minority_after,majority_after,synthetic,quantum_derived,removed\n{},{},{},{},{},{},{},{}\n",
        rep.method.name(),
        rep.counts_before.minority,
        rep.counts_before.majority,
        rep.counts_after.minority,
        rep.counts_after.majority,
        rep.n_synthetic,
        rep.n_quantum_derived,
        rep.n_removed
    );
    let result = json!({
        "report": report_summary(&rep)?,
        "output": a.output.display().to_string(),
        "provenance": sidecar.display().to_string(),
        "sha256": digest,
    });
    run.finish(Outcome { result, text, csv })
}

fn metric_header(metrics: &[Metric], sep: &str) -> String {
    metrics.iter().map(|m| m.name()).collect::<Vec<_>>().join(sep)
}

fn experiment_plan(cond: Condition, plan: &PlanArgs, run: &Run) -> Result<Option<ResamplePlan>> {
    cond.0
        .map(|m| plan.plan(m, run.common.seed()))
        .transpose()
        .map_err(|e| usage(e.to_string()))
}

fn evaluate(a: &EvaluateArgs) -> Result<String> {
    let schema = a.schema.schema().map_err(usage)?;
    let clf = a.classifier.spec().map_err(|e| usage(e.to_string()))?;
    let split = a.split.split();
    let mut run = Run::new("evaluate", a, &a.common);
    let plan = experiment_plan(a.method, &a.plan, &run)?;
    let d = run.dataset(&a.input, &schema)?;
    let res = run_experiment(&d, plan.as_ref(), &clf, &split, a.common.seed())?;

    let metrics = Metric::ALL;
    let mut text = format!(
        "split\t{}\ncondition\t{}\nclassifier\t{}\npositive\t{}\n\nfold\t{}\n",
        res.split,
        res.condition,
        res.classifier,
        d.label_name(res.positive_class),
        metric_header(&metrics, "\t")
    );
    let mut csv = format!("fold,{}\n", metric_header(&metrics, ","));
    let row = |label: String, get: &dyn Fn(Metric) -> f64, sep: &str, full: bool| {
        let cells: Vec<String> =
            metrics.iter().map(|&m| if full { get(m).to_string() } else { format!("{:.3}", get(m)) }).collect();
        format!("{label}{sep}{}\n", cells.join(sep))
    };
    for f in &res.folds {
        text += &row(f.fold.to_string(), &|m| f.metrics.get(m), "\t", false);
        csv += &row(f.fold.to_string(), &|m| f.metrics.get(m), ",", true);
    }
    text += &row("mean".into(), &|m| res.mean.get(m), "\t", false);
    text += &row("std".into(), &|m| res.std.get(m), "\t", false);
    csv += &row("mean".into(), &|m| res.mean.get(m), ",", true);
    csv += &row("std".into(), &|m| res.std.get(m), ",", true);
    let undefined: usize = res.folds.iter().map(|f| f.metrics.undefined.len()).sum();
    if undefined > 0 {
        let _ = writeln!(text, "({undefined} undefined metric values were scored 0)");
    }
    run.finish(Outcome { result: to_value(&res)?, text, csv })
}

fn compare(a: &CompareArgs) -> Result<String> {
    let schema = a.schema.schema().map_err(usage)?;
    let clf = a.classifier.spec().map_err(|e| usage(e.to_string()))?;
    if a.methods.is_empty() || a.metrics.is_empty() {
        return Err(usage("compare needs at least one method and one metric"));
    }
    let split = a.split.split();
    let mut run = Run::new("compare", a, &a.common);
    let plans = a
        .methods
        .iter()
        .map(|&c| experiment_plan(c, &a.plan, &run))
        .collect::<Result<Vec<_>>>()?;
    let d = run.dataset(&a.input, &schema)?;
    let experiments = plans
        .iter()
        .map(|p| run_experiment(&d, p.as_ref(), &clf, &split, a.common.seed()))
        .collect::<qsmote::Result<Vec<ExperimentResult>>>()?;

    let name = |e: &ExperimentResult| e.condition.clone();
    let mut text = format!("split\t{}\nclassifier\t{}\n\nmethod\t{}\n", split.describe(), clf.describe(), metric_header(&a.metrics, "\t"));
    let mut csv = format!("method,{}\n", metric_header(&a.metrics, ","));
    let mut grid = Vec::new();
    for e in &experiments {
        let cells: Vec<f64> = a.metrics.iter().map(|&m| e.mean.get(m)).collect();
        let _ = writeln!(text, "{}\t{}", name(e), cells.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join("\t"));
        let _ = writeln!(csv, "{},{}", name(e), cells.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
        let values: serde_json::Map<String, Value> = a.metrics.iter().zip(&cells).map(|(m, v)| (m.name().to_string(), json!(v))).collect();
        grid.push(json!({ "method": name(e), "mean": values }));
    }
    let per_fold = json!({ "split": split.describe(), "experiments": experiments });
    if let Some(p) = &a.per_fold {
        let mut s = serde_json::to_string_pretty(&per_fold).map_err(|e| CliError::Data(e.into()))?;
        s.push('\n');
        fs::write(p, s)?;
        let _ = writeln!(text, "\nper-fold results\t{}", p.display());
    }
    let result = json!({
        "split": split.describe(),
        "classifier": clf.describe(),
        "metrics": a.metrics.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "grid": grid,
        "per_fold": per_fold,
    });
    run.finish(Outcome { result, text, csv })
}

fn wilcoxon(a: &WilcoxonArgs) -> Result<String> {
    let mut run = Run::new("wilcoxon", a, &a.common);
    let bytes = run.read(&a.input)?;
    let scores = read_score_columns(bytes.as_slice())?;
    let mut free = scores.names.iter().filter(|n| !n.eq_ignore_ascii_case("fold"));
    let col_a = match &a.a {
        Some(c) => c.clone(),
        None => free.next().cloned().ok_or_else(|| usage("no score column found; pass --a"))?,
    };
    let col_b = match &a.b {
        Some(c) => c.clone(),
        None => scores
            .names
            .iter()
            .filter(|n| !n.eq_ignore_ascii_case("fold") && **n != col_a)
            .find(|_| true)
            .cloned()
            .ok_or_else(|| usage("no second score column found; pass --b"))?,
    };
    let (xa, xb) = (scores.column(&col_a)?, scores.column(&col_b)?);
    let outcome = wilcoxon_signed_rank(xa, xb)?;
    let (text, csv) = match &outcome {
        WilcoxonOutcome::Tested(r) => (
            r.report(xa, xb, &col_a, &col_b),
            format!(
                "a,b,n,t_plus,t_minus,w,z,p_exact,p_approx,r\n{col_a},{col_b},{},{},{},{},{},{},{},{}\n",
                r.n_pairs,
                r.w_plus,
                r.w_minus,
                r.w,
                r.z,
                r.p_exact.map_or(String::new(), |p| p.to_string()),
                r.p_approx,
                r.effect_size_r
            ),
        ),
        WilcoxonOutcome::Undefined { n_zeros_dropped } => (
            format!("{col_a} vs {col_b}: all {n_zeros_dropped} differences are zero; the test is undefined\n"),
            format!("a,b,n,t_plus,t_minus,w,z,p_exact,p_approx,r\n{col_a},{col_b},0,,,,,,,\n"),
        ),
    };
    let result = json!({ "a": col_a, "b": col_b, "outcome": outcome });
    run.finish(Outcome { result, text, csv })
}

fn improve(a: &ImproveArgs) -> Result<String> {
    let mut run = Run::new("improve", a, &a.common);
    let techniques = read_f1_grid(run.read(&a.techniques)?.as_slice())?;
    let original = read_f1_grid(run.read(&a.original)?.as_slice())?;
    let base = match original.row(&a.baseline) {
        Some(r) => r,
        None if original.rows.len() == 1 => &original.rows[0].1,
        None => return Err(usage(format!("no '{}' row in {}", a.baseline, a.original.display()))),
    };
    let base_of = |ds: &str| -> Result<f64> {
        original
            .datasets
            .iter()
            .position(|o| o == ds)
            .map(|i| base[i])
            .ok_or_else(|| CliError::Data(qsmote::Error::InvalidInput(format!("dataset '{ds}' missing from the original grid"))))
    };
    let bases = techniques.datasets.iter().map(|ds| base_of(ds)).collect::<Result<Vec<f64>>>()?;

    let mut text = format!("technique\t{}\n", techniques.datasets.join("\t"));
    let mut csv = format!("technique,{}\n", techniques.datasets.join(","));
    let mut rows = Vec::new();
    for (name, f1s) in &techniques.rows {
        let pct: Vec<Option<f64>> = f1s.iter().zip(&bases).map(|(&t, &o)| improvement_pct(t, o)).collect();
        let cell = |p: &Option<f64>, full: bool| match p {
            Some(v) if full => v.to_string(),
            Some(v) => format!("{v:.2}"),
            None => "undefined".to_string(),
        };
        let _ = writeln!(text, "{name}\t{}", pct.iter().map(|p| cell(p, false)).collect::<Vec<_>>().join("\t"));
        let _ = writeln!(csv, "{name},{}", pct.iter().map(|p| cell(p, true)).collect::<Vec<_>>().join(","));
        rows.push(json!({ "technique": name, "improvement_pct": pct }));
    }
    let result = json!({ "datasets": techniques.datasets, "baseline": bases, "rows": rows });
    run.finish(Outcome { result, text, csv })
}

/// Peak resident set size of this process in kB, where the OS reports it.
fn peak_rss_kb() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn bench(a: &BenchArgs) -> Result<String> {
    let run = Run::new("bench", a, &a.common);
    let spec = SynthSpec::new(a.n_majority, a.n_minority, a.features, a.common.seed());
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let d = gen_gaussian_binary(&spec)?;
    let baseline_kb = peak_rss_kb();
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
    }

    let mut text = format!(
        "workload\t{} majority / {} minority x {} features, {} added rows\nmethod\trows_out\tgenerated\tseconds\tpeak_rss_kb\n",
        a.n_majority, a.n_minority, a.features, a.extra
    );
    let mut csv = String::from("method,rows_out,generated,seconds,peak_rss_kb\n");
    let mut rows = Vec::new();
    for &m in &a.methods {
        let plan = ResamplePlan::new(m).with_seed(a.common.seed()).with_target(BalanceTarget::Extra(a.extra));
        let start = Instant::now();
        let (out, rep) = resample(&d, &plan)?;
        let secs = start.elapsed().as_secs_f64();
        let peak = peak_rss_kb();
        let generated = rep.n_synthetic + rep.n_quantum_derived;
        let peak_text = peak.map_or("n/a".to_string(), |p| p.to_string());
        let _ = writeln!(text, "{}\t{}\t{generated}\t{secs:.6}\t{peak_text}", m.name(), out.n_rows());
        let _ = writeln!(csv, "{},{},{generated},{secs},{}", m.name(), out.n_rows(), peak.map_or(String::new(), |p| p.to_string()));
        let mut row = json!({
            "method": m.name(),
            "rows_out": out.n_rows(),
            "generated": generated,
            "seconds": secs,
            "peak_rss_kb": peak,
        });
        if let Some(dir) = &a.out_dir {
            let path = dir.join(format!("{}.csv", m.name()));
            save_with_provenance(&out, &path, &CsvSchema::default(), &rep)?;
            row["output"] = json!(path.display().to_string());
        }
        rows.push(row);
    }
    let _ = writeln!(text, "(peak_rss_kb is the process high-water mark; {} kB before resampling)", baseline_kb.map_or("n/a".into(), |b| b.to_string()));
    let result = json!({ "baseline_rss_kb": baseline_kb, "methods": rows });
    run.finish(Outcome { result, text, csv })
}

fn scatter(a: &ScatterArgs) -> Result<String> {
    let schema = a.schema.schema().map_err(usage)?;
    if !(a.dims.len() == 2 || a.dims.len() == 3) {
        return Err(usage(format!("--dims takes 2 or 3 feature indices, got {}", a.dims.len())));
    }
    if a.svg.is_some() && a.dims.len() != 2 {
        return Err(usage("--svg needs exactly two --dims"));
    }
    let mut run = Run::new("scatter", a, &a.common);
    let d = run.dataset(&a.input, &schema)?;
    let rep: Option<ResampleReport> = match &a.provenance {
        Some(p) => Some(serde_json::from_slice(&run.read(p)?).map_err(|e| CliError::Data(e.into()))?),
        None => None,
    };
    let plot = scatter_csv(&d, &a.dims, rep.as_ref())?;
    if let Some(p) = &a.svg {
        fs::write(p, scatter_svg(&d, [a.dims[0], a.dims[1]], rep.as_ref())?)?;
    }
    let synthetic = plot.lines().skip(1).filter(|l| l.ends_with(",synthetic")).count();
    let names: Vec<&str> = a.dims.iter().map(|&i| d.feature_names()[i].as_str()).collect();
    let result = json!({
        "dims": names,
        "rows": d.n_rows(),
        "synthetic": synthetic,
        "output": a.output.as_ref().map(|p| p.display().to_string()),
        "svg": a.svg.as_ref().map(|p| p.display().to_string()),
        "sha256": sha256_hex(plot.as_bytes()),
    });
    let text = match &a.output {
        Some(p) => {
            fs::write(p, &plot)?;
            format!("{} rows ({synthetic} synthetic) over {} written to {}\n", d.n_rows(), names.join(", "), p.display())
        }
        None => plot.clone(),
    };
    let csv = if a.output.is_some() { plot } else { text.clone() };
    run.finish(Outcome { result, text, csv })
}
