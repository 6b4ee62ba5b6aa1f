use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qsmote::eval::{ClassifierKind, ClassifierSpec, Metric};
use qsmote::io::CsvSchema;
use qsmote::{Method, ResamplePlan, SeedSpec, SplitSpec};
use serde::{Serialize, Serializer};

#[derive(Parser, Debug)]
#[command(name = "qsmote", version, about = "Quantum-inspired SMOTE and classical resampling baselines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a two-class Gaussian dataset.
    Gen(GenArgs),
    /// Drop minority rows until a target imbalance ratio is reached.
    Imbalance(ImbalanceArgs),
    /// Resample a dataset; writes the CSV and a provenance sidecar.
    Resample(ResampleArgs),
    /// Cross-validate (or hold out) one resampling condition.
    Evaluate(EvaluateArgs),
    /// Method x metric grid over several conditions.
    Compare(CompareArgs),
    /// Exact paired signed-rank test of two score columns.
    Wilcoxon(WilcoxonArgs),
    /// Percentage F1 improvement of each technique over the original data.
    Improve(ImproveArgs),
    /// Time SMOTE against QI-SMOTE on a fixed synthetic workload.
    Bench(BenchArgs),
    /// Plot data (CSV, optional SVG) for 2 or 3 features.
    Scatter(ScatterArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Imbalance(_) => "imbalance",
            Command::Resample(_) => "resample",
            Command::Evaluate(_) => "evaluate",
            Command::Compare(_) => "compare",
            Command::Wilcoxon(_) => "wilcoxon",
            Command::Improve(_) => "improve",
            Command::Bench(_) => "bench",
            Command::Scatter(_) => "scatter",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Master seed for every random stream.
    #[arg(long, env = "QSMOTE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// What goes to stdout. `json` prints the full run report.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the JSON run report to this file.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// `key = value` file filling in flags not given on the command line.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

impl Common {
    pub fn seed(&self) -> SeedSpec {
        SeedSpec::new(self.seed)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct SchemaArgs {
    /// Label column name (or 0-based index with --no-header).
    #[arg(long, default_value = "label")]
    pub label_column: String,
    /// Label value of the positive class.
    #[arg(long, default_value = "1")]
    pub positive: String,
    #[arg(long)]
    pub negative: Option<String>,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    #[arg(long)]
    pub no_header: bool,
}

impl SchemaArgs {
    pub fn schema(&self) -> Result<CsvSchema, String> {
        if !self.delimiter.is_ascii() {
            return Err(format!("delimiter '{}' is not a single ASCII character", self.delimiter));
        }
        Ok(CsvSchema {
            label_column: self.label_column.clone(),
            positive_label: self.positive.clone(),
            negative_label: self.negative.clone(),
            delimiter: self.delimiter as u8,
            has_header: !self.no_header,
        })
    }
}

#[derive(Args, Debug, Serialize)]
pub struct PlanArgs {
    /// Neighbours for interpolation.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Add exactly this many rows instead of balancing the classes.
    #[arg(long)]
    pub extra: Option<usize>,
    #[arg(long, default_value = "outer_product", value_parser = PossibleValuesParser::new(["outer_product", "ising"]))]
    pub hamiltonian: String,
    /// Objective-evaluation budget per VQE run.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub vqe_iters: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub vqe_tol: f64,
    #[arg(long, default_value = "cobyla_like", value_parser = PossibleValuesParser::new(["cobyla_like", "nelder_mead"]))]
    pub optimizer: String,
    #[arg(long, default_value = "zeros", value_parser = PossibleValuesParser::new(["zeros", "seeded_uniform"]))]
    pub init: String,
    #[arg(long, default_value = "linear", value_parser = PossibleValuesParser::new(["linear", "ring"]))]
    pub topology: String,
}

impl PlanArgs {
    pub fn plan(&self, method: Method, seed: SeedSpec) -> qsmote::Result<ResamplePlan> {
        let mut pairs = vec![
            ("method", method.name().to_string()),
            ("k", self.k.to_string()),
            ("vqe_iters", self.vqe_iters.to_string()),
            ("vqe_tol", self.vqe_tol.to_string()),
            ("hamiltonian", self.hamiltonian.clone()),
            ("optimizer", self.optimizer.clone()),
            ("init", self.init.clone()),
            ("topology", self.topology.clone()),
        ];
        if let Some(n) = self.extra {
            pairs.push(("extra", n.to_string()));
        }
        Ok(ResamplePlan::from_pairs(&pairs)?.with_seed(seed))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct ClassifierArgs {
    #[arg(long, default_value = "knn", value_parser = PossibleValuesParser::new(["knn", "logistic"]))]
    pub classifier: String,
    /// Neighbours for the kNN classifier.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub knn_k: u64,
    #[arg(long, default_value_t = 200)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub l2: f64,
    /// Skip feature standardisation.
    #[arg(long)]
    pub no_standardize: bool,
    /// Start logistic weights from a seeded draw instead of zeros.
    #[arg(long)]
    pub random_init: bool,
}

impl ClassifierArgs {
    pub fn spec(&self) -> qsmote::Result<ClassifierSpec> {
        let spec = ClassifierSpec {
            kind: self.classifier.parse::<ClassifierKind>()?,
            k: self.knn_k as usize,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            l2: self.l2,
            standardize: !self.no_standardize,
            random_init: self.random_init,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct SplitArgs {
    /// Stratified k-fold cross-validation.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
    pub folds: u64,
    /// One stratified holdout split with this test fraction instead of k folds.
    #[arg(long, conflicts_with = "folds")]
    pub test_fraction: Option<f64>,
}

impl SplitArgs {
    pub fn split(&self) -> SplitSpec {
        match self.test_fraction {
            Some(f) => SplitSpec::holdout(f),
            None => SplitSpec::k_fold(self.folds as usize),
        }
    }
}

/// A resampling method, or none for the untouched data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Condition(pub Option<Method>);

impl Condition {
    pub fn name(self) -> &'static str {
        self.0.map_or("none", Method::name)
    }
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

pub fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: qsmote::Error| e.to_string())
}

pub fn parse_condition(s: &str) -> Result<Condition, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "none" | "original" => Ok(Condition(None)),
        _ => parse_method(s).map(|m| Condition(Some(m))),
    }
}

pub fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: qsmote::Error| e.to_string())
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long, default_value_t = 670)]
    pub n_majority: usize,
    #[arg(long, default_value_t = 30)]
    pub n_minority: usize,
    #[arg(long, default_value_t = 3)]
    pub features: usize,
    /// Majority mean: one value for every feature, or one per feature.
    #[arg(long, value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
    pub majority_mean: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2", allow_negative_numbers = true)]
    pub minority_mean: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub majority_scale: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub minority_scale: Vec<f64>,
    /// Output CSV; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ImbalanceArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Target majority/minority ratio; must not be below the current one.
    #[arg(long)]
    pub ir: f64,
    #[arg(long, short)]
    pub output: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub schema: SchemaArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ResampleArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Output CSV; provenance goes to `<output>.provenance.json`.
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[command(flatten)]
    #[serde(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub schema: SchemaArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct EvaluateArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Resampling method applied to each training part, or `none`.
    #[arg(long, default_value = "none", value_parser = parse_condition)]
    pub method: Condition,
    #[command(flatten)]
    #[serde(flatten)]
    pub split: SplitArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub classifier: ClassifierArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub schema: SchemaArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct CompareArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Conditions to compare; `none` is the untouched data.
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_condition,
        default_value = "none,qi_smote,smote,borderline_smote,adasyn,ros,rus,smote_enn,smote_tomek"
    )]
    pub methods: Vec<Condition>,
    #[arg(long, value_delimiter = ',', value_parser = parse_metric, default_value = "accuracy,g_mean,auc,precision,recall,f1")]
    #[serde(serialize_with = "metric_names")]
    pub metrics: Vec<Metric>,
    /// Write every condition's per-fold results here as JSON.
    #[arg(long, value_name = "PATH")]
    pub per_fold: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub split: SplitArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub classifier: ClassifierArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub schema: SchemaArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

fn metric_names<S: Serializer>(m: &[Metric], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|m| m.name()))
}

#[derive(Args, Debug, Serialize)]
pub struct WilcoxonArgs {
    /// CSV of per-fold scores with a header row.
    #[arg(long, short)]
    pub input: PathBuf,
    /// First column; defaults to the first column not named `fold`.
    #[arg(long)]
    pub a: Option<String>,
    /// Second column; defaults to the next column not named `fold`.
    #[arg(long)]
    pub b: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ImproveArgs {
    /// Technique x dataset F1 grid.
    #[arg(long)]
    pub techniques: PathBuf,
    /// Grid holding the baseline F1 row for the same datasets.
    #[arg(long)]
    pub original: PathBuf,
    /// Row of the original grid to compare against.
    #[arg(long, default_value = "Original")]
    pub baseline: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 670)]
    pub n_majority: usize,
    #[arg(long, default_value_t = 30)]
    pub n_minority: usize,
    #[arg(long, default_value_t = 3)]
    pub features: usize,
    /// Synthetic rows each method adds.
    #[arg(long, default_value_t = 100)]
    pub extra: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "smote,qi_smote")]
    pub methods: Vec<Method>,
    /// Write each method's resampled CSV here.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ScatterArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Two or three 0-based feature indices.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub dims: Vec<usize>,
    /// Provenance sidecar marking synthetic rows.
    #[arg(long, value_name = "PATH")]
    pub provenance: Option<PathBuf>,
    /// Plot-data CSV; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// SVG rendering (2-D only).
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub schema: SchemaArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

/// Flags that take no value; a config file switches them on with `true`.
pub const SWITCHES: &[&str] = &["no-header", "no-standardize", "random-init"];
