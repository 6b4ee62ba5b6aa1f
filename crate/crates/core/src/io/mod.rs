//! CSV in and out, the Gaussian generator, plot data, small table readers
//! and run reports.

mod csv;
mod report;
mod scatter;
mod synth;
mod tables;

pub use self::csv::{load_csv, read_csv, save_csv, save_with_provenance, sidecar_path, write_csv, CsvSchema};
pub use report::{sha256_hex, Environment, InputDigest, RunReport, SCHEMA_VERSION};
pub use scatter::{emit_scatter, origins, scatter_csv, scatter_svg};
pub use synth::{gen_gaussian_binary, NormalStream, SynthSpec};
pub use tables::{parse_kv, read_f1_grid, read_score_columns, F1Grid, ScoreColumns};
