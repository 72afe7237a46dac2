//! Runs a JSON-configured experiment in-process and writes the report, the
//! same path `lab run` takes.
//!
//!     cargo run --example experiment -- configs/krein_run.json

use std::path::PathBuf;

use projlab::experiment::{run_experiment, thread_pool, write_report, ExperimentConfig};

fn main() -> projlab::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/krein_run.json")));
    let cfg = ExperimentConfig::load(&path)?;
    let report = thread_pool()?.install(|| run_experiment(&cfg))?;
    for cell in &report.results {
        println!(
            "order {:>4} lambda {:+.4}  dims ({}, {})  trace norm {:.4}",
            cell.order, cell.lambda, cell.report.dim_ker_minus_i, cell.report.dim_ker_plus_i, cell.report.trace_norm
        );
    }
    for v in &report.violations {
        println!("violation: order {} lambda {} [{}] {}", v.order, v.lambda, v.check, v.message);
    }
    let out = std::env::temp_dir().join("projlab-example-report.json");
    let written = write_report(&report, &out)?;
    println!("wrote {} and {}", written.json_path.display(), written.csv_path.display());
    std::process::exit(report.exit_code());
}
