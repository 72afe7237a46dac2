//! Order sweep: trends of dim ker D, trace norm and the smallest |eig| as
//! the truncation grows.

use std::path::PathBuf;

use projlab::experiment::{sweep, ExperimentConfig};

fn main() -> projlab::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/diag_sweep.json")));
    let report = sweep(&ExperimentConfig::load(&path)?)?;
    for row in &report.trends {
        println!("lambda {:+.3}  {:?} / {:?}", row.lambda, row.kernel_verdict, row.trace_verdict);
        for i in 0..row.orders.len() {
            println!(
                "   order {:>4}  dim {:>4}  ker {:>4} ({:.2})  trace {:.4}  min|eig| {:.2e}",
                row.orders[i], row.dims[i], row.dim_ker[i], row.dim_ker_fraction[i], row.trace_norm[i], row.min_abs_eig[i]
            );
        }
    }
    Ok(())
}
