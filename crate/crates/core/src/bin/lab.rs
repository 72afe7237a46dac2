use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use projlab::experiment::{
    run_experiment, selftest::selftest, sweep, thread_pool, write_report, write_sweep,
    ExperimentConfig,
};
use projlab::gallery::FAMILIES;
use projlab::Result;

/// Batch runner for projection-difference experiments.
#[derive(Parser)]
#[command(name = "lab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate every (λ, order) cell and write the JSON and CSV reports.
    Run { config: PathBuf },
    /// Trend of D(λ) across orders (at least three).
    Sweep { config: PathBuf },
    /// Gallery families.
    Gallery {
        #[command(subcommand)]
        cmd: GalleryCmd,
    },
    /// Quick built-in checks.
    Selftest,
}

#[derive(Subcommand)]
enum GalleryCmd {
    List,
}

fn run(path: &Path) -> Result<u8> {
    let cfg = ExperimentConfig::load(path)?;
    let report = thread_pool()?.install(|| run_experiment(&cfg))?;
    let out = write_report(&report, &cfg.report_path())?;
    for v in &report.violations {
        eprintln!("violation: order {} λ={} [{}] {}", v.order, v.lambda, v.check, v.message);
    }
    println!(
        "{} cells, {} violations -> {}, {}",
        report.results.len(),
        report.violations.len(),
        out.json_path.display(),
        out.csv_path.display()
    );
    Ok(report.exit_code() as u8)
}

fn run_sweep(path: &Path) -> Result<u8> {
    let cfg = ExperimentConfig::load(path)?;
    let report = thread_pool()?.install(|| sweep(&cfg))?;
    let out = cfg.report_path();
    write_sweep(&report, &out)?;
    for t in &report.trends {
        println!(
            "λ={:<10} {:?} {:?} dim_ker/n={:?}",
            t.lambda, t.kernel_verdict, t.trace_verdict, t.dim_ker_fraction
        );
    }
    println!("-> {}", out.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match &cli.cmd {
        Cmd::Run { config } => run(config),
        Cmd::Sweep { config } => run_sweep(config),
        Cmd::Gallery { cmd: GalleryCmd::List } => {
            for (name, desc) in FAMILIES {
                println!("{name:<22} {desc}");
            }
            Ok(0)
        }
        Cmd::Selftest => {
            let lines = selftest();
            for l in &lines {
                println!("{} {:<22} {}", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail);
            }
            Ok(if lines.iter().all(|l| l.passed) { 0 } else { 2 })
        }
    };
    match status {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error [{}]: {e}", e.name());
            ExitCode::from(1)
        }
    }
}
