//! Batch experiments: a JSON config names a gallery member, a set of `λ`
//! values and truncation orders, and the checks to run on every
//! `(λ, order)` cell.
//!
//! ```json
//! {
//!   "operator": { "family": "diag_example1", "n": 6, "rank": 2 },
//!   "lambdas": [-1.2],
//!   "orders": [6, 12, 24],
//!   "checks": ["conditions", "halmos"],
//!   "seed": 7,
//!   "output_path": "out/diag.json"
//! }
//! ```

mod checks;
mod run;
pub mod selftest;
mod sweep;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gallery::OperatorSpec;
use crate::lab::DiffOptions;
use crate::spectral::{IntervalKind, TiePolicy};

pub use run::{
    run_experiment, write_report, CellResult, ExperimentReport, RunOutcome, Violation,
};
pub use sweep::{sweep, write_sweep, KernelVerdict, SweepReport, TraceVerdict, TrendRow};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "LAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Conditions,
    Halmos,
    GapCount,
    Weyl,
    KrylovKernel,
    Reduction,
    LiawTreil,
    Correction,
}

/// Explicit `λ` list or an evenly spaced grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    List(Vec<f64>),
    Grid {
        lo: f64,
        hi: f64,
        count: usize,
        #[serde(default)]
        avoid_ties: bool,
    },
}

impl LambdaSpec {
    /// Nominal points; grids include both endpoints.
    pub fn points(&self) -> Vec<f64> {
        match self {
            LambdaSpec::List(v) => v.clone(),
            LambdaSpec::Grid { lo, hi, count, .. } => match count {
                0 => Vec::new(),
                1 => vec![*lo],
                _ => (0..*count)
                    .map(|i| lo + (hi - lo) * i as f64 / (*count - 1) as f64)
                    .collect(),
            },
        }
    }

    pub fn avoid_ties(&self) -> bool {
        matches!(self, LambdaSpec::Grid { avoid_ties: true, .. })
    }
}

/// Thresholds used by the checks; every result row echoes them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Kernel and `±1` eigenspace threshold.
    pub tau: f64,
    /// Tie tolerance; `None` uses the eigensystem default.
    pub tie_tol: Option<f64>,
    pub pair_defect: f64,
    pub krylov: f64,
    pub reduction: f64,
    pub liaw_treil: f64,
    /// Weyl contract: `last / first` must stay below this.
    pub weyl_ratio: f64,
    /// Sweep: smallest `dim_ker / n` of a growing kernel.
    pub kernel_fraction: f64,
    /// Sweep: largest `dim_ker` of a bounded kernel.
    pub bounded_kernel: usize,
    /// Sweep: largest admissible `trace_norm / first trace_norm`.
    pub trace_growth: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tau: 1e-9,
            tie_tol: None,
            pair_defect: 1e-8,
            krylov: 1e-8,
            reduction: 1e-9,
            liaw_treil: 1e-8,
            weyl_ratio: 1.0,
            kernel_fraction: 0.1,
            bounded_kernel: 8,
            trace_growth: 1.5,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        let named = [
            ("tau", self.tau),
            ("tie_tol", self.tie_tol.unwrap_or(1.0)),
            ("pair_defect", self.pair_defect),
            ("krylov", self.krylov),
            ("reduction", self.reduction),
            ("liaw_treil", self.liaw_treil),
            ("weyl_ratio", self.weyl_ratio),
            ("kernel_fraction", self.kernel_fraction),
            ("trace_growth", self.trace_growth),
        ];
        match named.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            Some((name, v)) => Err(LabError::Config(format!("tolerance {name} = {v} must be positive"))),
            None => Ok(()),
        }
    }
}

/// Probe settings for the `weyl` check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeylSettings {
    pub probes: usize,
    pub depth_stride: usize,
    pub window: usize,
}

impl Default for WeylSettings {
    fn default() -> Self {
        WeylSettings {
            probes: 8,
            depth_stride: 1,
            window: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub operator: OperatorSpec,
    pub lambdas: LambdaSpec,
    pub orders: Vec<usize>,
    #[serde(default = "default_checks")]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub weyl: WeylSettings,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub tie_policy: TiePolicy,
    #[serde(default)]
    pub kind: IntervalKind,
}

fn default_checks() -> Vec<Check> {
    vec![Check::Conditions, Check::Halmos]
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.orders.is_empty() || self.orders.contains(&0) {
            return Err(LabError::Config("orders must be a nonempty list of positive integers".into()));
        }
        match &self.lambdas {
            LambdaSpec::List(v) if v.is_empty() => {
                return Err(LabError::Config("lambdas must be nonempty".into()))
            }
            LambdaSpec::Grid { lo, hi, count, .. } if *count == 0 || !(lo <= hi) => {
                return Err(LabError::Config(format!("bad grid ({lo}, {hi}, {count})")))
            }
            _ => {}
        }
        if let Some(x) = self.lambdas.points().iter().find(|x| !x.is_finite()) {
            return Err(LabError::Config(format!("λ = {x} is not finite")));
        }
        if self.weyl.probes == 0 || self.weyl.depth_stride == 0 || self.weyl.window == 0 {
            return Err(LabError::Config("weyl settings must be positive".into()));
        }
        self.tolerances.validate()
    }

    pub fn diff_options(&self) -> DiffOptions {
        DiffOptions {
            kind: self.kind,
            tie_policy: self.tie_policy,
            tau: Some(self.tolerances.tau),
            tie_tol: self.tolerances.tie_tol,
        }
    }

    /// `output_path`, defaulting to `lab-report.json`.
    pub fn report_path(&self) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from("lab-report.json"))
    }
}

/// Moves `lambda` off the eigenvalues in `sorted` (ascending) by
/// `10·tie_tol`. The direction points into the gap `lambda` already lies in,
/// or into the wider neighbouring gap when it sits exactly on an eigenvalue,
/// and is kept through clusters.
pub fn nudge_off_ties(lambda: f64, sorted: &[f64], tie_tol: f64) -> f64 {
    let step = 10.0 * tie_tol;
    let near = |x: f64| sorted.iter().position(|e| (x - e).abs() < step * (1.0 - 1e-6));
    let Some(i) = near(lambda) else {
        return lambda;
    };
    let e = sorted[i];
    let dir = if lambda != e {
        (lambda - e).signum()
    } else {
        let left = sorted[..i].iter().rev().find(|x| **x < e).map_or(f64::INFINITY, |x| e - x);
        let right = sorted[i..].iter().find(|x| **x > e).map_or(f64::INFINITY, |x| x - e);
        if right >= left { 1.0 } else { -1.0 }
    };
    let mut x = lambda;
    for _ in 0..=sorted.len() {
        let hits: Vec<f64> = sorted.iter().copied().filter(|e| (x - e).abs() < step * (1.0 - 1e-6)).collect();
        if hits.is_empty() {
            break;
        }
        let anchor = if dir > 0.0 {
            hits.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            hits.iter().copied().fold(f64::INFINITY, f64::min)
        };
        x = anchor + dir * step;
    }
    x
}

/// Rayon pool honouring [`THREADS_ENV`].
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| LabError::Config(format!("{THREADS_ENV}={v} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))
}

fn unix_time() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
