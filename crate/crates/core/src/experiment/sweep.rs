use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::run::{build_instances, effective_lambda};
use super::{unix_time, ExperimentConfig, Tolerances};
use crate::error::{LabError, Result};
use crate::lab::ProjDiffReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelVerdict {
    /// `dim_ker / n` nondecreasing and at least `kernel_fraction`.
    GrowingKernel,
    /// `dim_ker ≤ bounded_kernel` at every order.
    BoundedKernel,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceVerdict {
    TraceBounded,
    TraceGrowing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub lambda: f64,
    pub orders: Vec<usize>,
    /// Matrix order `n` at each truncation.
    pub dims: Vec<usize>,
    /// Evaluated `λ` per order (differs from `lambda` after tie avoidance).
    pub lambdas: Vec<f64>,
    pub dim_ker: Vec<usize>,
    pub dim_ker_fraction: Vec<f64>,
    pub trace_norm: Vec<f64>,
    pub min_abs_eig: Vec<f64>,
    pub kernel_verdict: KernelVerdict,
    pub trace_verdict: TraceVerdict,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config_echo: ExperimentConfig,
    pub generated_at: u64,
    pub trends: Vec<TrendRow>,
}

pub fn kernel_verdict(dim_ker: &[usize], dims: &[usize], tol: &Tolerances) -> KernelVerdict {
    let frac: Vec<f64> = dim_ker.iter().zip(dims).map(|(k, n)| *k as f64 / *n as f64).collect();
    let nondecreasing = frac.windows(2).all(|w| w[1] >= w[0]);
    if nondecreasing && frac.iter().all(|f| *f >= tol.kernel_fraction) {
        KernelVerdict::GrowingKernel
    } else if dim_ker.iter().all(|k| *k <= tol.bounded_kernel) {
        KernelVerdict::BoundedKernel
    } else {
        KernelVerdict::Unstable
    }
}

pub fn trace_verdict(trace: &[f64], tol: &Tolerances) -> TraceVerdict {
    let first = trace.first().copied().unwrap_or(0.0);
    let bound = tol.trace_growth * first + tol.tau * trace.len() as f64;
    if trace.iter().all(|t| *t <= bound) {
        TraceVerdict::TraceBounded
    } else {
        TraceVerdict::TraceGrowing
    }
}

/// Trend of `D(λ)` across at least three truncation orders.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    cfg.validate()?;
    if cfg.orders.len() < 3 {
        return Err(LabError::Config(format!(
            "a sweep needs at least 3 orders, got {}",
            cfg.orders.len()
        )));
    }
    let instances = build_instances(cfg)?;
    let lambdas = cfg.lambdas.points();
    let opts = cfg.diff_options();
    let trends = lambdas
        .par_iter()
        .map(|&nominal| {
            let reports: Vec<ProjDiffReport> = instances
                .iter()
                .map(|inst| {
                    let lambda = effective_lambda(cfg, inst, nominal);
                    inst.ctx.proj_diff(lambda, &opts).map(|(_, r)| r)
                })
                .collect::<Result<_>>()?;
            let dims: Vec<usize> = reports.iter().map(|r| r.order).collect();
            let dim_ker: Vec<usize> = reports.iter().map(|r| r.dim_ker).collect();
            let trace_norm: Vec<f64> = reports.iter().map(|r| r.trace_norm).collect();
            Ok(TrendRow {
                lambda: nominal,
                orders: cfg.orders.clone(),
                lambdas: reports.iter().map(|r| r.lambda).collect(),
                dim_ker_fraction: dim_ker.iter().zip(&dims).map(|(k, n)| *k as f64 / *n as f64).collect(),
                min_abs_eig: reports.iter().map(|r| r.min_abs_eig).collect(),
                kernel_verdict: kernel_verdict(&dim_ker, &dims, &cfg.tolerances),
                trace_verdict: trace_verdict(&trace_norm, &cfg.tolerances),
                dims,
                dim_ker,
                trace_norm,
                tolerances: cfg.tolerances,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        config_echo: cfg.clone(),
        generated_at: unix_time(),
        trends,
    })
}

pub fn write_sweep(report: &SweepReport, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(report)? + "\n")?;
    Ok(())
}
