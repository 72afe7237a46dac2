use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{run_check, CellInput};
use super::{nudge_off_ties, unix_time, ExperimentConfig, Tolerances};
use crate::error::{LabError, Result};
use crate::gallery::OperatorPair;
use crate::lab::{DiffContext, ProjDiffReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub lambda: f64,
    /// Grid value before tie avoidance.
    pub lambda_nominal: f64,
    pub order: usize,
    pub tolerances: Tolerances,
    pub report: ProjDiffReport,
    pub checks: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub lambda: f64,
    pub order: usize,
    pub check: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config_echo: ExperimentConfig,
    /// Seconds since the Unix epoch; outside the determinism contract.
    pub generated_at: u64,
    pub results: Vec<CellResult>,
    pub violations: Vec<Violation>,
}

impl ExperimentReport {
    /// 0 when every contract held, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            2
        }
    }
}

/// A built operator pair with its cached eigensystems.
pub(super) struct Instance {
    pub order: usize,
    pub pair: OperatorPair,
    pub ctx: DiffContext,
}

pub(super) fn build_instances(cfg: &ExperimentConfig) -> Result<Vec<Instance>> {
    cfg.orders
        .par_iter()
        .map(|&order| {
            let pair = cfg.operator.with_order(order).build(cfg.seed)?;
            let ctx = DiffContext::new(&pair.t, &pair.s)?;
            Ok(Instance { order, pair, ctx })
        })
        .collect()
}

/// `λ` actually evaluated for a nominal grid point on this instance.
pub(super) fn effective_lambda(cfg: &ExperimentConfig, inst: &Instance, nominal: f64) -> f64 {
    if !cfg.lambdas.avoid_ties() {
        return nominal;
    }
    let tie_tol = cfg.tolerances.tie_tol.unwrap_or_else(|| {
        inst.ctx
            .eig_t
            .default_tie_tol()
            .max(inst.ctx.eig_ts.default_tie_tol())
    });
    let mut all: Vec<f64> = inst
        .ctx
        .eig_t
        .values
        .iter()
        .chain(&inst.ctx.eig_ts.values)
        .copied()
        .collect();
    all.sort_by(f64::total_cmp);
    nudge_off_ties(nominal, &all, tie_tol)
}

fn cell_seed(seed: u64, order_idx: usize, lambda_idx: usize) -> u64 {
    seed ^ ((order_idx as u64) << 32) ^ (lambda_idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn run_cell(
    cfg: &ExperimentConfig,
    inst: &Instance,
    oi: usize,
    li: usize,
    nominal: f64,
) -> Result<(CellResult, Vec<Violation>)> {
    let lambda = effective_lambda(cfg, inst, nominal);
    let (d, report) = inst.ctx.proj_diff(lambda, &cfg.diff_options())?;
    let input = CellInput {
        cfg,
        pair: &inst.pair,
        ctx: &inst.ctx,
        lambda,
        d: &d,
        report: &report,
        cell_seed: cell_seed(cfg.seed, oi, li),
    };
    let mut checks = serde_json::Map::new();
    let mut violations = Vec::new();
    let mut wanted = cfg.checks.clone();
    wanted.sort();
    wanted.dedup();
    for check in wanted {
        let name = serde_json::to_value(check)?
            .as_str()
            .unwrap_or_default()
            .to_string();
        let (value, bad) = run_check(check, &input)?;
        violations.extend(bad.into_iter().map(|message| Violation {
            lambda,
            order: inst.order,
            check: name.clone(),
            message,
        }));
        checks.insert(name, value);
    }
    Ok((
        CellResult {
            lambda,
            lambda_nominal: nominal,
            order: inst.order,
            tolerances: cfg.tolerances,
            report,
            checks,
        },
        violations,
    ))
}

/// Evaluates every `(λ, order)` cell in parallel; rows come out ordered by
/// order, then `λ`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let instances = build_instances(cfg)?;
    let lambdas = cfg.lambdas.points();
    let cells: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|oi| (0..lambdas.len()).map(move |li| (oi, li)))
        .collect();
    let outcomes: Vec<(CellResult, Vec<Violation>)> = cells
        .par_iter()
        .map(|&(oi, li)| run_cell(cfg, &instances[oi], oi, li, lambdas[li]))
        .collect::<Result<_>>()?;
    let mut results = Vec::with_capacity(outcomes.len());
    let mut violations = Vec::new();
    for (row, bad) in outcomes {
        results.push(row);
        violations.extend(bad);
    }
    Ok(ExperimentReport {
        config_echo: cfg.clone(),
        generated_at: unix_time(),
        results,
        violations,
    })
}

/// Paths of the files written by [`write_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub json_path: PathBuf,
    pub csv_path: PathBuf,
}

/// Writes the JSON report to `path` and the spectra to `path` with a `.csv`
/// extension.
pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<RunOutcome> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let json = serde_json::to_string_pretty(report)?;
    std::fs::write(path, json + "\n")?;
    let csv_path = path.with_extension("csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| LabError::Io(e.to_string()))?;
    w.write_record(["lambda", "order", "eig_index", "eig_value"])
        .map_err(|e| LabError::Io(e.to_string()))?;
    for row in &report.results {
        for (i, v) in row.report.spectrum.iter().enumerate() {
            w.serialize((row.lambda, row.order, i, v))
                .map_err(|e| LabError::Io(e.to_string()))?;
        }
    }
    w.flush()?;
    Ok(RunOutcome {
        json_path: path.to_path_buf(),
        csv_path,
    })
}
