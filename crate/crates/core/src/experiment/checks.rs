//! Per-cell checks. Each returns a JSON record and the contract failures it
//! found; precondition failures (cyclic `φ`, colliding atoms, no gap) are
//! recorded as skipped.

use nalgebra::DVector;
use serde_json::{json, Value};

use super::{Check, ExperimentConfig};
use crate::cayley::{verify_reduction, reduce_semibounded, Direction};
use crate::error::{LabError, Result};
use crate::gallery::{perturbation_rank, OperatorPair};
use crate::lab::{
    build_correction, check_conditions, default_budget, gap_eig_count, halmos_split_values,
    krylov_kernel_check, verify_correction, weyl_probe, DiffContext, ProjDiffReport, WeylOptions,
};
use crate::liaw_treil::{default_sep_tol, liaw_treil_transform};
use crate::spectral::SymOp;

/// Test polynomial for the spectral-measure check.
const LT_COEFFS: [f64; 4] = [0.3, -1.0, 0.5, 0.25];

pub(super) struct CellInput<'a> {
    pub cfg: &'a ExperimentConfig,
    pub pair: &'a OperatorPair,
    pub ctx: &'a DiffContext,
    pub lambda: f64,
    pub d: &'a SymOp,
    pub report: &'a ProjDiffReport,
    pub cell_seed: u64,
}

pub(super) type Outcome = (Value, Vec<String>);

fn skipped(reason: impl std::fmt::Display) -> Outcome {
    (json!({ "skipped": reason.to_string() }), Vec::new())
}

pub(super) fn run_check(check: Check, c: &CellInput) -> Result<Outcome> {
    match check {
        Check::Conditions => Ok(conditions(c)),
        Check::Halmos => halmos(c),
        Check::GapCount => gap_count(c),
        Check::Weyl => weyl(c),
        Check::KrylovKernel => krylov(c),
        Check::Reduction => reduction(c),
        Check::LiawTreil => liaw_treil(c),
        Check::Correction => correction(c),
    }
}

fn conditions(c: &CellInput) -> Outcome {
    let n = c.pair.rank_s;
    let v = check_conditions(c.report, n);
    let within = c.report.dim_ker_minus_i <= n && c.report.dim_ker_plus_i <= n;
    let mut bad = Vec::new();
    if !v.c3 || !within {
        bad.push(format!(
            "dims ({}, {}) exceed rank {n}",
            c.report.dim_ker_minus_i, c.report.dim_ker_plus_i
        ));
    }
    let value = json!({
        "n": n,
        "dim_ker_minus_i": c.report.dim_ker_minus_i,
        "dim_ker_plus_i": c.report.dim_ker_plus_i,
        "c3": v.c3,
        "c2_proxy": v.c2_proxy,
        "c1_proxy": v.c1_proxy,
        "passed": bad.is_empty(),
    });
    (value, bad)
}

fn halmos(c: &CellInput) -> Result<Outcome> {
    let tol = &c.cfg.tolerances;
    let in_range = c.report.spectrum.iter().all(|x| x.abs() <= 1.0 + tol.tau);
    let mut bad = Vec::new();
    if !in_range {
        bad.push(format!(
            "spectrum [{}, {}] leaves [-1, 1]",
            c.report.min_eig, c.report.max_eig
        ));
        return Ok((json!({ "spectrum_in_range": false, "passed": false }), bad));
    }
    let split = halmos_split_values(&c.report.spectrum, tol.tau)?;
    if split.pair_defect > tol.pair_defect {
        bad.push(format!("pair defect {:.3e} > {:.1e}", split.pair_defect, tol.pair_defect));
    }
    Ok((
        json!({
            "dim_ker": split.dim_ker,
            "dim_plus_one": split.dim_plus_one,
            "dim_minus_one": split.dim_minus_one,
            "generic_count": split.generic_spectrum.len(),
            "pair_defect": split.pair_defect,
            "spectrum_in_range": true,
            "passed": bad.is_empty(),
        }),
        bad,
    ))
}

/// Widest gap between consecutive distinct eigenvalues of `T`.
fn widest_gap(values: &[f64], tau: f64) -> Option<(f64, f64)> {
    values
        .windows(2)
        .filter(|w| w[1] - w[0] > tau)
        .map(|w| (w[0], w[1]))
        .max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))
}

fn gap_count(c: &CellInput) -> Result<Outcome> {
    let Some((l, r)) = widest_gap(&c.ctx.eig_t.values, c.cfg.tolerances.tau) else {
        return Ok(skipped("T has no spectral gap"));
    };
    let count = gap_eig_count(&c.pair.t, &c.pair.s, (l, r))?;
    let bound = c.pair.rank_s;
    let mut bad = Vec::new();
    if count > bound {
        bad.push(format!("{count} eigenvalues of T+S in ({l}, {r}), rank {bound}"));
    }
    Ok((
        json!({ "interval": [l, r], "count": count, "bound": bound, "passed": bad.is_empty() }),
        bad,
    ))
}

fn weyl(c: &CellInput) -> Result<Outcome> {
    if c.pair.phi.is_empty() {
        return Ok(skipped("no perturbation directions"));
    }
    let w = c.cfg.weyl;
    let opts = WeylOptions {
        depth_stride: w.depth_stride,
        window: w.window,
        diff: c.cfg.diff_options(),
    };
    let norms = match weyl_probe(&c.pair.t, &c.pair.s, &c.pair.phi, c.lambda, w.probes, c.cell_seed, &opts) {
        Ok(n) => n,
        Err(e @ LabError::ProbeExhausted { .. }) => return Ok(skipped(e)),
        Err(e) => return Err(e),
    };
    let first = norms[0];
    let last = *norms.last().unwrap();
    let ratio = if first > 0.0 { last / first } else { 0.0 };
    let max_ratio = c.cfg.tolerances.weyl_ratio;
    let mut bad = Vec::new();
    if first > 0.0 && ratio >= max_ratio {
        bad.push(format!("probe norms {first:.3e} -> {last:.3e}, ratio {ratio:.3} >= {max_ratio}"));
    }
    Ok((
        json!({ "norms": norms, "ratio": ratio, "max_ratio": max_ratio, "passed": bad.is_empty() }),
        bad,
    ))
}

/// Unit `φ` and `α` with `S = α φφᵀ`.
fn rank_one(pair: &OperatorPair) -> Option<(DVector<f64>, f64)> {
    if pair.rank_s != 1 || pair.phi.len() != 1 {
        return None;
    }
    let phi = pair.phi[0].normalize();
    let alpha = phi.dot(&pair.s.apply(&phi));
    Some((phi, alpha))
}

fn krylov(c: &CellInput) -> Result<Outcome> {
    let Some((phi, alpha)) = rank_one(c.pair) else {
        return Ok(skipped("perturbation is not rank one"));
    };
    let rep = match krylov_kernel_check(&c.pair.t, &phi, alpha, &[c.lambda], &c.cfg.diff_options()) {
        Ok(r) => r,
        Err(e @ LabError::NothingToCheck { .. }) => return Ok(skipped(e)),
        Err(e) => return Err(e),
    };
    let tol = c.cfg.tolerances.krylov;
    let mut bad = Vec::new();
    if rep.max_norm > tol {
        bad.push(format!("‖D w‖ = {:.3e} on the Krylov complement", rep.max_norm));
    }
    Ok((
        json!({
            "krylov_dim": rep.krylov_dim,
            "complement_dim": rep.complement_dim,
            "max_norm": rep.max_norm,
            "passed": bad.is_empty(),
        }),
        bad,
    ))
}

fn reduction(c: &CellInput) -> Result<Outcome> {
    let tol = c.cfg.tolerances.reduction;
    let opts = c.cfg.diff_options();
    let rank = perturbation_rank(&c.pair.s)?;
    let mut bad = Vec::new();
    let mut rows = serde_json::Map::new();
    for (name, dir) in [("below", Direction::Below), ("above", Direction::Above)] {
        let dev = verify_reduction(&c.pair.t, &c.pair.s, c.lambda, dir, &opts)?;
        let rec = reduce_semibounded(&c.pair.t, &c.pair.s, dir)?;
        let rank_prime = perturbation_rank(&rec.s_prime)?;
        if dev > tol {
            bad.push(format!("{name}: reduced D deviates by {dev:.3e}"));
        }
        if rank_prime != rank {
            bad.push(format!("{name}: rank S' = {rank_prime}, rank S = {rank}"));
        }
        rows.insert(
            name.into(),
            json!({ "c": rec.c, "deviation": dev, "rank_s_prime": rank_prime }),
        );
    }
    rows.insert("rank_s".into(), json!(rank));
    rows.insert("passed".into(), json!(bad.is_empty()));
    Ok((Value::Object(rows), bad))
}

fn liaw_treil(c: &CellInput) -> Result<Outcome> {
    let Some((phi, alpha)) = rank_one(c.pair) else {
        return Ok(skipped("perturbation is not rank one"));
    };
    let sep = default_sep_tol(&c.pair.t)?;
    let out = match liaw_treil_transform(&c.pair.t, &phi, alpha, &LT_COEFFS, sep) {
        Ok(o) => o,
        Err(
            e @ (LabError::NotCyclic { .. }
            | LabError::DegenerateSpectrum { .. }
            | LabError::AtomCollision { .. }),
        ) => return Ok(skipped(e)),
        Err(e) => return Err(e),
    };
    let tol = c.cfg.tolerances.liaw_treil;
    let mut bad = Vec::new();
    if out.discrepancy > tol {
        bad.push(format!("formula vs oracle {:.3e}", out.discrepancy));
    }
    if out.unitarity_defect > tol {
        bad.push(format!("norm defect {:.3e}", out.unitarity_defect));
    }
    if !out.interlaced {
        bad.push("atoms do not interlace".into());
    }
    Ok((
        json!({
            "alpha": alpha,
            "discrepancy": out.discrepancy,
            "unitarity_defect": out.unitarity_defect,
            "interlaced": out.interlaced,
            "passed": bad.is_empty(),
        }),
        bad,
    ))
}

fn correction(c: &CellInput) -> Result<Outcome> {
    let tau = c.cfg.tolerances.tau;
    let budget = default_budget(c.d.order());
    let corr = match build_correction(c.d, &budget, tau) {
        Ok(k) => k,
        Err(e @ LabError::CorrectionInfeasible { .. }) => {
            return Ok((json!({ "error": e.to_string(), "passed": false }), vec![e.to_string()]))
        }
        Err(e) => return Err(e),
    };
    let chk = verify_correction(c.d, &corr.k, &budget, tau)?;
    let mut bad = Vec::new();
    if !chk.passed() {
        bad.push(format!("correction postconditions failed: {chk:?}"));
    }
    Ok((
        json!({
            "shifts": corr.shifts,
            "spectrum_in_range": chk.spectrum_in_range,
            "max_imbalance": chk.max_imbalance,
            "within_budget": chk.within_budget,
            "kernel_preserved": chk.kernel_preserved,
            "passed": bad.is_empty(),
        }),
        bad,
    ))
}
