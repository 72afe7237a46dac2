//! The projection difference `D(λ) = E_(-∞,λ)(T+S) − E_(-∞,λ)(T)`, its
//! decomposition and the finite-dimensional checks built on it.

mod classify;
mod correction;
mod weyl;

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gallery::{krylov_basis, rank_perturbation};
use crate::spectral::{
    count_within, default_kernel_tau, eig_sym, spectral_projector_with_tol, EigSystem,
    IntervalKind, SymOp, TiePolicy,
};

pub use classify::{classify_lambda, PointClass, SideEvidence, Verdict};
pub use correction::{
    build_correction, default_budget, verify_correction, Correction, CorrectionCheck,
};
pub use weyl::{weyl_probe, WeylOptions};

/// Default number of `N` values, `0..=C3_LEVELS`, recorded in
/// [`ProjDiffReport::c3_satisfied_for_n`].
pub const C3_LEVELS: usize = 4;

/// Knobs shared by every computation of `D(λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffOptions {
    pub kind: IntervalKind,
    pub tie_policy: TiePolicy,
    /// Kernel / `±1` eigenspace threshold; `None` uses `order·ε·ρ(D)`.
    pub tau: Option<f64>,
    /// Tie tolerance; `None` uses the default of each eigensystem.
    pub tie_tol: Option<f64>,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions {
            kind: IntervalKind::OpenBelow,
            tie_policy: TiePolicy::Reject,
            tau: None,
            tie_tol: None,
        }
    }
}

impl DiffOptions {
    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_tie_policy(mut self, policy: TiePolicy) -> Self {
        self.tie_policy = policy;
        self
    }

    pub fn with_kind(mut self, kind: IntervalKind) -> Self {
        self.kind = kind;
        self
    }
}

/// Per-`(λ, order)` record of `D(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjDiffReport {
    pub lambda: f64,
    pub order: usize,
    pub interval_kind: IntervalKind,
    pub tau: f64,
    pub tie_tol_t: f64,
    pub tie_tol_ts: f64,
    pub dim_ker: usize,
    pub dim_ker_minus_i: usize,
    pub dim_ker_plus_i: usize,
    pub min_abs_eig: f64,
    pub max_eig: f64,
    pub min_eig: f64,
    pub trace_norm: f64,
    pub c3_satisfied_for_n: BTreeMap<usize, bool>,
    pub spectrum: Vec<f64>,
}

/// Eigensystems of `T` and `T + S`, reused across many `λ`.
#[derive(Debug, Clone)]
pub struct DiffContext {
    pub eig_t: EigSystem,
    pub eig_ts: EigSystem,
}

impl DiffContext {
    pub fn new(t: &SymOp, s: &SymOp) -> Result<Self> {
        if t.order() != s.order() {
            return Err(LabError::DimensionMismatch {
                expected: t.order(),
                found: s.order(),
            });
        }
        Ok(DiffContext {
            eig_t: eig_sym(t)?,
            eig_ts: eig_sym(&t.add(s)?)?,
        })
    }

    pub fn order(&self) -> usize {
        self.eig_t.order()
    }

    /// `D(λ)` alone.
    pub fn difference(&self, lambda: f64, opts: &DiffOptions) -> Result<SymOp> {
        let tol_t = opts.tie_tol.unwrap_or_else(|| self.eig_t.default_tie_tol());
        let tol_ts = opts.tie_tol.unwrap_or_else(|| self.eig_ts.default_tie_tol());
        let p = spectral_projector_with_tol(&self.eig_ts, lambda, opts.kind, opts.tie_policy, tol_ts)?;
        let q = spectral_projector_with_tol(&self.eig_t, lambda, opts.kind, opts.tie_policy, tol_t)?;
        p.matrix.sub(&q.matrix)
    }

    /// `D(λ)` with its report.
    pub fn proj_diff(&self, lambda: f64, opts: &DiffOptions) -> Result<(SymOp, ProjDiffReport)> {
        let d = self.difference(lambda, opts)?;
        let eig = eig_sym(&d)?;
        let tau = opts.tau.unwrap_or_else(|| default_kernel_tau(&eig));
        let values = eig.values;
        let dim_minus = count_within(&values, 1.0, tau);
        let dim_plus = count_within(&values, -1.0, tau);
        let c3 = (0..=C3_LEVELS)
            .map(|n| (n, dim_minus.abs_diff(dim_plus) <= n))
            .collect();
        let report = ProjDiffReport {
            lambda,
            order: d.order(),
            interval_kind: opts.kind,
            tau,
            tie_tol_t: opts.tie_tol.unwrap_or_else(|| self.eig_t.default_tie_tol()),
            tie_tol_ts: opts.tie_tol.unwrap_or_else(|| self.eig_ts.default_tie_tol()),
            dim_ker: count_within(&values, 0.0, tau),
            dim_ker_minus_i: dim_minus,
            dim_ker_plus_i: dim_plus,
            min_abs_eig: values.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min),
            max_eig: values.last().copied().unwrap_or(0.0),
            min_eig: values.first().copied().unwrap_or(0.0),
            trace_norm: values.iter().map(|x| x.abs()).sum(),
            c3_satisfied_for_n: c3,
            spectrum: values,
        };
        Ok((d, report))
    }
}

/// `D(λ)` for `T`, `S` and its report. The `±1` eigenspaces are
/// `Ker(D ∓ I)`: `dim_ker_minus_i` counts eigenvalue `+1`.
pub fn proj_diff(
    t: &SymOp,
    s: &SymOp,
    lambda: f64,
    opts: &DiffOptions,
) -> Result<(SymOp, ProjDiffReport)> {
    DiffContext::new(t, s)?.proj_diff(lambda, opts)
}

/// Kernel, `±1` eigenspaces and the remaining ("generic") spectrum of a
/// difference of two projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalmosSplit {
    pub dim_ker: usize,
    pub dim_plus_one: usize,
    pub dim_minus_one: usize,
    pub generic_spectrum: Vec<f64>,
    /// Hausdorff distance between the generic spectrum and its negation.
    pub pair_defect: f64,
}

pub fn halmos_split(d: &SymOp, tau: f64) -> Result<HalmosSplit> {
    let eig = eig_sym(d)?;
    halmos_split_values(&eig.values, tau)
}

/// [`halmos_split`] on an already computed spectrum.
pub fn halmos_split_values(values: &[f64], tau: f64) -> Result<HalmosSplit> {
    if let Some(&v) = values.iter().find(|x| x.abs() > 1.0 + tau) {
        return Err(LabError::NotAProjectionDifference { value: v });
    }
    let mut split = HalmosSplit {
        dim_ker: 0,
        dim_plus_one: 0,
        dim_minus_one: 0,
        generic_spectrum: Vec::new(),
        pair_defect: 0.0,
    };
    for &x in values {
        if x.abs() <= tau {
            split.dim_ker += 1;
        } else if (x - 1.0).abs() <= tau {
            split.dim_plus_one += 1;
        } else if (x + 1.0).abs() <= tau {
            split.dim_minus_one += 1;
        } else {
            split.generic_spectrum.push(x);
        }
    }
    split.pair_defect = hausdorff_to_negation(&split.generic_spectrum);
    Ok(split)
}

fn hausdorff_to_negation(values: &[f64]) -> f64 {
    // the set is compared with its own mirror image, so one direction suffices
    values
        .iter()
        .map(|x| values.iter().map(|y| (x + y).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Finite-scale readings of the three conditions for a given `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub n: usize,
    /// `|dim Ker(D−I) − dim Ker(D+I)| ≤ N`.
    pub c3: bool,
    /// Smallest `|eigenvalue|`; tends to zero when `D` is non-invertible in
    /// the limit.
    pub c2_proxy: f64,
    /// `(dim_ker, order)`, interpreted by sweeps.
    pub c1_proxy: (usize, usize),
}

pub fn check_conditions(report: &ProjDiffReport, n: usize) -> ConditionVerdict {
    ConditionVerdict {
        n,
        c3: report.dim_ker_minus_i.abs_diff(report.dim_ker_plus_i) <= n,
        c2_proxy: report.min_abs_eig,
        c1_proxy: (report.dim_ker, report.order),
    }
}

/// Number of eigenvalues of `A + B` in `(l, r)`, which must be free of
/// eigenvalues of `A`.
pub fn gap_eig_count(a: &SymOp, b: &SymOp, interval: (f64, f64)) -> Result<usize> {
    let (l, r) = interval;
    if !(l < r) {
        return Err(LabError::BadParams(format!("empty interval ({l}, {r})")));
    }
    let ea = eig_sym(a)?;
    if let Some(&v) = ea.values.iter().find(|&&x| x > l && x < r) {
        return Err(LabError::GapNotEmpty { lo: l, hi: r, value: v });
    }
    let eab = eig_sym(&a.add(b)?)?;
    Ok(eab.values.iter().filter(|&&x| x > l && x < r).count())
}

/// Result of [`krylov_kernel_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrylovKernelReport {
    pub krylov_dim: usize,
    pub complement_dim: usize,
    /// `max_w ‖D(λ)w‖` per grid point.
    pub per_lambda: Vec<(f64, f64)>,
    pub max_norm: f64,
}

/// For `S = α φφᵀ`, `D(λ)` vanishes on the orthogonal complement of the
/// Krylov space of `φ`; reports the largest `‖D(λ)w‖` over an orthonormal
/// basis of that complement.
pub fn krylov_kernel_check(
    t: &SymOp,
    phi: &DVector<f64>,
    alpha: f64,
    lambdas: &[f64],
    opts: &DiffOptions,
) -> Result<KrylovKernelReport> {
    let k = krylov_basis(t, phi, 1e-10)?;
    if k.is_cyclic() {
        return Err(LabError::NothingToCheck { dim: k.dim });
    }
    let s = rank_perturbation(std::slice::from_ref(phi), &[alpha])?;
    let ctx = DiffContext::new(t, &s)?;
    let w = k.complement();
    let mut per_lambda = Vec::with_capacity(lambdas.len());
    let mut max_norm: f64 = 0.0;
    for &lambda in lambdas {
        let d = ctx.difference(lambda, opts)?;
        let dw = d.matrix() * &w;
        let worst = dw
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        max_norm = max_norm.max(worst);
        per_lambda.push((lambda, worst));
    }
    Ok(KrylovKernelReport {
        krylov_dim: k.dim,
        complement_dim: w.ncols(),
        per_lambda,
        max_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::diag_example_one;

    #[test]
    fn zero_perturbation_gives_zero_difference() {
        let t = SymOp::from_diagonal(&[0.0, 1.0, 2.0]).unwrap();
        let (d, r) = proj_diff(&t, &SymOp::zeros(3), 0.5, &DiffOptions::default()).unwrap();
        assert_eq!(d.max_abs(), 0.0);
        assert_eq!(r.dim_ker, 3);
    }

    #[test]
    fn example_one_dims() {
        let p = diag_example_one(6, 2).unwrap();
        let (_, r) = proj_diff(&p.t, &p.s, -1.2, &DiffOptions::default().with_tau(1e-10)).unwrap();
        assert_eq!((r.dim_ker_minus_i, r.dim_ker_plus_i), (2, 0));
        assert!(check_conditions(&r, 2).c3);
        assert!(!check_conditions(&r, 1).c3);
        assert!(r.c3_satisfied_for_n[&2]);
    }

    #[test]
    fn hand_computed_two_by_two() {
        let t = SymOp::from_diagonal(&[0.0, 1.0]).unwrap();
        let s = SymOp::from_diagonal(&[1.0, 0.0]).unwrap();
        let (d, r) = proj_diff(&t, &s, 0.5, &DiffOptions::default()).unwrap();
        assert_eq!(d.diagonal(), vec![-1.0, 0.0]);
        assert_eq!(r.dim_ker_plus_i, 1);
        assert_eq!(r.dim_ker_minus_i, 0);
    }

    #[test]
    fn below_both_spectra_difference_vanishes() {
        let p = diag_example_one(8, 3).unwrap();
        let (d, _) = proj_diff(&p.t, &p.s, -5.0, &DiffOptions::default()).unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn ties_are_rejected_or_resolved() {
        let t = SymOp::from_diagonal(&[-1.0, -0.5, -1.0 / 3.0]).unwrap();
        let s = SymOp::zeros(3);
        let err = proj_diff(&t, &s, -0.5, &DiffOptions::default()).unwrap_err();
        assert!(matches!(err, LabError::TieAtThreshold { .. }));
        assert!(proj_diff(&t, &s, -0.5, &DiffOptions::default().with_tie_policy(TiePolicy::Resolve)).is_ok());
    }

    #[test]
    fn halmos_examples() {
        let h = halmos_split(&SymOp::zeros(4), 1e-10).unwrap();
        assert_eq!((h.dim_ker, h.dim_plus_one, h.dim_minus_one), (4, 0, 0));
        let h = halmos_split(&SymOp::from_diagonal(&[1.0, -1.0, 0.0]).unwrap(), 1e-10).unwrap();
        assert_eq!((h.dim_ker, h.dim_plus_one, h.dim_minus_one), (1, 1, 1));
        assert!(h.generic_spectrum.is_empty());
        let h = halmos_split_values(&[0.3, -0.3, 0.7, -0.7000001], 1e-10).unwrap();
        assert!((h.pair_defect - 1e-7).abs() < 1e-12);
        assert!(matches!(
            halmos_split(&SymOp::from_diagonal(&[1.5]).unwrap(), 1e-10),
            Err(LabError::NotAProjectionDifference { .. })
        ));
    }

    #[test]
    fn gap_count_examples() {
        let a = SymOp::from_diagonal(&[0.0, 0.0, 1.0, 1.0]).unwrap();
        let b = SymOp::from_diagonal(&[0.5, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(gap_eig_count(&a, &b, (0.2, 0.8)).unwrap(), 1);
        assert_eq!(gap_eig_count(&a, &SymOp::zeros(4), (0.2, 0.8)).unwrap(), 0);
        assert!(matches!(
            gap_eig_count(&a, &b, (-0.5, 0.5)),
            Err(LabError::GapNotEmpty { .. })
        ));
    }

    #[test]
    fn krylov_complement_examples() {
        let t = SymOp::from_diagonal(&[1.0, 1.0, 2.0]).unwrap();
        let mut e1 = DVector::zeros(3);
        e1[0] = 1.0;
        let r = krylov_kernel_check(&t, &e1, 1.0, &[0.5, 1.5, 2.5, 3.5], &DiffOptions::default()).unwrap();
        assert!(r.max_norm < 1e-10);
        assert_eq!(r.complement_dim, 2);

        let r = krylov_kernel_check(&SymOp::identity(5), &DVector::from_element(5, 1.0), 1.0, &[0.5, 1.5], &DiffOptions::default()).unwrap();
        assert_eq!(r.complement_dim, 4);
        assert!(r.max_norm < 1e-10);

        let cyc = SymOp::from_diagonal(&[1.0, 2.0]).unwrap();
        let err = krylov_kernel_check(&cyc, &DVector::from_element(2, 1.0), 1.0, &[0.5], &DiffOptions::default());
        assert!(matches!(err, Err(LabError::NothingToCheck { dim: 2 })));
    }
}
