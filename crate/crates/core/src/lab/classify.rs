//! Where a point sits relative to the spectrum, read off from truncations
//! of increasing order.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Resolvent,
    DiscreteEigenvalue,
    /// Spectrum accumulates at `λ` from the left only.
    MMinus,
    /// From the right only.
    MPlus,
    /// From both sides.
    MTwosided,
    /// Counts behave inconsistently across orders.
    Unstable,
}

/// Neighbourhood counts for one truncation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideEvidence {
    pub order: usize,
    /// Eigenvalues in `[λ − gap_tol, λ)`, excluding those counted as at `λ`.
    pub left: usize,
    /// Eigenvalues in `(λ, λ + gap_tol]`, same exclusion.
    pub right: usize,
    /// Eigenvalues within the coincidence tolerance of `λ`.
    pub at: usize,
    /// Distance to the nearest eigenvalue strictly left of `λ`, if any.
    pub left_gap: Option<f64>,
    pub right_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointClass {
    pub verdict: Verdict,
    pub evidence: Vec<SideEvidence>,
}

/// Classifies `λ` from spectra at increasing orders. A side accumulates when
/// its count grows from the first to the last order without ever dropping.
pub fn classify_lambda(spectra: &[Vec<f64>], lambda: f64, gap_tol: f64) -> Result<PointClass> {
    if spectra.len() < 2 {
        return Err(LabError::BadParams("need spectra at two or more orders".into()));
    }
    if !(gap_tol > 0.0) {
        return Err(LabError::BadParams("gap_tol must be positive".into()));
    }
    let at_tol = 1e-12 * (1.0 + lambda.abs());
    let evidence: Vec<SideEvidence> = spectra
        .iter()
        .map(|values| {
            let mut e = SideEvidence {
                order: values.len(),
                left: 0,
                right: 0,
                at: 0,
                left_gap: None,
                right_gap: None,
            };
            for &x in values {
                let d = x - lambda;
                if d.abs() <= at_tol {
                    e.at += 1;
                } else if d < 0.0 {
                    e.left_gap = Some(e.left_gap.map_or(-d, |g: f64| g.min(-d)));
                    if -d <= gap_tol {
                        e.left += 1;
                    }
                } else {
                    e.right_gap = Some(e.right_gap.map_or(d, |g: f64| g.min(d)));
                    if d <= gap_tol {
                        e.right += 1;
                    }
                }
            }
            e
        })
        .collect();

    let grows = |f: fn(&SideEvidence) -> usize| -> Option<bool> {
        let counts: Vec<usize> = evidence.iter().map(f).collect();
        if counts.windows(2).any(|w| w[1] < w[0]) {
            return None;
        }
        Some(counts.last() > counts.first())
    };
    let verdict = match (grows(|e| e.left), grows(|e| e.right)) {
        (None, _) | (_, None) => Verdict::Unstable,
        (Some(true), Some(true)) => Verdict::MTwosided,
        (Some(true), Some(false)) => Verdict::MMinus,
        (Some(false), Some(true)) => Verdict::MPlus,
        (Some(false), Some(false)) => {
            let at: Vec<usize> = evidence.iter().map(|e| e.at).collect();
            if at.windows(2).any(|w| w[0] != w[1]) {
                Verdict::Unstable
            } else if at[0] > 0 {
                Verdict::DiscreteEigenvalue
            } else {
                Verdict::Resolvent
            }
        }
    };
    Ok(PointClass { verdict, evidence })
}
