//! Finite-rank correction `K` that balances the `±t` eigenspaces of `D`.
//!
//! Eigenvalues of `D` are grouped by modulus. In a group with `p` positive
//! and `m` negative members, `|p − m|` members of the majority sign are each
//! moved toward zero by their own shift `ε_j`. Shifts are strictly decreasing
//! along the whole construction with `ε_j ≤ a_j`, so the moved eigenvalues are
//! distinct and every modulus carries an imbalance of at most one.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::{eig_sym, SymOp};

#[derive(Debug, Clone, PartialEq)]
pub struct Correction {
    pub k: SymOp,
    /// Signed eigenvalues of `K` in the order they were assigned
    /// (descending modulus).
    pub shifts: Vec<f64>,
}

/// `a_j = 1/(5j)`, `j = 1..=len`.
pub fn default_budget(len: usize) -> Vec<f64> {
    (1..=len).map(|j| 1.0 / (5.0 * j as f64)).collect()
}

/// Groups of indices into `values` whose moduli chain together within `tau`,
/// largest modulus first. Values with `|x| ≤ tau` are left out.
fn modulus_groups(values: &[f64], tau: f64) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..values.len()).filter(|&i| values[i].abs() > tau).collect();
    idx.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match groups.last_mut() {
            Some(g) if values[*g.last().unwrap()].abs() - values[i].abs() <= tau => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

pub fn build_correction(d: &SymOp, a_seq: &[f64], tau: f64) -> Result<Correction> {
    if a_seq.windows(2).any(|w| !(w[1] < w[0])) || a_seq.iter().any(|a| !(*a > 0.0)) {
        return Err(LabError::BadParams("budget must be positive and strictly decreasing".into()));
    }
    if a_seq.first().is_some_and(|a| *a >= 0.25) {
        return Err(LabError::BadParams("first budget entry must be below 1/4".into()));
    }
    let eig = eig_sym(d)?;
    if let Some(&v) = eig.values.iter().find(|x| x.abs() > 1.0 + tau) {
        return Err(LabError::NotAProjectionDifference { value: v });
    }
    let groups = modulus_groups(&eig.values, tau);

    let mut surplus: Vec<usize> = Vec::new();
    for g in &groups {
        let pos: Vec<usize> = g.iter().copied().filter(|&i| eig.values[i] > 0.0).collect();
        let neg: Vec<usize> = g.iter().copied().filter(|&i| eig.values[i] < 0.0).collect();
        let (major, minor) = if pos.len() >= neg.len() { (pos, neg) } else { (neg, pos) };
        surplus.extend(major.into_iter().skip(minor.len()));
    }
    if surplus.len() > a_seq.len() {
        return Err(LabError::CorrectionInfeasible {
            required: surplus.len(),
            available: a_seq.len(),
        });
    }

    // moduli a moved eigenvalue must not land on
    let mut taken: Vec<f64> = eig.values.iter().map(|x| x.abs()).collect();
    let mut shifts = Vec::with_capacity(surplus.len());
    let mut k = nalgebra::DMatrix::zeros(d.order(), d.order());
    let mut prev = f64::INFINITY;
    for (j, &i) in surplus.iter().enumerate() {
        let x = eig.values[i];
        let t = x.abs();
        let mut eps = a_seq[j].min(0.5 * t).min(0.9 * prev);
        let clear = |e: f64, taken: &[f64]| taken.iter().all(|s| (t - e - s).abs() > 2.0 * tau);
        while !clear(eps, &taken) {
            eps *= 0.9;
            if eps <= 10.0 * tau {
                return Err(LabError::CorrectionInfeasible {
                    required: surplus.len(),
                    available: j,
                });
            }
        }
        if eps <= 10.0 * tau || t - eps <= 2.0 * tau {
            return Err(LabError::CorrectionInfeasible {
                required: surplus.len(),
                available: j,
            });
        }
        prev = eps;
        taken.push(t - eps);
        let nu = x.signum() * eps;
        shifts.push(nu);
        let v = eig.vector(i);
        k += &v * v.transpose() * nu;
    }
    Ok(Correction {
        k: SymOp::from_matrix(k)?,
        shifts,
    })
}

/// Post-hoc verification of a correction by a fresh eigendecomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionCheck {
    /// Spectrum of `D − K` inside `[-1 − τ, 1 + τ]`.
    pub spectrum_in_range: bool,
    /// Largest `|#{+t} − #{−t}|` over moduli `t` of `D − K`.
    pub max_imbalance: usize,
    /// `|ν_j| ≤ a_j` for the eigenvalues of `K` sorted by modulus.
    pub within_budget: bool,
    /// `Ker(D − K) = Ker D`.
    pub kernel_preserved: bool,
}

impl CorrectionCheck {
    pub fn passed(&self) -> bool {
        self.spectrum_in_range && self.max_imbalance <= 1 && self.within_budget && self.kernel_preserved
    }
}

pub fn verify_correction(d: &SymOp, k: &SymOp, a_seq: &[f64], tau: f64) -> Result<CorrectionCheck> {
    let corrected = d.sub(k)?;
    let ec = eig_sym(&corrected)?;
    let spectrum_in_range = ec.values.iter().all(|x| x.abs() <= 1.0 + tau);
    let max_imbalance = modulus_groups(&ec.values, tau)
        .iter()
        .map(|g| {
            let pos = g.iter().filter(|&&i| ec.values[i] > 0.0).count();
            pos.abs_diff(g.len() - pos)
        })
        .max()
        .unwrap_or(0);

    let ek = eig_sym(k)?;
    let mut nu: Vec<f64> = ek.values.iter().map(|x| x.abs()).filter(|x| *x > tau).collect();
    nu.sort_by(|a, b| b.total_cmp(a));
    let within_budget =
        nu.len() <= a_seq.len() && nu.iter().zip(a_seq).all(|(v, a)| *v <= a + tau);

    let ed = eig_sym(d)?;
    let ker: Vec<usize> = (0..ed.order()).filter(|&i| ed.values[i].abs() <= tau).collect();
    let ker_c = ec.values.iter().filter(|x| x.abs() <= tau).count();
    let kernel_preserved = ker.len() == ker_c
        && ker
            .iter()
            .all(|&i| corrected.apply(&ed.vector(i)).norm() <= 10.0 * tau.max(1e-12));
    Ok(CorrectionCheck {
        spectrum_in_range,
        max_imbalance,
        within_budget,
        kernel_preserved,
    })
}
