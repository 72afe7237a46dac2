//! Spectral measures of rank-one pairs and the Liaw–Treil transform
//! `V_α = U_α U*` between them.
//!
//! With `μ(Ω) = ⟨E_Ω(T)φ, φ⟩` and `U` the unitary onto `L²(μ)` sending `φ`
//! to the constant `1` and `T` to multiplication by the variable, the map
//! `V_α` is given on polynomials by
//!
//! ```text
//! (V_α f)(x) = f(x) − α Σ_t w_t (f(x) − f(t)) / (x − t)
//! ```
//!
//! evaluated at the atoms `x` of `μ_α`. The divided difference is formed by
//! synthetic division, so `f(x) − f(t)` is never computed.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::gallery::rank_perturbation;
use crate::spectral::{eig_sym, SymOp};

/// Finitely supported probability measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub atoms: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `‖f‖_{L²(μ)}` for values `f` at the atoms.
    pub fn norm(&self, f: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(f)
            .map(|(w, x)| w * x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// `∫ g dμ`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().zip(&self.weights).map(|(t, w)| w * g(*t)).sum()
    }
}

/// The canonical unitary `U` of `(T, φ)` as a matrix from coordinates to
/// values at the atoms, with the measure it maps onto.
#[derive(Debug, Clone)]
pub struct WeightedMap {
    pub matrix: DMatrix<f64>,
    pub measure: DiscreteMeasure,
    /// Eigenvectors of `T` (columns) with `⟨φ, v_i⟩ > 0`.
    pub vectors: DMatrix<f64>,
    /// `⟨φ, v_i⟩`.
    pub overlaps: Vec<f64>,
}

impl WeightedMap {
    /// `Ux`.
    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x
    }

    /// `U* f = Σ ⟨φ, v_i⟩ f_i v_i`.
    pub fn adjoint_apply(&self, f: &DVector<f64>) -> DVector<f64> {
        let scaled = DVector::from_iterator(f.len(), f.iter().zip(&self.overlaps).map(|(a, c)| a * c));
        &self.vectors * scaled
    }
}

/// Default atom separation `1e-8·ρ(T)`.
pub fn default_sep_tol(t: &SymOp) -> Result<f64> {
    Ok(1e-8 * eig_sym(t)?.spectral_radius().max(f64::MIN_POSITIVE))
}

const CYCLIC_TOL: f64 = 1e-10;

pub fn canonical_unitary(t: &SymOp, phi: &DVector<f64>, sep_tol: f64) -> Result<WeightedMap> {
    let n = t.order();
    if phi.len() != n {
        return Err(LabError::DimensionMismatch {
            expected: n,
            found: phi.len(),
        });
    }
    if (phi.norm() - 1.0).abs() > 1e-12 {
        return Err(LabError::BadParams(format!("φ has norm {}, expected 1", phi.norm())));
    }
    let eig = eig_sym(t)?;
    for i in 1..n {
        let gap = eig.values[i] - eig.values[i - 1];
        if gap <= sep_tol {
            return Err(LabError::DegenerateSpectrum { index: i - 1, gap });
        }
    }
    let mut vectors = eig.vectors.clone();
    let mut overlaps = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = vectors.column(i).dot(phi);
        if c.abs() <= CYCLIC_TOL {
            return Err(LabError::NotCyclic { index: i, overlap: c });
        }
        if c < 0.0 {
            vectors.column_mut(i).neg_mut();
            c = -c;
        }
        overlaps.push(c);
    }
    let mut matrix = vectors.transpose();
    for (i, c) in overlaps.iter().enumerate() {
        matrix.row_mut(i).unscale_mut(*c);
    }
    let measure = DiscreteMeasure {
        atoms: eig.values,
        weights: overlaps.iter().map(|c| c * c).collect(),
    };
    Ok(WeightedMap {
        matrix,
        measure,
        vectors,
        overlaps,
    })
}

/// `μ(Ω) = ⟨E_Ω(T)φ, φ⟩`.
pub fn spectral_measure(t: &SymOp, phi: &DVector<f64>, sep_tol: f64) -> Result<DiscreteMeasure> {
    Ok(canonical_unitary(t, phi, sep_tol)?.measure)
}

/// Polynomial with ascending coefficients at `x`.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `(f(x) − f(t)) / (x − t)`, i.e. the quotient of `f` by `(y − t)` at `y = x`.
pub fn divided_difference(coeffs: &[f64], x: f64, t: f64) -> f64 {
    if coeffs.len() < 2 {
        return 0.0;
    }
    // b_{k-1} = c_k + t b_k, highest first; then Horner in x on the b's
    let mut b = 0.0;
    let mut q = 0.0;
    for &c in coeffs[1..].iter().rev() {
        b = c + t * b;
        q = q * x + b;
    }
    q
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiawTreilOutput {
    pub atoms_alpha: Vec<f64>,
    pub formula_output: Vec<f64>,
    pub oracle_output: Vec<f64>,
    /// `max |formula − oracle|`.
    pub discrepancy: f64,
    /// `|‖V_α f‖_{μ_α} − ‖f‖_μ|` with the formula output.
    pub unitarity_defect: f64,
    /// Atoms of `μ` and `μ_α` interlace strictly in the order fixed by the
    /// sign of `α`.
    pub interlaced: bool,
}

pub fn liaw_treil_transform(
    t: &SymOp,
    phi: &DVector<f64>,
    alpha: f64,
    coeffs: &[f64],
    sep_tol: f64,
) -> Result<LiawTreilOutput> {
    if alpha == 0.0 {
        return Err(LabError::BadParams("α must be nonzero".into()));
    }
    let u = canonical_unitary(t, phi, sep_tol)?;
    let s = rank_perturbation(std::slice::from_ref(phi), &[alpha])?;
    let ua = canonical_unitary(&t.add(&s)?, phi, sep_tol)?;
    let mu = &u.measure;
    let mua = &ua.measure;
    for &x in &mua.atoms {
        for &tt in &mu.atoms {
            if (x - tt).abs() <= sep_tol {
                return Err(LabError::AtomCollision {
                    x,
                    t: tt,
                    sep: (x - tt).abs(),
                });
            }
        }
    }

    let formula_output: Vec<f64> = mua
        .atoms
        .iter()
        .map(|&x| {
            let dd: f64 = mu
                .atoms
                .iter()
                .zip(&mu.weights)
                .map(|(&tt, w)| w * divided_difference(coeffs, x, tt))
                .sum();
            poly_eval(coeffs, x) - alpha * dd
        })
        .collect();
    let f_mu = DVector::from_iterator(mu.atoms.len(), mu.atoms.iter().map(|&tt| poly_eval(coeffs, tt)));
    let oracle = ua.apply(&u.adjoint_apply(&f_mu));
    let discrepancy = formula_output
        .iter()
        .zip(oracle.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let unitarity_defect = (mua.norm(&formula_output) - mu.norm(f_mu.as_slice())).abs();
    Ok(LiawTreilOutput {
        interlaced: interlaces(&mu.atoms, &mua.atoms, alpha),
        atoms_alpha: mua.atoms.clone(),
        formula_output,
        oracle_output: oracle.iter().copied().collect(),
        discrepancy,
        unitarity_defect,
    })
}

/// For `α > 0`: `t_1 < x_1 < t_2 < x_2 < … < t_n < x_n`; mirrored for `α < 0`.
pub fn interlaces(atoms: &[f64], atoms_alpha: &[f64], alpha: f64) -> bool {
    if atoms.len() != atoms_alpha.len() {
        return false;
    }
    let merged: Vec<f64> = if alpha > 0.0 {
        atoms.iter().zip(atoms_alpha).flat_map(|(t, x)| [*t, *x]).collect()
    } else {
        atoms_alpha.iter().zip(atoms).flat_map(|(x, t)| [*x, *t]).collect()
    };
    merged.windows(2).all(|w| w[0] < w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(v: &[f64]) -> DVector<f64> {
        let v = DVector::from_column_slice(v);
        let n = v.norm();
        v / n
    }

    #[test]
    fn two_point_measure() {
        let t = SymOp::from_diagonal(&[0.0, 1.0]).unwrap();
        let m = spectral_measure(&t, &unit(&[1.0, 1.0]), 1e-8).unwrap();
        assert_eq!(m.atoms, vec![0.0, 1.0]);
        assert!((m.weights[0] - 0.5).abs() < 1e-15 && (m.weights[1] - 0.5).abs() < 1e-15);
        assert!(matches!(
            spectral_measure(&t, &unit(&[1.0, 0.0]), 1e-8),
            Err(LabError::NotCyclic { index: 1, .. })
        ));
        let deg = SymOp::from_diagonal(&[1.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            spectral_measure(&deg, &unit(&[1.0, 1.0, 1.0]), 1e-8),
            Err(LabError::DegenerateSpectrum { index: 0, .. })
        ));
    }

    #[test]
    fn unitary_sends_phi_to_one() {
        let t = SymOp::from_fn(5, |i, j| if i == j { i as f64 } else { 0.1 / (1.0 + (i + j) as f64) }).unwrap();
        let phi = unit(&[1.0, 0.5, -0.3, 0.8, 0.2]);
        let u = canonical_unitary(&t, &phi, 1e-8).unwrap();
        let one = u.apply(&phi);
        assert!(one.iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert!((u.adjoint_apply(&one) - &phi).amax() < 1e-12);
        assert!((u.measure.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn divided_difference_matches_direct_quotient() {
        let c = [0.3, -1.0, 2.0, 0.5];
        let (x, t) = (1.7, -0.4);
        let direct = (poly_eval(&c, x) - poly_eval(&c, t)) / (x - t);
        assert!((divided_difference(&c, x, t) - direct).abs() < 1e-13);
        assert_eq!(divided_difference(&[4.0], 1.0, 2.0), 0.0);
        // derivative at coincidence
        assert!((divided_difference(&c, 0.9, 0.9) - (-1.0 + 4.0 * 0.9 + 1.5 * 0.81)).abs() < 1e-13);
    }

    #[test]
    fn constants_and_identity() {
        let t = SymOp::from_diagonal(&[-1.0, -0.2, 0.4, 1.1]).unwrap();
        let phi = unit(&[1.0, 2.0, 1.0, 0.5]);
        let out = liaw_treil_transform(&t, &phi, 0.7, &[1.0], 1e-8).unwrap();
        assert!(out.formula_output.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let out = liaw_treil_transform(&t, &phi, 0.7, &[0.0, 1.0], 1e-8).unwrap();
        for (x, v) in out.atoms_alpha.iter().zip(&out.formula_output) {
            assert!((v - (x - 0.7)).abs() < 1e-10);
        }
        assert!(out.discrepancy < 1e-10);
        assert!(out.interlaced);
        let neg = liaw_treil_transform(&t, &phi, -0.7, &[0.0, 0.0, 1.0], 1e-8).unwrap();
        assert!(neg.interlaced);
        assert!(neg.discrepancy < 1e-10);
    }
}
