//! Jacobi-type operators on `ℓ²(ℤ)` truncated to the window `[-m, m]` with a
//! Dirichlet cutoff.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::SymOp;

/// Coefficient family. Coefficient lists are periodic in the site index:
/// site `n` reads entry `n mod len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LatticeFamily {
    /// `(Hx)_n = a_n x_{n+1} + a_{n-1} x_{n-1} + b_n x_n`
    Jacobi { a: Vec<f64>, b: Vec<f64> },
    /// `(Hx)_n = x_{n+1} + x_{n-1} + 2κ cos(2π(θ + nβ)) x_n`
    AlmostMathieu { kappa: f64, beta: f64, theta: f64 },
    /// `(Hx)_n = x_{n+1} + x_{n-1} + V_n x_n`
    Schrodinger { potential: Vec<f64> },
}

fn periodic(values: &[f64], n: i64) -> f64 {
    values[n.rem_euclid(values.len() as i64) as usize]
}

/// `(2m+1) x (2m+1)` truncation on sites `-m ..= m`.
pub fn lattice_operator(family: &LatticeFamily, m: usize) -> Result<SymOp> {
    if m == 0 {
        return Err(LabError::BadParams("window half-width must be at least 1".into()));
    }
    let sites: Vec<i64> = (-(m as i64)..=m as i64).collect();
    let (diag, off): (Vec<f64>, Vec<f64>) = match family {
        LatticeFamily::Jacobi { a, b } => {
            if a.is_empty() || b.is_empty() {
                return Err(LabError::BadParams("jacobi coefficients are empty".into()));
            }
            let off: Vec<f64> = sites[..sites.len() - 1].iter().map(|&n| periodic(a, n)).collect();
            if let Some(bad) = off.iter().find(|&&x| !(x > 0.0)) {
                return Err(LabError::BadParams(format!(
                    "jacobi off-diagonal must be positive, found {bad}"
                )));
            }
            (sites.iter().map(|&n| periodic(b, n)).collect(), off)
        }
        LatticeFamily::AlmostMathieu { kappa, beta, theta } => {
            if *kappa == 0.0 {
                return Err(LabError::BadParams("almost Mathieu coupling must be nonzero".into()));
            }
            let tau = 2.0 * std::f64::consts::PI;
            let diag = sites
                .iter()
                .map(|&n| 2.0 * kappa * (tau * (theta + n as f64 * beta)).cos())
                .collect();
            (diag, vec![1.0; sites.len() - 1])
        }
        LatticeFamily::Schrodinger { potential } => {
            if potential.is_empty() {
                return Err(LabError::BadParams("potential is empty".into()));
            }
            let diag = sites.iter().map(|&n| periodic(potential, n)).collect();
            (diag, vec![1.0; sites.len() - 1])
        }
    };
    SymOp::tridiagonal(&diag, &off)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eig_sym;

    fn free() -> LatticeFamily {
        LatticeFamily::Schrodinger { potential: vec![0.0] }
    }

    #[test]
    fn free_path_has_cosine_spectrum() {
        let m = 20;
        let h = lattice_operator(&free(), m).unwrap();
        let n = 2 * m + 1;
        let e = eig_sym(&h).unwrap();
        let mut want: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in e.values.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn free_spectrum_inside_and_symmetric() {
        let e = eig_sym(&lattice_operator(&free(), 100).unwrap()).unwrap();
        assert!(e.values.iter().all(|x| x.abs() < 2.0));
        let n = e.values.len();
        for i in 0..n {
            assert!((e.values[i] + e.values[n - 1 - i]).abs() < 1e-10);
        }
    }

    #[test]
    fn almost_mathieu_row_sum_bound() {
        let fam = LatticeFamily::AlmostMathieu {
            kappa: 1.3,
            beta: (5f64.sqrt() - 1.0) / 2.0,
            theta: 0.1,
        };
        let h = lattice_operator(&fam, 50).unwrap();
        assert!(h.inf_norm() <= 2.0 + 2.0 * 1.3 + 1e-12);
        let zero = LatticeFamily::AlmostMathieu {
            kappa: 0.0,
            beta: 0.5,
            theta: 0.0,
        };
        assert!(lattice_operator(&zero, 5).is_err());
    }

    #[test]
    fn jacobi_rejects_nonpositive_off_diagonal() {
        let fam = LatticeFamily::Jacobi {
            a: vec![1.0, 0.0],
            b: vec![0.0],
        };
        assert!(lattice_operator(&fam, 3).is_err());
        let ok = LatticeFamily::Jacobi {
            a: vec![1.0, 2.0],
            b: vec![0.5],
        };
        let h = lattice_operator(&ok, 1).unwrap();
        // sites -1, 0, 1: a_{-1} = a[1] = 2, a_0 = 1
        assert_eq!(h.get(0, 1), 2.0);
        assert_eq!(h.get(1, 2), 1.0);
    }
}
