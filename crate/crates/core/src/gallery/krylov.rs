//! Krylov spaces `span{T^j φ}` built Lanczos-style: each new direction is
//! `T` applied to the last orthonormal vector, orthogonalized twice.

use nalgebra::{DMatrix, DVector};

use crate::error::{LabError, Result};
use crate::spectral::SymOp;

/// Orthonormal basis (columns) of a Krylov space.
#[derive(Debug, Clone)]
pub struct KrylovBasis {
    pub basis: DMatrix<f64>,
    pub dim: usize,
}

impl KrylovBasis {
    pub fn is_cyclic(&self) -> bool {
        self.dim == self.basis.nrows()
    }

    /// `(I − BBᵀ) x`.
    pub fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        x - &self.basis * (self.basis.transpose() * x)
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> DMatrix<f64> {
        let n = self.basis.nrows();
        let mut cols: Vec<DVector<f64>> = (0..self.dim).map(|i| self.basis.column(i).into()).collect();
        let start = cols.len();
        for i in 0..n {
            if cols.len() == n {
                break;
            }
            let mut e = DVector::zeros(n);
            e[i] = 1.0;
            if let Some(v) = orthonormalize(&cols, e, 1e-8) {
                cols.push(v);
            }
        }
        DMatrix::from_columns(&cols[start..])
    }
}

/// Projects `v` off `basis` twice and normalizes; `None` if less than
/// `tol · |v|` survives.
pub(crate) fn orthonormalize(
    basis: &[DVector<f64>],
    mut v: DVector<f64>,
    tol: f64,
) -> Option<DVector<f64>> {
    let scale = v.norm();
    if scale == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&v);
            v.axpy(-c, b, 1.0);
        }
    }
    let r = v.norm();
    if r < tol * scale {
        None
    } else {
        Some(v / r)
    }
}

/// Krylov basis of `φ`; stops when the new direction drops below `tol`
/// relative to the size of `T q_last`.
pub fn krylov_basis(t: &SymOp, phi: &DVector<f64>, tol: f64) -> Result<KrylovBasis> {
    krylov_block(t, std::slice::from_ref(phi), None, tol)
}

/// Block Krylov basis of `span{T^j φ_k : j ≤ depth}` (`depth = None` runs to
/// invariance).
pub fn krylov_block(
    t: &SymOp,
    phis: &[DVector<f64>],
    depth: Option<usize>,
    tol: f64,
) -> Result<KrylovBasis> {
    let n = t.order();
    if phis.is_empty() {
        return Err(LabError::BadParams("no starting vectors".into()));
    }
    for p in phis {
        if p.len() != n {
            return Err(LabError::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        if p.norm() == 0.0 {
            return Err(LabError::BadParams("starting vector is zero".into()));
        }
    }
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut frontier: Vec<DVector<f64>> = Vec::new();
    for p in phis {
        if let Some(v) = orthonormalize(&basis, p.clone(), tol) {
            basis.push(v.clone());
            frontier.push(v);
        }
    }
    let mut level = 0;
    while !frontier.is_empty() && basis.len() < n && depth.is_none_or(|d| level < d) {
        let mut next = Vec::new();
        for q in &frontier {
            if let Some(v) = orthonormalize(&basis, t.apply(q), tol) {
                basis.push(v.clone());
                next.push(v);
            }
        }
        frontier = next;
        level += 1;
    }
    let dim = basis.len();
    let basis = if dim == 0 {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&basis)
    };
    Ok(KrylovBasis { basis, dim })
}
