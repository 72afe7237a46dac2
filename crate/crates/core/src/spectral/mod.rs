//! Dense symmetric linear algebra: eigendecomposition, half-line spectral
//! projectors, numerical kernel dimension.

mod tridiag;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub use tridiag::MAX_SWEEPS_PER_EIGENVALUE;

/// Residual and orthogonality tolerance for [`EigSystem`].
pub const TOL_EIG: f64 = 1e-10;
/// Idempotence tolerance for [`Projector`].
pub const TOL_PROJ: f64 = 1e-10;

/// Real symmetric matrix of finite order: the truncation of a self-adjoint
/// operator. Entries are finite and exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymOp {
    mat: DMatrix<f64>,
}

impl SymOp {
    /// Symmetrizes `(m + mᵀ)/2`. Rejects non-square or non-finite input.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(LabError::BadParams(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(LabError::BadParams("matrix has non-finite entries".into()));
        }
        let n = m.nrows();
        let mut out = m;
        for j in 0..n {
            for i in (j + 1)..n {
                let avg = 0.5 * (out[(i, j)] + out[(j, i)]);
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        Ok(SymOp { mat: out })
    }

    /// Accepts only exactly symmetric, finite, square input.
    pub fn try_exact(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(LabError::BadParams("matrix is not square".into()));
        }
        let n = m.nrows();
        for j in 0..n {
            for i in 0..n {
                if !m[(i, j)].is_finite() {
                    return Err(LabError::BadParams("matrix has non-finite entries".into()));
                }
                if m[(i, j)] != m[(j, i)] {
                    return Err(LabError::BadParams(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SymOp { mat: m })
    }

    /// Builds from the upper triangle given by `f(i, j)` for `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let x = f(i, j);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        Self::try_exact(m)
    }

    pub fn zeros(n: usize) -> Self {
        SymOp {
            mat: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        SymOp {
            mat: DMatrix::identity(n, n),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.iter().any(|x| !x.is_finite()) {
            return Err(LabError::BadParams("diagonal has non-finite entries".into()));
        }
        Ok(SymOp {
            mat: DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
        })
    }

    /// Symmetric tridiagonal matrix with the given diagonal and off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n > 0 && off.len() + 1 != n {
            return Err(LabError::DimensionMismatch {
                expected: n.saturating_sub(1),
                found: off.len(),
            });
        }
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
        }
        for (i, &x) in off.iter().enumerate() {
            m[(i, i + 1)] = x;
            m[(i + 1, i)] = x;
        }
        Self::try_exact(m)
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &SymOp) -> SymOp {
        let (n, k) = (self.order(), other.order());
        let mut m = DMatrix::zeros(n + k, n + k);
        m.view_mut((0, 0), (n, n)).copy_from(&self.mat);
        m.view_mut((n, n), (k, k)).copy_from(&other.mat);
        SymOp { mat: m }
    }

    pub fn order(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.mat.diagonal().iter().copied().collect()
    }

    pub fn add(&self, other: &SymOp) -> Result<SymOp> {
        self.check_same_order(other)?;
        Ok(SymOp {
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &SymOp) -> Result<SymOp> {
        self.check_same_order(other)?;
        Ok(SymOp {
            mat: &self.mat - &other.mat,
        })
    }

    pub fn scale(&self, s: f64) -> SymOp {
        SymOp { mat: &self.mat * s }
    }

    /// `self + s·I`.
    pub fn shift(&self, s: f64) -> SymOp {
        let mut m = self.mat.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += s;
        }
        SymOp { mat: m }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.mat * x
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }

    /// Maximum absolute row sum; an upper bound for the spectral norm.
    pub fn inf_norm(&self) -> f64 {
        (0..self.order())
            .map(|i| self.mat.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &SymOp) -> Result<f64> {
        self.check_same_order(other)?;
        Ok(self
            .mat
            .iter()
            .zip(other.mat.iter())
            .fold(0.0, |acc: f64, (a, b)| acc.max((a - b).abs())))
    }

    fn check_same_order(&self, other: &SymOp) -> Result<()> {
        if self.order() != other.order() {
            return Err(LabError::DimensionMismatch {
                expected: self.order(),
                found: other.order(),
            });
        }
        Ok(())
    }
}

/// Ascending eigenvalues with matched orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigSystem {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigSystem {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }

    /// `V diag(values) Vᵀ`.
    pub fn reconstruct(&self) -> SymOp {
        self.apply_function(|x| x)
    }

    /// `V diag(f(values)) Vᵀ`: the functional calculus on a finite spectrum.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> SymOp {
        let mut scaled = self.vectors.clone();
        for (j, &x) in self.values.iter().enumerate() {
            let fx = f(x);
            scaled.column_mut(j).scale_mut(fx);
        }
        let m = &scaled * self.vectors.transpose();
        SymOp::from_matrix(m).expect("finite by construction")
    }

    /// Largest `‖A v_i − λ_i v_i‖₂`.
    pub fn max_residual(&self, a: &SymOp) -> f64 {
        let av = a.matrix() * &self.vectors;
        (0..self.order())
            .map(|i| (av.column(i) - self.vectors.column(i) * self.values[i]).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|VᵀV − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = self.vectors.transpose() * &self.vectors;
        let n = self.order();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// Default tie tolerance `1e-9·(1 + max|values|)`.
    pub fn default_tie_tol(&self) -> f64 {
        1e-9 * (1.0 + self.spectral_radius())
    }
}

/// Eigendecomposition of a symmetric matrix. Eigenvalues ascend and are
/// counted with multiplicity.
pub fn eig_sym(a: &SymOp) -> Result<EigSystem> {
    let n = a.order();
    let mut flat = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            flat.push(a.get(i, j));
        }
    }
    let raw = tridiag::decompose(n, &flat)?;
    // rows of vectors_t are eigenvectors; a row-major n x n buffer read
    // column-major is its transpose
    let vectors = DMatrix::from_column_slice(n, n, &raw.vectors_t);
    Ok(EigSystem {
        values: raw.values,
        vectors,
    })
}

/// Half-line selector for a spectral projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    /// `(-∞, λ)`
    #[default]
    OpenBelow,
    /// `(-∞, λ]`
    ClosedBelow,
}

impl IntervalKind {
    pub fn contains(self, x: f64, lambda: f64) -> bool {
        match self {
            IntervalKind::OpenBelow => x < lambda,
            IntervalKind::ClosedBelow => x <= lambda,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            IntervalKind::OpenBelow => IntervalKind::ClosedBelow,
            IntervalKind::ClosedBelow => IntervalKind::OpenBelow,
        }
    }
}

/// What to do when an eigenvalue sits within `tie_tol` of the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    Reject,
    /// Decide membership by exact floating-point comparison.
    Resolve,
}

/// Orthogonal projector with its rank.
#[derive(Debug, Clone)]
pub struct Projector {
    pub matrix: SymOp,
    pub rank: usize,
}

impl Projector {
    /// `‖P² − P‖_max`.
    pub fn idempotence_defect(&self) -> f64 {
        let p = self.matrix.matrix();
        let p2 = p * p;
        p2.iter()
            .zip(p.iter())
            .fold(0.0, |acc: f64, (a, b)| acc.max((a - b).abs()))
    }
}

/// Spectral projector onto `(-∞, λ)` or `(-∞, λ]` using the default tie
/// tolerance of `eig`.
pub fn spectral_projector(
    eig: &EigSystem,
    lambda: f64,
    kind: IntervalKind,
    tie_policy: TiePolicy,
) -> Result<Projector> {
    spectral_projector_with_tol(eig, lambda, kind, tie_policy, eig.default_tie_tol())
}

pub fn spectral_projector_with_tol(
    eig: &EigSystem,
    lambda: f64,
    kind: IntervalKind,
    tie_policy: TiePolicy,
    tie_tol: f64,
) -> Result<Projector> {
    if tie_policy == TiePolicy::Reject {
        if let Some((index, &value)) = eig
            .values
            .iter()
            .enumerate()
            .find(|(_, &x)| (x - lambda).abs() <= tie_tol)
        {
            return Err(LabError::TieAtThreshold {
                lambda,
                index,
                value,
                tol: tie_tol,
            });
        }
    }
    let selected: Vec<usize> = (0..eig.order())
        .filter(|&i| kind.contains(eig.values[i], lambda))
        .collect();
    let n = eig.order();
    let mut cols = DMatrix::zeros(n, selected.len());
    for (c, &i) in selected.iter().enumerate() {
        cols.column_mut(c).copy_from(&eig.vectors.column(i));
    }
    let p = &cols * cols.transpose();
    Ok(Projector {
        matrix: SymOp::from_matrix(p)?,
        rank: selected.len(),
    })
}

/// Default numerical-kernel threshold `order · ε · spectral_radius`.
pub fn default_kernel_tau(eig: &EigSystem) -> f64 {
    eig.order() as f64 * f64::EPSILON * eig.spectral_radius()
}

/// `#{i : |λ_i(A)| ≤ τ}`.
pub fn numerical_kernel_dim(a: &SymOp, tau: f64) -> Result<usize> {
    let eig = eig_sym(a)?;
    Ok(count_within(&eig.values, 0.0, tau))
}

/// Number of `values` within `tau` of `center`.
pub fn count_within(values: &[f64], center: f64, tau: f64) -> usize {
    values.iter().filter(|x| (*x - center).abs() <= tau).count()
}

/// Smallest `|eigenvalue|`; zero for an empty matrix.
pub fn min_singular_value(a: &SymOp) -> Result<f64> {
    let eig = eig_sym(a)?;
    if eig.order() == 0 {
        return Ok(0.0);
    }
    Ok(eig.values.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min))
}

/// Numerical rank: eigenvalues with `|x| > tau`.
pub fn numerical_rank(a: &SymOp, tau: f64) -> Result<usize> {
    let eig = eig_sym(a)?;
    Ok(eig.values.iter().filter(|x| x.abs() > tau).count())
}
