//! Finite Hankel and block-Hankel matrices and the commutator with the
//! forward shift.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::{eig_sym, SymOp};

/// Symbol of a (block-)Hankel matrix of order `n`: `2n − 1` scalars or
/// `2n − 1` symmetric blocks.
#[derive(Debug, Clone, PartialEq)]
pub enum HankelSymbol {
    Scalar(Vec<f64>),
    Block(Vec<DMatrix<f64>>),
}

/// `H[j][k] = s[j + k]` (blockwise for a block symbol).
pub fn hankel_from_symbol(symbol: &HankelSymbol) -> Result<SymOp> {
    match symbol {
        HankelSymbol::Scalar(s) => {
            let n = order_from_len(s.len())?;
            SymOp::from_fn(n, |j, k| s[j + k])
        }
        HankelSymbol::Block(blocks) => {
            let n = order_from_len(blocks.len())?;
            let b = blocks[0].nrows();
            for (i, blk) in blocks.iter().enumerate() {
                if blk.nrows() != b || blk.ncols() != b {
                    return Err(LabError::BadParams(format!("block {i} is not {b}x{b}")));
                }
                if blk != &blk.transpose() {
                    return Err(LabError::BadParams(format!("block {i} is not symmetric")));
                }
            }
            let mut m = DMatrix::zeros(n * b, n * b);
            for j in 0..n {
                for k in 0..n {
                    m.view_mut((j * b, k * b), (b, b)).copy_from(&blocks[j + k]);
                }
            }
            SymOp::try_exact(m)
        }
    }
}

fn order_from_len(len: usize) -> Result<usize> {
    if len == 0 || len.is_multiple_of(2) {
        return Err(LabError::BadParams(format!(
            "symbol length {len} is not of the form 2n - 1"
        )));
    }
    Ok(len.div_ceil(2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorDefect {
    /// Spectral norm of the leading `(n−1)×(n−1)` block of `AᵀH − HA`.
    pub interior_norm: f64,
    pub full_norm: f64,
    /// Five largest singular values of `AᵀH − HA`, descending.
    pub top_singulars: Vec<f64>,
}

/// Defect of `H` against the scalar forward shift.
pub fn commutator_defect(h: &SymOp) -> Result<CommutatorDefect> {
    commutator_defect_block(h, 1)
}

/// Defect against the block shift `A = S ⊗ I_b`; the interior block drops the
/// last block row and column.
pub fn commutator_defect_block(h: &SymOp, block: usize) -> Result<CommutatorDefect> {
    let n = h.order();
    if block == 0 || !n.is_multiple_of(block) {
        return Err(LabError::BadParams(format!(
            "order {n} is not a multiple of block size {block}"
        )));
    }
    // (AᵀH)_{jk} = H_{j+b,k}, (HA)_{jk} = H_{j,k+b}
    let at = |i: usize, j: usize| if i < n && j < n { h.get(i, j) } else { 0.0 };
    let c = DMatrix::from_fn(n, n, |j, k| at(j + block, k) - at(j, k + block));
    let singulars = singular_values(&c)?;
    let m = n - block;
    let interior = singular_values(&c.view((0, 0), (m, m)).into_owned())?;
    Ok(CommutatorDefect {
        interior_norm: interior.first().copied().unwrap_or(0.0),
        full_norm: singulars.first().copied().unwrap_or(0.0),
        top_singulars: singulars.into_iter().take(5).collect(),
    })
}

/// Singular values, descending, from the eigenvalues of `CᵀC`.
fn singular_values(c: &DMatrix<f64>) -> Result<Vec<f64>> {
    if c.nrows() == 0 {
        return Ok(Vec::new());
    }
    let gram = SymOp::from_matrix(c.transpose() * c)?;
    let mut s: Vec<f64> = eig_sym(&gram)?.values.iter().map(|x| x.max(0.0).sqrt()).collect();
    s.reverse();
    Ok(s)
}
