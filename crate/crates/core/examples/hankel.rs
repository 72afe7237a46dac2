//! Hankel matrices and the shift commutator: interior entries of
//! H S - S* H vanish exactly for Hankel H, and nearly for small perturbations.

use nalgebra::{DMatrix, DVector};

use projlab::hankel::{commutator_defect, commutator_defect_block, hankel_from_symbol, HankelSymbol};
use projlab::SymOp;

fn main() -> projlab::Result<()> {
    let n = 20;
    let s: Vec<f64> = (0..2 * n - 1).map(|k| 1.0 / (k as f64 + 1.0)).collect();
    let h = hankel_from_symbol(&HankelSymbol::Scalar(s))?;
    let d = commutator_defect(&h)?;
    println!("hilbert   interior {:.1e}  full {:.3}", d.interior_norm, d.full_norm);

    let u = DVector::from_fn(n, |j, _| 0.1 / ((j + 1) as f64).powi(2));
    let hp = h.add(&SymOp::from_matrix(&u * u.transpose())?)?;
    let d = commutator_defect(&hp)?;
    let top: Vec<String> = d.top_singulars.iter().map(|x| format!("{x:.2e}")).collect();
    println!("perturbed interior {:.1e}  top singulars {}", d.interior_norm, top.join(" "));

    let blocks: Vec<DMatrix<f64>> = (0..5)
        .map(|k| DMatrix::from_row_slice(2, 2, &[1.0 / (k + 1) as f64, 0.5, 0.5, -(k as f64)]))
        .collect();
    let hb = hankel_from_symbol(&HankelSymbol::Block(blocks))?;
    let d = commutator_defect_block(&hb, 2)?;
    println!("block 2x2 order {}  interior {:.1e}", hb.order(), d.interior_norm);
    Ok(())
}
