//! Rank-one perturbations in the spectral representation: the canonical
//! unitary onto L²(μ) and the transform taking T + αφφᵀ to multiplication
//! by x on L²(μ_α).

use nalgebra::DVector;

use projlab::liaw_treil::{canonical_unitary, default_sep_tol, liaw_treil_transform, spectral_measure};
use projlab::SymOp;

fn main() -> projlab::Result<()> {
    let t = SymOp::tridiagonal(&[0.0, 0.3, -0.4, 0.9, 1.2], &[0.5, 0.4, 0.3, 0.2])?;
    let phi = DVector::from_element(5, 1.0).normalize();
    let sep = default_sep_tol(&t)?;

    let mu = spectral_measure(&t, &phi, sep)?;
    println!("mu atoms   {:+.4?}", mu.atoms);
    println!("mu weights {:.4?}", mu.weights);
    let u = canonical_unitary(&t, &phi, sep)?;
    println!("U phi      {:.4?}", u.apply(&phi).as_slice());

    let alpha = 0.8;
    // f(t) = 1 - t + t^3
    let out = liaw_treil_transform(&t, &phi, alpha, &[1.0, -1.0, 0.0, 1.0], sep)?;
    println!("mu_alpha atoms {:+.4?}", out.atoms_alpha);
    println!("formula        {:+.6?}", out.formula_output);
    println!("oracle         {:+.6?}", out.oracle_output);
    println!(
        "discrepancy {:.1e}  unitarity {:.1e}  interlaced {}",
        out.discrepancy, out.unitarity_defect, out.interlaced
    );
    Ok(())
}
