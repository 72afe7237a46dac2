//! Eigensystem of a small symmetric matrix and its spectral projectors.

use projlab::{eig_sym, spectral_projector, IntervalKind, SymOp, TiePolicy};

fn main() -> projlab::Result<()> {
    let a = SymOp::tridiagonal(&[2.0, 0.0, -1.0, 3.0], &[1.0, 0.5, 0.25])?;
    let e = eig_sym(&a)?;
    println!("eigenvalues      {:.6?}", e.values.as_slice());
    println!("max residual     {:.2e}", e.max_residual(&a));
    println!("orthogonality    {:.2e}", e.orthogonality_defect());

    for lambda in [-1.5, 0.5, 2.5] {
        let p = spectral_projector(&e, lambda, IntervalKind::OpenBelow, TiePolicy::Reject)?;
        println!(
            "E(-inf, {lambda:>4}) rank {}  trace {:.3}  |P^2 - P| {:.1e}",
            p.rank,
            p.matrix.trace(),
            p.idempotence_defect()
        );
    }
    Ok(())
}
