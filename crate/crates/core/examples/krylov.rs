//! When φ is not cyclic, D(λ) vanishes on the complement of its Krylov
//! space: here T = T1 ⊕ M with φ living in the first block.

use nalgebra::DVector;

use projlab::lab::{krylov_kernel_check, DiffOptions};
use projlab::SymOp;

fn main() -> projlab::Result<()> {
    let t1 = SymOp::tridiagonal(&[0.0, 0.5, 1.0, 1.5], &[0.3, 0.3, 0.3])?;
    let m = SymOp::from_diagonal(&[0.25, 0.75, 1.25])?;
    let t = t1.direct_sum(&m);
    let phi = DVector::from_vec(vec![1.0, -0.5, 0.25, 0.5, 0.0, 0.0, 0.0]).normalize();

    let lambdas: Vec<f64> = (0..9).map(|k| -0.2 + 0.23 * k as f64).collect();
    let r = krylov_kernel_check(&t, &phi, 0.9, &lambdas, &DiffOptions::default().with_tau(1e-9))?;
    println!("krylov dim {}  complement {}", r.krylov_dim, r.complement_dim);
    for (lambda, norm) in &r.per_lambda {
        println!("  lambda {lambda:+.2}  max |D w| {norm:.1e}");
    }
    Ok(())
}
