//! Weyl-sequence probe: unit vectors orthogonal to the Krylov space of the
//! perturbation, pushed deeper each step. Shrinking |D x_n| means λ is
//! reached by approximate eigenvectors the perturbation cannot see.

use projlab::gallery::{krein_pair, Scheme};
use projlab::lab::{weyl_probe, DiffOptions, WeylOptions};

fn main() -> projlab::Result<()> {
    let p = krein_pair(300, Scheme::LaguerreGalerkin)?;
    let diff = DiffOptions::default().with_tau(1e-9);
    for (stride, window) in [(1, 4), (16, 4), (32, 2)] {
        let o = WeylOptions { depth_stride: stride, window, diff };
        let norms = weyl_probe(&p.t, &p.s, &p.phi, 0.5, 8, 0, &o)?;
        println!("stride {stride:>2} window {window}  {:.3?}", norms);
    }
    Ok(())
}
