//! Carleman's operator 1/(x + y): its Galerkin truncations fill [0, π].

use std::f64::consts::PI;

use projlab::eig_sym;
use projlab::gallery::{carleman, Scheme};

fn main() -> projlab::Result<()> {
    for n in [25, 50, 100, 200, 400] {
        let e = eig_sym(&carleman(n, Scheme::LaguerreGalerkin)?)?.values;
        let top = e[n - 1];
        println!("basis {n:>4}  top {top:.6}  pi - top {:.2e}", PI - top);
    }
    Ok(())
}
