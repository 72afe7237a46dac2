//! Builds a small self-adjoint K, |ν_j| ≤ a_j, such that D + K has balanced
//! ±1 eigenspaces, then verifies it independently.

use projlab::gallery::diag_example_one;
use projlab::lab::{build_correction, default_budget, verify_correction, DiffContext, DiffOptions};

fn main() -> projlab::Result<()> {
    let p = diag_example_one(12, 3)?;
    let d = DiffContext::new(&p.t, &p.s)?.difference(-1.2, &DiffOptions::default().with_tau(1e-9))?;
    let a = default_budget(d.order());
    let c = build_correction(&d, &a, 1e-9)?;
    println!("shifts {:+.4?}", c.shifts);
    println!("budget {:.4?}", &a[..c.shifts.len()]);
    let chk = verify_correction(&d, &c.k, &a, 1e-9)?;
    println!("{chk:#?}");
    Ok(())
}
