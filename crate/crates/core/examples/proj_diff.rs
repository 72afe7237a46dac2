//! D(λ) for the diagonal example whose ±1 eigenspaces saturate the rank
//! bound, and the three conditions at several N.

use projlab::gallery::diag_example_one;
use projlab::lab::{check_conditions, proj_diff, DiffOptions};

fn main() -> projlab::Result<()> {
    let opts = DiffOptions::default().with_tau(1e-9);
    let p = diag_example_one(10, 3)?;
    for lambda in [-1.8, -1.2, -0.55, 0.5] {
        let (_, r) = proj_diff(&p.t, &p.s, lambda, &opts)?;
        let verdicts: Vec<String> = (1..=4)
            .map(|n| {
                let v = check_conditions(&r, n);
                format!("N={n}:{}", if v.c3 { "ok" } else { "no" })
            })
            .collect();
        println!(
            "lambda {lambda:+.2}  ker(D-1) {}  ker(D+1) {}  ker D {}  c3 {}",
            r.dim_ker_minus_i,
            r.dim_ker_plus_i,
            r.dim_ker,
            verdicts.join(" ")
        );
    }
    Ok(())
}
