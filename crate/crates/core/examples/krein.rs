//! Kreĭn's pair: two positive integral operators on the half-line differing
//! by a rank-one term. The difference D(1/2) spreads toward ±1 as the
//! Laguerre basis grows.

use projlab::gallery::{krein_pair, perturbation_rank, Scheme};
use projlab::lab::{DiffContext, DiffOptions};

fn main() -> projlab::Result<()> {
    let opts = DiffOptions::default().with_tau(1e-9);
    for n in [25, 50, 100, 200] {
        let p = krein_pair(n, Scheme::LaguerreGalerkin)?;
        let (_, r) = DiffContext::new(&p.t, &p.s)?.proj_diff(0.5, &opts)?;
        println!(
            "basis {n:>4}  rank S {}  D(0.5) in [{:+.4}, {:+.4}]  trace norm {:.3}",
            perturbation_rank(&p.s)?,
            r.min_eig,
            r.max_eig,
            r.trace_norm
        );
    }

    // the Nyström scheme approximates the same operators on a grid
    let p = krein_pair(80, Scheme::Nystrom { cutoff: 40.0, grid: 120 })?;
    let (_, r) = DiffContext::new(&p.t, &p.s)?.proj_diff(0.5, &opts)?;
    println!("nystrom 120  D(0.5) in [{:+.4}, {:+.4}]", r.min_eig, r.max_eig);
    Ok(())
}
