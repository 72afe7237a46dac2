//! Splits D(λ) into kernel, ±1 eigenspaces and the generic part, whose
//! eigenvalues come in pairs ±s.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use projlab::gallery::{random_perturbation, random_sym};
use projlab::lab::{halmos_split, DiffContext, DiffOptions};

fn main() -> projlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = random_perturbation(random_sym(40, &mut rng), 3, &mut rng, "halmos")?;
    let ctx = DiffContext::new(&p.t, &p.s)?;
    let d = ctx.difference(0.1, &DiffOptions::default().with_tau(1e-9))?;
    let h = halmos_split(&d, 1e-9)?;
    println!("ker D {}  +1 {}  -1 {}", h.dim_ker, h.dim_plus_one, h.dim_minus_one);
    println!("generic spectrum {:+.5?}", h.generic_spectrum);
    println!("pair defect {:.1e}", h.pair_defect);
    Ok(())
}
