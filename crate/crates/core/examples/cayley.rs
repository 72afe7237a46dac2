//! Resolvent reduction: a semibounded pair (T, S) is mapped to bounded
//! (T', S') with the same perturbation rank, and D(λ) transported.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use projlab::cayley::{map_lambda, reduce_semibounded, verify_reduction, Direction};
use projlab::gallery::{perturbation_rank, random_perturbation, random_sym};
use projlab::lab::DiffOptions;

fn main() -> projlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = random_perturbation(random_sym(30, &mut rng), 2, &mut rng, "cayley")?;
    let opts = DiffOptions::default().with_tau(1e-9);
    for dir in [Direction::Below, Direction::Above] {
        let rec = reduce_semibounded(&p.t, &p.s, dir)?;
        println!(
            "{dir:?}: c = {:.4}  rank S {}  rank S' {}",
            rec.c,
            perturbation_rank(&p.s)?,
            perturbation_rank(&rec.s_prime)?
        );
        for lambda in [-0.77, 0.13, 1.41] {
            let mu = map_lambda(lambda, rec.c, dir)?;
            let dev = verify_reduction(&p.t, &p.s, lambda, dir, &opts)?;
            println!("  lambda {lambda:+.2} -> mu {mu:+.4}  deviation {dev:.1e}");
        }
    }
    Ok(())
}
