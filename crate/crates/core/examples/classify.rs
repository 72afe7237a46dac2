//! Classifies points of the real line from spectra of growing truncations
//! of a perturbed free lattice operator: inside the band eigenvalues pile up
//! on both sides, at the edges on one side only.

use projlab::eig_sym;
use projlab::gallery::{OperatorSpec, PerturbationSpec};
use projlab::lab::classify_lambda;

fn main() -> projlab::Result<()> {
    let spec = OperatorSpec::DiscreteSchrodinger {
        potential: vec![0.0],
        window: 10,
        perturbation: PerturbationSpec::RandomRank { rank: 1 },
    };
    let mut spectra = Vec::new();
    for m in [10, 20, 40, 80, 160] {
        let p = spec.with_order(m).build(2)?;
        spectra.push(eig_sym(&p.perturbed()?)?.values.as_slice().to_vec());
    }
    for lambda in [-3.0, -2.0, -1.0, 0.013, 1.7, 2.0, 2.5] {
        let c = classify_lambda(&spectra, lambda, 0.05)?;
        let counts: Vec<String> = c
            .evidence
            .iter()
            .map(|s| format!("{}/{}/{}", s.left, s.at, s.right))
            .collect();
        println!("lambda {lambda:+.3}  {:<18} left/at/right {}", format!("{:?}", c.verdict), counts.join(" "));
    }
    Ok(())
}
