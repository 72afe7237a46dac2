//! Builds one member of every gallery family from its spec and prints the
//! spectral range of T and T + S.

use projlab::eig_sym;
use projlab::gallery::{OperatorSpec, PerturbationSpec, Scheme};

fn main() -> projlab::Result<()> {
    let rr = |rank| PerturbationSpec::RandomRank { rank };
    let specs = [
        OperatorSpec::DiagExample1 { n: 12, rank: 2 },
        OperatorSpec::DiagExample2 { n: 21 },
        OperatorSpec::KreinPair { basis_size: 60, scheme: Scheme::LaguerreGalerkin },
        OperatorSpec::Carleman { basis_size: 60, scheme: Scheme::LaguerreGalerkin, perturbation: rr(1) },
        OperatorSpec::Jacobi { a: vec![1.0, 0.5], b: vec![0.0], window: 20, perturbation: rr(2) },
        OperatorSpec::AlmostMathieu {
            kappa: 1.0,
            beta: (5f64.sqrt() - 1.0) / 2.0,
            theta: 0.0,
            window: 20,
            perturbation: rr(1),
        },
        OperatorSpec::DiscreteSchrodinger { potential: vec![1.0, -1.0], window: 20, perturbation: rr(1) },
        OperatorSpec::RandomSym { n: 30, perturbation: rr(3) },
    ];
    println!("{:<22} {:>5} {:>5} {:>22} {:>22}", "family", "order", "rank", "sigma(T)", "sigma(T+S)");
    for spec in &specs {
        let p = spec.build(1)?;
        let a = eig_sym(&p.t)?.values;
        let b = eig_sym(&p.perturbed()?)?.values;
        let n = p.order();
        println!(
            "{:<22} {:>5} {:>5}   [{:>8.4}, {:>8.4}]   [{:>8.4}, {:>8.4}]",
            spec.family_name(),
            n,
            p.rank_s,
            a[0],
            a[n - 1],
            b[0],
            b[n - 1]
        );
    }
    Ok(())
}
