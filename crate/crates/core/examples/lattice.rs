//! Finite windows of lattice operators on Z.

use projlab::eig_sym;
use projlab::gallery::{lattice_operator, LatticeFamily};

fn main() -> projlab::Result<()> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let families = [
        ("free", LatticeFamily::Schrodinger { potential: vec![0.0] }),
        ("period-2 jacobi", LatticeFamily::Jacobi { a: vec![1.0, 0.5], b: vec![0.2, -0.2] }),
        ("mathieu k=0.5", LatticeFamily::AlmostMathieu { kappa: 0.5, beta: golden, theta: 0.1 }),
        ("mathieu k=2", LatticeFamily::AlmostMathieu { kappa: 2.0, beta: golden, theta: 0.1 }),
    ];
    for (name, fam) in &families {
        let h = lattice_operator(fam, 100)?;
        let e = eig_sym(&h)?.values;
        // largest internal gap hints at band structure
        let (gap, at) = e
            .windows(2)
            .map(|w| (w[1] - w[0], 0.5 * (w[0] + w[1])))
            .fold((0.0, 0.0), |acc, g| if g.0 > acc.0 { g } else { acc });
        println!(
            "{name:<16} order {}  sigma in [{:+.4}, {:+.4}]  widest gap {gap:.4} near {at:+.4}",
            h.order(),
            e[0],
            e[e.len() - 1]
        );
    }
    Ok(())
}
