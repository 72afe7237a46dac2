//! Small, fast battery behind `lab selftest`.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley::{verify_reduction, Direction};
use crate::error::Result;
use crate::gallery::{
    diag_example_one, krein_pair, laguerre_reference_apply, random_perturbation, random_sym,
    Scheme,
};
use crate::hankel::{commutator_defect, hankel_from_symbol, HankelSymbol};
use crate::lab::{
    build_correction, default_budget, halmos_split, proj_diff, verify_correction, DiffOptions,
};
use crate::liaw_treil::{default_sep_tol, liaw_treil_transform};
use crate::spectral::{eig_sym, SymOp};

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn line(name: &'static str, r: Result<(bool, String)>) -> SelftestLine {
    match r {
        Ok((passed, detail)) => SelftestLine { name, passed, detail },
        Err(e) => SelftestLine {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn opts() -> DiffOptions {
    DiffOptions::default().with_tau(1e-9)
}

fn eigensolver() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_sym(60, &mut rng);
    let e = eig_sym(&a)?;
    let r = e.max_residual(&a).max(e.orthogonality_defect());
    Ok((r < 1e-10, format!("residual {r:.2e}")))
}

fn diag_dims() -> Result<(bool, String)> {
    let p = diag_example_one(6, 2)?;
    let (_, r) = proj_diff(&p.t, &p.s, -1.2, &opts())?;
    let dims = (r.dim_ker_minus_i, r.dim_ker_plus_i);
    Ok((dims == (2, 0), format!("dims {dims:?}")))
}

fn rank_bound() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0usize;
    let mut ok = true;
    for i in 0..20 {
        let rank = 1 + i % 3;
        let t = random_sym(24, &mut rng);
        let p = random_perturbation(t, rank, &mut rng, "selftest")?;
        let lambda = rng.random_range(-1.5..1.5);
        let (_, r) = proj_diff(&p.t, &p.s, lambda, &opts())?;
        worst = worst.max(r.dim_ker_minus_i.max(r.dim_ker_plus_i));
        ok &= r.dim_ker_minus_i <= rank && r.dim_ker_plus_i <= rank;
    }
    Ok((ok, format!("largest ±1 multiplicity {worst}")))
}

fn halmos_pairing() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = random_sym(40, &mut rng);
    let p = random_perturbation(t, 3, &mut rng, "selftest")?;
    let (d, _) = proj_diff(&p.t, &p.s, 0.1, &opts())?;
    let split = halmos_split(&d, 1e-9)?;
    Ok((split.pair_defect <= 1e-8, format!("pair defect {:.2e}", split.pair_defect)))
}

fn krein_rank_one() -> Result<(bool, String)> {
    let p = krein_pair(24, Scheme::LaguerreGalerkin)?;
    let phi = &p.phi[0];
    let dev = p.s.max_abs_diff(&SymOp::from_matrix(phi * phi.transpose())?)?;
    Ok((dev < 1e-8, format!("max |S - φφᵀ| {dev:.2e}")))
}

fn laguerre() -> Result<(bool, String)> {
    let grid = [0.3, 1.0, 2.5, 6.0];
    let worst = (0..=3)
        .map(|k| laguerre_reference_apply(k, &grid, 60.0))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((worst < 1e-6, format!("residual {worst:.2e}")))
}

fn reduction() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t = random_sym(20, &mut rng);
    let p = random_perturbation(t, 2, &mut rng, "selftest")?;
    let mut worst: f64 = 0.0;
    for lambda in [-0.9, -0.2, 0.35, 0.8] {
        for dir in [Direction::Below, Direction::Above] {
            worst = worst.max(verify_reduction(&p.t, &p.s, lambda, dir, &opts())?);
        }
    }
    Ok((worst <= 1e-9, format!("deviation {worst:.2e}")))
}

fn spectral_measure() -> Result<(bool, String)> {
    let t = SymOp::from_diagonal(&[-1.0, -0.3, 0.2, 0.9, 1.4])?;
    let phi = DVector::from_vec(vec![0.5, 0.3, 0.6, 0.4, 0.37]).normalize();
    let out = liaw_treil_transform(&t, &phi, 0.7, &[0.3, -1.0, 0.5, 0.25], default_sep_tol(&t)?)?;
    let ok = out.discrepancy < 1e-10 && out.unitarity_defect < 1e-10 && out.interlaced;
    Ok((ok, format!("discrepancy {:.2e}", out.discrepancy)))
}

fn correction() -> Result<(bool, String)> {
    let d = SymOp::from_diagonal(&[1.0, 1.0, 1.0, 0.5, -0.5, 0.5, 0.0])?;
    let a = default_budget(7);
    let c = build_correction(&d, &a, 1e-10)?;
    let chk = verify_correction(&d, &c.k, &a, 1e-10)?;
    Ok((chk.passed(), format!("{} shifts", c.shifts.len())))
}

fn hankel() -> Result<(bool, String)> {
    let s: Vec<f64> = (0..15).map(|k| 1.0 / (k as f64 + 1.0)).collect();
    let d = commutator_defect(&hankel_from_symbol(&HankelSymbol::Scalar(s))?)?;
    Ok((d.interior_norm < 1e-12, format!("interior {:.2e}", d.interior_norm)))
}

pub fn selftest() -> Vec<SelftestLine> {
    vec![
        line("eigensolver", eigensolver()),
        line("diag_example_dims", diag_dims()),
        line("rank_bound", rank_bound()),
        line("halmos_pairing", halmos_pairing()),
        line("krein_rank_one", krein_rank_one()),
        line("laguerre_closed_form", laguerre()),
        line("resolvent_reduction", reduction()),
        line("spectral_measure", spectral_measure()),
        line("correction", correction()),
        line("hankel_commutator", hankel()),
    ]
}
