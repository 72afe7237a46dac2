use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use projlab::cayley::{reduce_semibounded, verify_reduction, Direction};
use projlab::gallery::{
    diag_example_one, krein_pair, perturbation_rank, random_perturbation, random_sym,
    rank_perturbation, OperatorSpec, PerturbationSpec, Scheme,
};
use projlab::hankel::{commutator_defect, hankel_from_symbol, HankelSymbol};
use projlab::lab::{
    check_conditions, gap_eig_count, halmos_split, krylov_kernel_check, proj_diff, weyl_probe,
    DiffContext, DiffOptions, WeylOptions,
};
use projlab::liaw_treil::{canonical_unitary, default_sep_tol, liaw_treil_transform};
use projlab::{eig_sym, SymOp};

fn opts() -> DiffOptions {
    DiffOptions::default().with_tau(1e-9)
}

#[test]
fn krein_difference_is_paired() {
    let p = krein_pair(200, Scheme::LaguerreGalerkin).unwrap();
    let (d, _) = proj_diff(&p.t, &p.s, 0.5, &opts()).unwrap();
    assert!(halmos_split(&d, 1e-9).unwrap().pair_defect < 1e-8);
}

#[test]
fn example_one_saturates_the_bound() {
    let p = diag_example_one(6, 2).unwrap();
    let (_, r) = proj_diff(&p.t, &p.s, -1.2, &opts()).unwrap();
    assert!(check_conditions(&r, 2).c3);
    assert!(!check_conditions(&r, 1).c3);
}

#[test]
fn rank_one_never_breaks_c3() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for _ in 0..30 {
        let t = random_sym(40, &mut rng);
        let p = random_perturbation(t, 1, &mut rng, "c3").unwrap();
        let ctx = DiffContext::new(&p.t, &p.s).unwrap();
        for _ in 0..5 {
            let lambda = rng.random_range(-2.0..2.0);
            let Ok((_, r)) = ctx.proj_diff(lambda, &opts()) else { continue };
            assert!(check_conditions(&r, 1).c3);
        }
    }
}

#[test]
fn gap_count_over_500_seeds() {
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 16;
        // spectrum split into [-2, -1] and [1, 2] around the gap (-1, 1)
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let x = rng.random_range(1.0..2.0);
                if i % 2 == 0 { x } else { -x }
            })
            .collect();
        let a = SymOp::from_diagonal(&diag).unwrap();
        let b = random_perturbation(SymOp::zeros(n), 3, &mut rng, "gap").unwrap().s;
        let count = gap_eig_count(&a, &b, (-1.0, 1.0)).unwrap();
        assert!(count <= 3, "seed {seed}: {count}");
    }
}

#[test]
fn weyl_probe_on_krein_pair() {
    let p = krein_pair(300, Scheme::LaguerreGalerkin).unwrap();
    let o = WeylOptions {
        depth_stride: 32,
        window: 2,
        diff: opts(),
    };
    let norms = weyl_probe(&p.t, &p.s, &p.phi, 0.5, 8, 0, &o).unwrap();
    assert!(norms[7] < norms[0], "{norms:?}");
    let head: f64 = norms[..4].iter().sum();
    let tail: f64 = norms[4..].iter().sum();
    assert!(tail < head, "{norms:?}");
}

#[test]
fn weyl_probe_on_free_jacobi() {
    let spec = OperatorSpec::DiscreteSchrodinger {
        potential: vec![0.0],
        window: 150,
        perturbation: PerturbationSpec::RandomRank { rank: 1 },
    };
    for seed in 0..4 {
        let p = spec.build(seed).unwrap();
        let norms = weyl_probe(&p.t, &p.s, &p.phi, 0.3, 8, seed, &WeylOptions::default()).unwrap();
        assert!(norms[7] < 0.2, "seed {seed}: {norms:?}");
    }
}

#[test]
fn krylov_complement_of_a_direct_sum() {
    let t1 = SymOp::from_diagonal(&[0.1, 0.4, 0.9]).unwrap();
    let m = SymOp::from_diagonal(&[0.2, 0.5, 0.7, 1.1]).unwrap();
    let t = t1.direct_sum(&m);
    let phi = DVector::from_vec(vec![0.6, 0.6, 0.52915, 0.0, 0.0, 0.0, 0.0]).normalize();
    let grid: Vec<f64> = (0..12).map(|k| -0.05 + 0.1 * k as f64 + 0.013).collect();
    let r = krylov_kernel_check(&t, &phi, 0.8, &grid, &opts()).unwrap();
    assert_eq!(r.complement_dim, 4);
    assert!(r.max_norm < 1e-10);
}

#[test]
fn hankel_plus_decaying_rank_one() {
    let n = 30;
    let s: Vec<f64> = (0..2 * n - 1).map(|k| 1.0 / (k as f64 + 1.0)).collect();
    let h = hankel_from_symbol(&HankelSymbol::Scalar(s)).unwrap();
    let u = DVector::from_fn(n, |j, _| 0.1 / ((j + 1) as f64).powi(2));
    let hp = h.add(&SymOp::from_matrix(&u * u.transpose()).unwrap()).unwrap();
    let d = commutator_defect(&hp).unwrap();
    assert!(d.top_singulars.windows(2).all(|w| w[1] <= w[0]));
    assert!(d.top_singulars[4] < 1e-3 * d.top_singulars[0], "{:?}", d.top_singulars);
    assert!(d.interior_norm < 1e-2, "{}", d.interior_norm);
}

#[test]
fn reduction_keeps_rank_one() {
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_sym(12, &mut rng);
        let p = random_perturbation(t, 1, &mut rng, "rank").unwrap();
        for dir in [Direction::Below, Direction::Above] {
            let rec = reduce_semibounded(&p.t, &p.s, dir).unwrap();
            assert_eq!(perturbation_rank(&rec.s_prime).unwrap(), 1, "seed {seed}");
        }
    }
}

#[test]
fn reduction_on_random_order_60() {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let t = random_sym(60, &mut rng);
    let p = random_perturbation(t, 2, &mut rng, "reduction").unwrap();
    let ctx = DiffContext::new(&p.t, &p.s).unwrap();
    let mut done = 0;
    while done < 50 {
        let lambda = rng.random_range(-2.5..2.5);
        if ctx.difference(lambda, &opts()).is_err() {
            continue;
        }
        let dev = verify_reduction(&p.t, &p.s, lambda, Direction::Below, &opts()).unwrap();
        assert!(dev < 1e-9, "λ={lambda}: {dev}");
        done += 1;
    }
    let c = reduce_semibounded(&p.t, &p.s, Direction::Below).unwrap().c;
    let d = ctx.difference(-c - 0.5, &opts()).unwrap();
    assert_eq!(d.max_abs(), 0.0);
}

#[test]
fn unitary_diagonalizes() {
    let t = SymOp::from_diagonal(&[-0.5, 0.25, 1.0, 2.0]).unwrap();
    let phi = DVector::from_vec(vec![0.4, 0.5, 0.6, 0.48]).normalize();
    let u = canonical_unitary(&t, &phi, default_sep_tol(&t).unwrap()).unwrap();
    let ones = u.apply(&phi);
    assert!(ones.iter().all(|x| (x - 1.0).abs() < 1e-12));
    for i in 0..4 {
        let mut e = DVector::zeros(4);
        e[i] = 1.0;
        let out = u.apply(&t.apply(&u.adjoint_apply(&e)));
        let mut want = DVector::zeros(4);
        want[i] = u.measure.atoms[i];
        assert!((out - want).amax() < 1e-12);
    }
}

#[test]
fn spectral_measure_transform_examples() {
    let t = SymOp::from_diagonal(&[-1.0, -0.2, 0.3, 0.8, 1.5]).unwrap();
    let phi = DVector::from_vec(vec![0.3, 0.5, 0.4, 0.6, 0.37]).normalize();
    let sep = default_sep_tol(&t).unwrap();
    let alpha = 0.7;
    let one = liaw_treil_transform(&t, &phi, alpha, &[1.0], sep).unwrap();
    assert!(one.formula_output.iter().all(|x| (x - 1.0).abs() < 1e-12));
    let id = liaw_treil_transform(&t, &phi, alpha, &[0.0, 1.0], sep).unwrap();
    for (x, f) in id.atoms_alpha.iter().zip(&id.formula_output) {
        assert!((f - (x - alpha)).abs() < 1e-12);
    }
    assert!(id.discrepancy < 1e-10);
}

#[test]
fn spectral_measure_transform_random_order_40() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let t = random_sym(40, &mut rng);
    let v = eig_sym(&t).unwrap().vectors;
    let c = DVector::from_fn(40, |_, _| {
        let m = rng.random_range(0.5..1.5);
        if rng.random_bool(0.5) { m } else { -m }
    });
    let phi = (&v * c).normalize();
    let coeffs: Vec<f64> = (0..7).map(|_| rng.random_range(-1.0..1.0)).collect();
    let out = liaw_treil_transform(&t, &phi, 0.7, &coeffs, default_sep_tol(&t).unwrap()).unwrap();
    assert!(out.discrepancy < 1e-8, "{}", out.discrepancy);
    assert!(out.unitarity_defect < 1e-8);
    assert!(out.interlaced);
    let s = rank_perturbation(std::slice::from_ref(&phi), &[0.7]).unwrap();
    let shifted = eig_sym(&t.add(&s).unwrap()).unwrap().values;
    for (a, b) in shifted.iter().zip(&out.atoms_alpha) {
        assert!((a - b).abs() < 1e-12);
    }
}
