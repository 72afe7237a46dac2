//! Finite truncations of the operators under study, rank-`N` perturbations
//! and Krylov machinery.

pub mod integral;
pub mod krylov;
pub mod laguerre;
pub mod lattice;
pub mod quadrature;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::{numerical_rank, SymOp};

pub use integral::{carleman, krein_pair, Scheme, DEFAULT_CUTOFF};
pub use krylov::{krylov_basis, krylov_block, KrylovBasis};
pub use laguerre::{laguerre_functions, laguerre_reference_apply};
pub use lattice::{lattice_operator, LatticeFamily};
pub use quadrature::Quadrature;

/// Unperturbed operator `T`, perturbation `S` and the directions `φ_k`
/// spanning `Ran S` when they are known.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub t: SymOp,
    pub s: SymOp,
    pub rank_s: usize,
    pub phi: Vec<DVector<f64>>,
    pub meta: String,
}

impl OperatorPair {
    pub fn order(&self) -> usize {
        self.t.order()
    }

    /// `T + S`.
    pub fn perturbed(&self) -> Result<SymOp> {
        self.t.add(&self.s)
    }

    /// Pairs `T` with `S = Σ α_k φ_k φ_kᵀ`.
    pub fn with_rank_perturbation(
        t: SymOp,
        vectors: &[DVector<f64>],
        alphas: &[f64],
        meta: impl Into<String>,
    ) -> Result<Self> {
        let (s, phi) = rank_perturbation_parts(vectors, alphas)?;
        if s.order() != t.order() {
            return Err(LabError::DimensionMismatch {
                expected: t.order(),
                found: s.order(),
            });
        }
        Ok(OperatorPair {
            t,
            s,
            rank_s: phi.len(),
            phi,
            meta: meta.into(),
        })
    }
}

/// `T = diag(-1, -1/2, ..., -1/n)`, `S = diag(-1 (N times), 0, ...)`.
pub fn diag_example_one(n: usize, rank: usize) -> Result<OperatorPair> {
    if rank == 0 || rank >= n {
        return Err(LabError::BadParams(format!(
            "need 1 <= N < n, got N = {rank}, n = {n}"
        )));
    }
    let t: Vec<f64> = (1..=n).map(|k| -1.0 / k as f64).collect();
    let s: Vec<f64> = (0..n).map(|k| if k < rank { -1.0 } else { 0.0 }).collect();
    let phi = (0..rank)
        .map(|k| {
            let mut e = DVector::zeros(n);
            e[k] = 1.0;
            e
        })
        .collect();
    Ok(OperatorPair {
        t: SymOp::from_diagonal(&t)?,
        s: SymOp::from_diagonal(&s)?,
        rank_s: rank,
        phi,
        meta: format!("diagonal example one, n = {n}, N = {rank}"),
    })
}

/// The interleaved diagonal pair built on `a₀ = -1`, `a₁ = -1/2`.
///
/// Entries alternate between a cluster above `a₀` with offsets `(1/2)/k` and
/// one above `a₁` with offsets `(1/6)/k`; `S` subtracts twice each offset, so
/// `T + S` mirrors the clusters below the `a_i`.
pub fn diag_example_two(n: usize) -> Result<OperatorPair> {
    if n < 7 {
        return Err(LabError::BadParams(format!("need n >= 7, got {n}")));
    }
    let (a0, a1) = (-1.0, -0.5);
    let (d0, d1) = (0.5, 1.0 / 6.0);
    let mut t = vec![a0, a0 + d0 / 4.0, a1, a1 + d1 / 4.0];
    let mut s = vec![0.0, -2.0 * d0 / 4.0, 0.0, -2.0 * d1 / 4.0];
    let mut k = 5.0;
    while t.len() < n {
        t.push(a0 + d0 / k);
        s.push(-2.0 * d0 / k);
        t.push(a1 + d1 / k);
        s.push(-2.0 * d1 / k);
        k += 1.0;
    }
    t.truncate(n);
    s.truncate(n);
    let s_op = SymOp::from_diagonal(&s)?;
    let rank_s = s.iter().filter(|x| **x != 0.0).count();
    Ok(OperatorPair {
        t: SymOp::from_diagonal(&t)?,
        s: s_op,
        rank_s,
        phi: Vec::new(),
        meta: format!("diagonal example two, n = {n}"),
    })
}

/// `S = Σ α_k φ_k φ_kᵀ` after orthonormalizing the `φ_k`.
pub fn rank_perturbation(vectors: &[DVector<f64>], alphas: &[f64]) -> Result<SymOp> {
    Ok(rank_perturbation_parts(vectors, alphas)?.0)
}

fn rank_perturbation_parts(
    vectors: &[DVector<f64>],
    alphas: &[f64],
) -> Result<(SymOp, Vec<DVector<f64>>)> {
    if vectors.len() != alphas.len() {
        return Err(LabError::DimensionMismatch {
            expected: vectors.len(),
            found: alphas.len(),
        });
    }
    if vectors.is_empty() {
        return Err(LabError::BadParams("no perturbation directions".into()));
    }
    if alphas.iter().any(|a| *a == 0.0 || !a.is_finite()) {
        return Err(LabError::BadParams("coupling constants must be nonzero".into()));
    }
    let n = vectors[0].len();
    let mut ortho: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != n {
            return Err(LabError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        match krylov::orthonormalize(&ortho, v.clone(), 1e-10) {
            Some(u) => ortho.push(u),
            None => {
                return Err(LabError::BadParams(
                    "perturbation directions are numerically dependent".into(),
                ))
            }
        }
    }
    let mut s = DMatrix::zeros(n, n);
    for (u, a) in ortho.iter().zip(alphas) {
        s += u * u.transpose() * *a;
    }
    Ok((SymOp::from_matrix(s)?, ortho))
}

/// Symmetric matrix with independent `N(0, 1/n)` entries above the diagonal.
pub fn random_sym(n: usize, rng: &mut impl Rng) -> SymOp {
    let scale = 1.0 / (n.max(1) as f64).sqrt();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let x: f64 = rng.sample::<f64, _>(StandardNormal) * scale;
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    SymOp::from_matrix(m).expect("finite gaussian entries")
}

/// Standard Gaussian vector.
pub fn random_vector(n: usize, rng: &mut impl Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Random rank-`rank` perturbation with couplings of modulus in `[0.5, 1.5]`
/// and random sign.
pub fn random_perturbation(
    t: SymOp,
    rank: usize,
    rng: &mut impl Rng,
    meta: impl Into<String>,
) -> Result<OperatorPair> {
    let n = t.order();
    if rank == 0 || rank > n {
        return Err(LabError::BadParams(format!("rank {rank} out of range for order {n}")));
    }
    let vectors: Vec<DVector<f64>> = (0..rank).map(|_| random_vector(n, rng)).collect();
    let alphas: Vec<f64> = (0..rank)
        .map(|_| {
            let m: f64 = rng.random_range(0.5..1.5);
            if rng.random_bool(0.5) {
                m
            } else {
                -m
            }
        })
        .collect();
    OperatorPair::with_rank_perturbation(t, &vectors, &alphas, meta)
}

/// Perturbation attached to families that only define `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PerturbationSpec {
    #[default]
    Zero,
    /// Seeded random directions with couplings of modulus in `[0.5, 1.5]`.
    RandomRank { rank: usize },
    /// `Σ α_k e_{i_k} e_{i_k}ᵀ` on coordinate vectors.
    Basis { indices: Vec<usize>, alphas: Vec<f64> },
}

/// Serializable descriptor of a gallery member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum OperatorSpec {
    DiagExample1 {
        n: usize,
        rank: usize,
    },
    DiagExample2 {
        n: usize,
    },
    KreinPair {
        basis_size: usize,
        #[serde(default)]
        scheme: Scheme,
    },
    Carleman {
        basis_size: usize,
        #[serde(default)]
        scheme: Scheme,
        #[serde(default)]
        perturbation: PerturbationSpec,
    },
    Jacobi {
        a: Vec<f64>,
        b: Vec<f64>,
        window: usize,
        #[serde(default)]
        perturbation: PerturbationSpec,
    },
    AlmostMathieu {
        kappa: f64,
        beta: f64,
        theta: f64,
        window: usize,
        #[serde(default)]
        perturbation: PerturbationSpec,
    },
    DiscreteSchrodinger {
        potential: Vec<f64>,
        window: usize,
        #[serde(default)]
        perturbation: PerturbationSpec,
    },
    RandomSym {
        n: usize,
        #[serde(default)]
        perturbation: PerturbationSpec,
    },
}

/// One line per family for `lab gallery list`.
pub const FAMILIES: &[(&str, &str)] = &[
    ("diag_example1", "T = diag(-1, ..., -1/n), S = -1 on the first N coordinates"),
    ("diag_example2", "interleaved clusters at -1 and -1/2, compact diagonal S"),
    ("krein_pair", "integral operators A0, A1 on L2(0, inf), S = <., e^-x> e^-x"),
    ("carleman", "kernel 1/(x+y), spectrum [0, pi]"),
    ("jacobi", "periodic Jacobi matrix on a window [-m, m]"),
    ("almost_mathieu", "x_{n+1} + x_{n-1} + 2k cos(2pi(theta + n beta)) x_n"),
    ("discrete_schrodinger", "x_{n+1} + x_{n-1} + V_n x_n, periodic V"),
    ("random_sym", "Gaussian symmetric matrix with N(0, 1/n) entries"),
];

impl OperatorSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            OperatorSpec::DiagExample1 { .. } => "diag_example1",
            OperatorSpec::DiagExample2 { .. } => "diag_example2",
            OperatorSpec::KreinPair { .. } => "krein_pair",
            OperatorSpec::Carleman { .. } => "carleman",
            OperatorSpec::Jacobi { .. } => "jacobi",
            OperatorSpec::AlmostMathieu { .. } => "almost_mathieu",
            OperatorSpec::DiscreteSchrodinger { .. } => "discrete_schrodinger",
            OperatorSpec::RandomSym { .. } => "random_sym",
        }
    }

    /// The same spec with its size parameter replaced: `n` for diagonal and
    /// random families, `basis_size` for integral operators (and `grid` is
    /// raised to match under Nyström), the window half-width for lattices.
    pub fn with_order(&self, order: usize) -> OperatorSpec {
        let mut out = self.clone();
        match &mut out {
            OperatorSpec::DiagExample1 { n, .. }
            | OperatorSpec::DiagExample2 { n }
            | OperatorSpec::RandomSym { n, .. } => *n = order,
            OperatorSpec::KreinPair { basis_size, scheme }
            | OperatorSpec::Carleman {
                basis_size, scheme, ..
            } => {
                *basis_size = order;
                if let Scheme::Nystrom { grid, .. } = scheme {
                    *grid = (*grid).max(order);
                }
            }
            OperatorSpec::Jacobi { window, .. }
            | OperatorSpec::AlmostMathieu { window, .. }
            | OperatorSpec::DiscreteSchrodinger { window, .. } => *window = order,
        }
        out
    }

    /// Builds the pair; `seed` drives every random choice.
    pub fn build(&self, seed: u64) -> Result<OperatorPair> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, perturbation, name) = match self {
            OperatorSpec::DiagExample1 { n, rank } => return diag_example_one(*n, *rank),
            OperatorSpec::DiagExample2 { n } => return diag_example_two(*n),
            OperatorSpec::KreinPair { basis_size, scheme } => {
                return krein_pair(*basis_size, *scheme)
            }
            OperatorSpec::Carleman {
                basis_size,
                scheme,
                perturbation,
            } => (carleman(*basis_size, *scheme)?, perturbation, "carleman"),
            OperatorSpec::Jacobi {
                a,
                b,
                window,
                perturbation,
            } => (
                lattice_operator(
                    &LatticeFamily::Jacobi {
                        a: a.clone(),
                        b: b.clone(),
                    },
                    *window,
                )?,
                perturbation,
                "jacobi",
            ),
            OperatorSpec::AlmostMathieu {
                kappa,
                beta,
                theta,
                window,
                perturbation,
            } => (
                lattice_operator(
                    &LatticeFamily::AlmostMathieu {
                        kappa: *kappa,
                        beta: *beta,
                        theta: *theta,
                    },
                    *window,
                )?,
                perturbation,
                "almost mathieu",
            ),
            OperatorSpec::DiscreteSchrodinger {
                potential,
                window,
                perturbation,
            } => (
                lattice_operator(
                    &LatticeFamily::Schrodinger {
                        potential: potential.clone(),
                    },
                    *window,
                )?,
                perturbation,
                "discrete schrodinger",
            ),
            OperatorSpec::RandomSym { n, perturbation } => {
                (random_sym(*n, &mut rng), perturbation, "random symmetric")
            }
        };
        let n = t.order();
        match perturbation {
            PerturbationSpec::Zero => Ok(OperatorPair {
                s: SymOp::zeros(n),
                t,
                rank_s: 0,
                phi: Vec::new(),
                meta: format!("{name}, unperturbed"),
            }),
            PerturbationSpec::RandomRank { rank } => {
                random_perturbation(t, *rank, &mut rng, format!("{name}, random rank {rank}"))
            }
            PerturbationSpec::Basis { indices, alphas } => {
                if let Some(&i) = indices.iter().find(|&&i| i >= n) {
                    return Err(LabError::BadParams(format!(
                        "basis index {i} out of range for order {n}"
                    )));
                }
                let vectors: Vec<DVector<f64>> = indices
                    .iter()
                    .map(|&i| {
                        let mut e = DVector::zeros(n);
                        e[i] = 1.0;
                        e
                    })
                    .collect();
                OperatorPair::with_rank_perturbation(
                    t,
                    &vectors,
                    alphas,
                    format!("{name}, coordinate perturbation"),
                )
            }
        }
    }
}

/// Numerical rank of `S` at `1e-8·‖S‖_max`, the threshold used for
/// `OperatorPair::rank_s` on computed perturbations.
pub fn perturbation_rank(s: &SymOp) -> Result<usize> {
    let scale = s.max_abs();
    if scale == 0.0 {
        return Ok(0);
    }
    numerical_rank(s, 1e-8 * scale)
}
