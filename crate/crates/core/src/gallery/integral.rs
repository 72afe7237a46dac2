//! Discretizations of the integral operators on `L²(0, ∞)`: the Kreĭn pair
//! with kernels `a₀`, `a₁` and the Carleman operator `1/(x+y)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::laguerre::{krein_a0, krein_a1, laguerre_functions};
use super::quadrature::{cumulative_matrix, gauss_legendre, Quadrature};
use super::OperatorPair;
use crate::error::{LabError, Result};
use crate::spectral::{numerical_rank, SymOp};

/// Default domain cutoff for integrands with `e^{-x}` decay.
pub const DEFAULT_CUTOFF: f64 = 40.0;
const PANEL_NODES: usize = 16;
const REFINE_TOL: f64 = 1e-9;
const FAIL_TOL: f64 = 1e-8;
const MAX_REFINE: usize = 5;

/// How an integral operator is turned into a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Scheme {
    /// Galerkin matrix in the Laguerre functions `√2 L_j(2x) e^{-x}`.
    #[default]
    LaguerreGalerkin,
    /// Symmetric Nyström matrix `√w_i k(x_i, x_j) √w_j` on a single
    /// Gauss–Legendre rule of `grid` nodes on `[0, cutoff]`.
    Nystrom { cutoff: f64, grid: usize },
}

/// Finite section of the Kreĭn pair: `T = A₀`, `T + S = A₁`, with `S` the
/// rank-one operator `⟨·, φ⟩φ`, `φ(x) = e^{-x}`.
pub fn krein_pair(basis_size: usize, scheme: Scheme) -> Result<OperatorPair> {
    if basis_size < 2 {
        return Err(LabError::BadParams("basis_size must be at least 2".into()));
    }
    let (a0, a1, phi, note) = match scheme {
        Scheme::LaguerreGalerkin => {
            let g = krein_galerkin(basis_size)?;
            (g.a0, g.a1, g.phi, format!("laguerre galerkin, cutoff {:.1}", g.cutoff))
        }
        Scheme::Nystrom { cutoff, grid } => {
            let rule = nystrom_rule(basis_size, cutoff, grid)?;
            let a0 = nystrom_matrix(&rule, krein_a0)?;
            let a1 = nystrom_matrix(&rule, krein_a1)?;
            let phi = DVector::from_iterator(
                rule.len(),
                rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w.sqrt() * (-x).exp()),
            );
            (a0, a1, phi, format!("nystrom, cutoff {cutoff}, grid {grid}"))
        }
    };
    let s = a1.sub(&a0)?;
    let rank_s = numerical_rank(&s, 1e-8 * s.max_abs().max(f64::MIN_POSITIVE))?;
    Ok(OperatorPair {
        t: a0,
        s,
        rank_s,
        phi: vec![phi],
        meta: format!("krein pair ({note})"),
    })
}

/// Carleman operator `(Tg)(x) = ∫ g(y)/(x+y) dy`.
///
/// In the Laguerre basis the Laplace transform of `φ_i` is
/// `√2 (s−1)^i/(s+1)^{i+1}`, and `1/(x+y) = ∫ e^{-s(x+y)} ds` turns each
/// entry into `∫ F_i F_j ds`; the substitution `u = (s−1)/(s+1)` maps this to
/// a polynomial integral on `[-1, 1]`, which Gauss–Legendre integrates
/// exactly.
pub fn carleman(basis_size: usize, scheme: Scheme) -> Result<SymOp> {
    if basis_size < 2 {
        return Err(LabError::BadParams("basis_size must be at least 2".into()));
    }
    match scheme {
        Scheme::LaguerreGalerkin => {
            let (u, w) = gauss_legendre(basis_size + 1);
            let n = basis_size;
            let mut phi = DMatrix::zeros(u.len(), n);
            for (m, &um) in u.iter().enumerate() {
                let mut p = w[m].sqrt();
                for i in 0..n {
                    phi[(m, i)] = p;
                    p *= um;
                }
            }
            SymOp::from_matrix(phi.transpose() * phi)
        }
        Scheme::Nystrom { cutoff, grid } => {
            let rule = nystrom_rule(basis_size, cutoff, grid)?;
            nystrom_matrix(&rule, |x, y| 1.0 / (x + y))
        }
    }
}

fn nystrom_rule(basis_size: usize, cutoff: f64, grid: usize) -> Result<Quadrature> {
    if !(cutoff > 0.0) {
        return Err(LabError::BadParams(format!("cutoff must be positive, got {cutoff}")));
    }
    if grid < basis_size {
        return Err(LabError::BadParams(format!(
            "grid {grid} smaller than basis_size {basis_size}"
        )));
    }
    Quadrature::single(cutoff, grid)
}

fn nystrom_matrix(rule: &Quadrature, kernel: impl Fn(f64, f64) -> f64) -> Result<SymOp> {
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let x = &rule.nodes;
    SymOp::from_fn(rule.len(), |i, j| sw[i] * kernel(x[i], x[j]) * sw[j])
}

struct KreinGalerkin {
    a0: SymOp,
    a1: SymOp,
    phi: DVector<f64>,
    cutoff: f64,
}

/// Refines the panel mesh until successive Galerkin matrices agree to
/// `REFINE_TOL` relative to their size.
fn krein_galerkin(n: usize) -> Result<KreinGalerkin> {
    let cutoff = galerkin_cutoff(n);
    let mut prev = krein_galerkin_at(n, cutoff, 1)?;
    let mut change = f64::INFINITY;
    for level in 1..=MAX_REFINE {
        let next = krein_galerkin_at(n, cutoff, 1 << level)?;
        let scale = next.a1.max_abs();
        change = next.a0.max_abs_diff(&prev.a0)?.max(next.a1.max_abs_diff(&prev.a1)?) / scale;
        prev = next;
        if change < REFINE_TOL {
            return Ok(prev);
        }
    }
    if change < FAIL_TOL {
        Ok(prev)
    } else {
        Err(LabError::QuadratureFailure {
            target: FAIL_TOL,
            achieved: change,
        })
    }
}

/// Past the turning point `2n+1` the last basis function decays; stop once it
/// is negligible, but never before the default cutoff.
fn galerkin_cutoff(n: usize) -> f64 {
    let mut x = (2 * n + 1) as f64;
    loop {
        let last = laguerre_functions(n, x)[n - 1].abs();
        if last < 1e-18 && x >= DEFAULT_CUTOFF {
            return x;
        }
        x += 1.0;
    }
}

/// Panel breakpoints graded to the local oscillation length of `φ_{n-1}`,
/// each panel shrunk by `refine`.
fn galerkin_breaks(n: usize, cutoff: f64, refine: usize) -> Vec<f64> {
    let two_n = (2 * n + 1) as f64;
    let mut breaks = vec![0.0];
    let mut x: f64 = 0.0;
    while x < cutoff {
        let wavenumber = (two_n / x.max(1.0 / two_n)).sqrt() + 1.0;
        let h = (2.0 * std::f64::consts::PI / wavenumber).min(1.0) / refine as f64;
        x = (x + h).min(cutoff);
        breaks.push(x);
    }
    breaks
}

fn krein_galerkin_at(n: usize, cutoff: f64, refine: usize) -> Result<KreinGalerkin> {
    let breaks = galerkin_breaks(n, cutoff, refine);
    let rule = Quadrature::composite(&breaks, PANEL_NODES)?;
    let (ref_nodes, ref_weights) = gauss_legendre(PANEL_NODES);
    let cum = cumulative_matrix(&ref_nodes, &ref_weights);
    let q = PANEL_NODES;
    let panels = breaks.len() - 1;
    let total = rule.len();

    let mut basis = DMatrix::zeros(total, n);
    for (k, &x) in rule.nodes.iter().enumerate() {
        for (j, v) in laguerre_functions(n, x).into_iter().enumerate() {
            basis[(k, j)] = v;
        }
    }

    // conv = ∫ e^{-|x-y|} φ_j(y) dy at every node, split as left + right
    let mut conv = DMatrix::zeros(total, n);
    let mut carry = vec![0.0; n];
    for p in 0..panels {
        let (a, b) = (breaks[p], breaks[p + 1]);
        let half = 0.5 * (b - a);
        let base = p * q;
        for k in 0..q {
            let xk = rule.nodes[base + k];
            let decay = (-(xk - a)).exp();
            for j in 0..n {
                let mut s = decay * carry[j];
                for m in 0..q {
                    let ym = rule.nodes[base + m];
                    s += half * cum[k][m] * (-(xk - ym)).exp() * basis[(base + m, j)];
                }
                conv[(base + k, j)] += s;
            }
        }
        let decay = (-(b - a)).exp();
        for j in 0..n {
            let mut s = decay * carry[j];
            for m in 0..q {
                let ym = rule.nodes[base + m];
                s += rule.weights[base + m] * (-(b - ym)).exp() * basis[(base + m, j)];
            }
            carry[j] = s;
        }
    }
    carry.iter_mut().for_each(|c| *c = 0.0);
    for p in (0..panels).rev() {
        let (a, b) = (breaks[p], breaks[p + 1]);
        let half = 0.5 * (b - a);
        let base = p * q;
        for k in 0..q {
            let xk = rule.nodes[base + k];
            let decay = (-(b - xk)).exp();
            for j in 0..n {
                let mut s = decay * carry[j];
                for m in 0..q {
                    let ym = rule.nodes[base + m];
                    let w = rule.weights[base + m] - half * cum[k][m];
                    s += w * (-(ym - xk)).exp() * basis[(base + m, j)];
                }
                conv[(base + k, j)] += s;
            }
        }
        let decay = (-(b - a)).exp();
        for j in 0..n {
            let mut s = decay * carry[j];
            for m in 0..q {
                let ym = rule.nodes[base + m];
                s += rule.weights[base + m] * (-(ym - a)).exp() * basis[(base + m, j)];
            }
            carry[j] = s;
        }
    }

    let mut weighted = basis.clone();
    for (k, w) in rule.weights.iter().enumerate() {
        weighted.row_mut(k).scale_mut(*w);
    }
    let gram = weighted.transpose() * conv;
    let exp_vals = DVector::from_iterator(total, rule.nodes.iter().map(|x| (-x).exp()));
    let phi = weighted.transpose() * exp_vals;
    let outer = &phi * phi.transpose();
    let a0 = SymOp::from_matrix((&gram - &outer) * 0.5)?;
    let a1 = SymOp::from_matrix((&gram + &outer) * 0.5)?;
    Ok(KreinGalerkin {
        a0,
        a1,
        phi,
        cutoff,
    })
}
