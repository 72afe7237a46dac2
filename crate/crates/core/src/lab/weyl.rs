//! Orthonormal probe sequences for `0 ∈ σ_ess(D(λ))`.
//!
//! Probe `x_n` is orthogonal to the earlier probes and to `T^j φ_k` for
//! `j ≤ (n−1)·depth_stride`. Inside that admissible subspace it is a seeded
//! random combination of the next `window` Krylov directions past the
//! constraint depth: those are the admissible directions that still see the
//! perturbation, so the decay of `‖D(λ) x_n‖` is not an artifact of drawing
//! vectors far from `Ran S`.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DiffContext, DiffOptions};
use crate::error::{LabError, Result};
use crate::gallery::krylov::orthonormalize;
use crate::gallery::random_vector;
use crate::spectral::SymOp;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylOptions {
    /// Krylov depth added to the constraints per probe.
    pub depth_stride: usize,
    /// Number of Krylov levels past the constraint depth the probe is drawn
    /// from.
    pub window: usize,
    pub diff: DiffOptions,
}

impl Default for WeylOptions {
    fn default() -> Self {
        WeylOptions {
            depth_stride: 1,
            window: 4,
            diff: DiffOptions::default(),
        }
    }
}

/// `‖D(λ) x_n‖` for `n = 1..=probe_count`.
pub fn weyl_probe(
    t: &SymOp,
    s: &SymOp,
    phis: &[DVector<f64>],
    lambda: f64,
    probe_count: usize,
    seed: u64,
    opts: &WeylOptions,
) -> Result<Vec<f64>> {
    let n = t.order();
    if opts.depth_stride == 0 || opts.window == 0 {
        return Err(LabError::BadParams("depth_stride and window must be positive".into()));
    }
    let ctx = DiffContext::new(t, s)?;
    let d = ctx.difference(lambda, &opts.diff)?;
    let max_level = probe_count.saturating_sub(1) * opts.depth_stride + opts.window;
    let levels = krylov_levels(t, phis, max_level);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut probes: Vec<DVector<f64>> = Vec::with_capacity(probe_count);
    let mut norms = Vec::with_capacity(probe_count);
    for k in 0..probe_count {
        let depth = k * opts.depth_stride;
        let mut constraints: Vec<DVector<f64>> =
            levels.iter().take(depth + 1).flatten().cloned().collect();
        for x in &probes {
            if let Some(u) = orthonormalize(&constraints, x.clone(), 1e-10) {
                constraints.push(u);
            }
        }
        if constraints.len() >= n {
            return Err(LabError::ProbeExhausted { produced: k });
        }
        let frontier: Vec<&DVector<f64>> = levels
            .iter()
            .skip(depth + 1)
            .take(opts.window)
            .flatten()
            .collect();
        let mut probe = None;
        for attempt in 0..16 {
            let draw = if frontier.is_empty() || attempt >= 8 {
                random_vector(n, &mut rng)
            } else {
                let c = random_vector(frontier.len(), &mut rng);
                frontier
                    .iter()
                    .zip(c.iter())
                    .fold(DVector::zeros(n), |acc, (f, ci)| acc + *f * *ci)
            };
            if let Some(x) = orthonormalize(&constraints, draw, 1e-8) {
                probe = Some(x);
                break;
            }
        }
        let x = probe.ok_or(LabError::ProbeExhausted { produced: k })?;
        norms.push(d.apply(&x).norm());
        probes.push(x);
    }
    Ok(norms)
}

/// Orthonormal Krylov directions grouped by level: level `j` completes
/// `span{T^i φ_k : i ≤ j}`.
fn krylov_levels(t: &SymOp, phis: &[DVector<f64>], max_level: usize) -> Vec<Vec<DVector<f64>>> {
    let mut all: Vec<DVector<f64>> = Vec::new();
    let mut levels = Vec::new();
    let mut frontier: Vec<DVector<f64>> = Vec::new();
    for p in phis {
        if let Some(u) = orthonormalize(&all, p.clone(), 1e-10) {
            all.push(u.clone());
            frontier.push(u);
        }
    }
    if frontier.is_empty() {
        return levels;
    }
    levels.push(frontier.clone());
    while levels.len() <= max_level && all.len() < t.order() {
        let mut next = Vec::new();
        for q in &frontier {
            if let Some(u) = orthonormalize(&all, t.apply(q), 1e-10) {
                all.push(u.clone());
                next.push(u);
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next.clone());
        frontier = next;
    }
    levels
}
