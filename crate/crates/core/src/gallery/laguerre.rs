//! Laguerre functions `φ_j(x) = √2 L_j(2x) e^{-x}`, an orthonormal basis of
//! `L²(0, ∞)`, and the closed-form check of `A₀ψ_k` for `ψ_k(x) = x^k e^{-x}`.

use super::quadrature::adaptive_integrate;
use crate::error::{LabError, Result};

const RESCALE: f64 = 1e150;

/// Values `φ_0(x) .. φ_{count-1}(x)`.
///
/// The three-term recurrence runs on unscaled `L_j(2x)` with a separate
/// logarithmic accumulator, so `x` well past `700` neither overflows the
/// polynomial part nor underflows `e^{-x}` prematurely.
pub fn laguerre_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let y = 2.0 * x;
    let mut log_scale = -x;
    let norm = std::f64::consts::SQRT_2;
    let emit = |p: f64, log_scale: f64| norm * p * log_scale.exp();
    let mut prev = 1.0;
    out.push(emit(prev, log_scale));
    if count == 1 {
        return out;
    }
    let mut cur = 1.0 - y;
    out.push(emit(cur, log_scale));
    for j in 1..(count - 1) {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 - y) * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
        out.push(emit(cur, log_scale));
    }
    out
}

/// `½e^{-x}{ x^{k+1}/(k+1) + 2^{-(k+1)} Σ_{ℓ<k} (2x)^{k-ℓ} k!/(k-ℓ)! }`.
pub fn a0_psi_closed_form(k: usize, x: f64) -> f64 {
    let mut sum = 0.0;
    // k!/(k-ℓ)! = k (k-1) ... (k-ℓ+1)
    let mut falling = 1.0;
    for l in 0..k {
        if l > 0 {
            falling *= (k - l + 1) as f64;
        }
        sum += (2.0 * x).powi((k - l) as i32) * falling;
    }
    let kp1 = (k + 1) as f64;
    0.5 * (-x).exp() * (x.powi(k as i32 + 1) / kp1 + sum / 2f64.powi(k as i32 + 1))
}

/// Kernel `a₀(x, y) = ½(e^{-|x-y|} − e^{-(x+y)})`, written so the
/// cancellation near `y = 0` stays accurate.
pub fn krein_a0(x: f64, y: f64) -> f64 {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    // sinh(lo) e^{-hi} = ½ e^{-(hi-lo)} (1 − e^{-2 lo})
    0.5 * (-(hi - lo)).exp() * -(-2.0 * lo).exp_m1()
}

/// `a₁(x, y) = ½(e^{-|x-y|} + e^{-(x+y)})`.
pub fn krein_a1(x: f64, y: f64) -> f64 {
    0.5 * ((-(x - y).abs()).exp() + (-(x + y)).exp())
}

/// Largest relative deviation, over `x_grid`, between `(A₀ψ_k)(x)` computed
/// by quadrature on `(0, L)` and the closed form.
pub fn laguerre_reference_apply(k: usize, x_grid: &[f64], cutoff: f64) -> Result<f64> {
    if k > 8 {
        return Err(LabError::BadParams(format!("k = {k} exceeds 8")));
    }
    if let Some(&x) = x_grid.iter().find(|&&x| !(x > 0.0 && x < cutoff)) {
        return Err(LabError::BadParams(format!(
            "grid point {x} outside (0, {cutoff})"
        )));
    }
    let psi = |y: f64| y.powi(k as i32) * (-y).exp();
    let mut worst: f64 = 0.0;
    for &x in x_grid {
        let integrand = |y: f64| krein_a0(x, y) * psi(y);
        // split at the kink y = x
        let left = adaptive_integrate(&integrand, 0.0, x, 1e-12, 1e-8)?;
        let right = adaptive_integrate(&integrand, x, cutoff, 1e-12, 1e-8)?;
        let exact = a0_psi_closed_form(k, x);
        worst = worst.max(((left + right) - exact).abs() / (1.0 + exact.abs()));
    }
    Ok(worst)
}
