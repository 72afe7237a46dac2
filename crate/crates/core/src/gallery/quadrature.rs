//! Gauss–Legendre rules, composite rules and the interpolatory
//! cumulative-integration matrix used for Volterra-type inner integrals.

use crate::error::{LabError, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let m = q.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(q, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(q, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_q(x), P_q'(x))` by the three-term recurrence.
fn legendre_and_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if q == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=q {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// All Legendre values `P_0(x) .. P_{q}(x)`.
fn legendre_all(q: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(q + 1);
    out.push(1.0);
    if q >= 1 {
        out.push(x);
    }
    for k in 2..=q {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
        out.push(next);
    }
    out
}

/// Reference cumulative-integration matrix: entry `(k, m)` is
/// `∫_{-1}^{x_k} ℓ_m(t) dt` for the Lagrange basis `ℓ_m` on the GL nodes.
pub fn cumulative_matrix(nodes: &[f64], weights: &[f64]) -> Vec<Vec<f64>> {
    let q = nodes.len();
    // ℓ_m(t) = w_m Σ_p (2p+1)/2 P_p(x_m) P_p(t); ∫_{-1}^x P_p = (P_{p+1} − P_{p−1})/(2p+1)
    let at_nodes: Vec<Vec<f64>> = nodes.iter().map(|&x| legendre_all(q, x)).collect();
    let mut out = vec![vec![0.0; q]; q];
    for (k, &xk) in nodes.iter().enumerate() {
        let pk = &at_nodes[k];
        let integrals: Vec<f64> = (0..q)
            .map(|p| {
                if p == 0 {
                    xk + 1.0
                } else {
                    (pk[p + 1] - pk[p - 1]) / (2.0 * p as f64 + 1.0)
                }
            })
            .collect();
        for m in 0..q {
            let pm = &at_nodes[m];
            let mut s = 0.0;
            for p in 0..q {
                s += 0.5 * (2.0 * p as f64 + 1.0) * pm[p] * integrals[p];
            }
            out[k][m] = weights[m] * s;
        }
    }
    out
}

/// A quadrature rule on an interval of the half line.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    /// Composite Gauss–Legendre rule with `q` nodes on each panel between
    /// consecutive `breaks`.
    pub fn composite(breaks: &[f64], q: usize) -> Result<Self> {
        if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(LabError::BadParams(
                "panel breakpoints must be strictly increasing".into(),
            ));
        }
        let (x, w) = gauss_legendre(q);
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * q);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * xi);
                weights.push(half * wi);
            }
        }
        Ok(Quadrature { nodes, weights })
    }

    /// `panels` equal panels on `[0, length]`.
    pub fn uniform(length: f64, panels: usize, q: usize) -> Result<Self> {
        if !(length > 0.0) || panels == 0 {
            return Err(LabError::BadParams(format!(
                "uniform rule needs positive length and panels (got {length}, {panels})"
            )));
        }
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| length * i as f64 / panels as f64)
            .collect();
        Self::composite(&breaks, q)
    }

    /// Single Gauss–Legendre rule of `q` nodes on `[0, length]`.
    pub fn single(length: f64, q: usize) -> Result<Self> {
        Self::composite(&[0.0, length], q)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Integrate `f` over `[a, b]` with uniform composite GL panels, doubling the
/// panel count until the relative change drops below `rel_tol`.
pub fn adaptive_integrate(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    fail_tol: f64,
) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let (x, w) = gauss_legendre(16);
    let rule = |panels: usize| -> f64 {
        let h = (b - a) / panels as f64;
        let mut s = 0.0;
        for p in 0..panels {
            let mid = a + h * (p as f64 + 0.5);
            for (xi, wi) in x.iter().zip(&w) {
                s += 0.5 * h * wi * f(mid + 0.5 * h * xi);
            }
        }
        s
    };
    let mut panels = 4;
    let mut prev = rule(panels);
    let mut change = f64::INFINITY;
    for _ in 0..12 {
        panels *= 2;
        let next = rule(panels);
        change = (next - prev).abs() / next.abs().max(1e-300);
        if change < rel_tol || (next - prev).abs() < 1e-300 {
            return Ok(next);
        }
        prev = next;
    }
    if change < fail_tol {
        Ok(prev)
    } else {
        Err(LabError::QuadratureFailure {
            target: fail_tol,
            achieved: change,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        for q in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(q);
            for deg in 0..(2 * q) {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "q={q} deg={deg}");
            }
        }
    }

    #[test]
    fn composite_weights_sum_to_length() {
        let rule = Quadrature::uniform(40.0, 37, 12).unwrap();
        assert!((rule.total_weight() - 40.0).abs() < 1e-12 * 40.0);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes.iter().all(|&x| x > 0.0 && x < 40.0));
    }

    #[test]
    fn cumulative_matrix_reproduces_antiderivatives() {
        let q = 12;
        let (x, w) = gauss_legendre(q);
        let c = cumulative_matrix(&x, &w);
        // ∫_{-1}^{x_k} t^5 dt for a degree-5 polynomial is exact
        for k in 0..q {
            let approx: f64 = (0..q).map(|m| c[k][m] * x[m].powi(5)).sum();
            let exact = (x[k].powi(6) - 1.0) / 6.0;
            assert!((approx - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn adaptive_integrates_exponential() {
        let v = adaptive_integrate(&|x: f64| (-x).exp(), 0.0, 40.0, 1e-12, 1e-8).unwrap();
        assert!((v - (1.0 - (-40.0f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn bad_breaks_rejected() {
        assert!(Quadrature::composite(&[0.0, 1.0, 1.0], 4).is_err());
        assert!(Quadrature::uniform(-1.0, 3, 4).is_err());
    }
}
