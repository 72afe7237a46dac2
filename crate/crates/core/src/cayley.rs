//! Resolvent reduction of a semibounded problem to a bounded one.
//!
//! Below: with `c` such that `T + c ≥ 0` and `T + S + c ≥ 0`,
//! `T′ = (T + (1+c))⁻¹`, `S′ = −(T + S + (1+c))⁻¹ S (T + (1+c))⁻¹`, and
//! `μ = 1/(λ + 1 + c)`. The map is decreasing, so the open half-line below
//! `λ` becomes the closed half-line below `μ` after swapping the roles of the
//! two operators. Above is the mirror image with `T − (1+c)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::lab::{DiffContext, DiffOptions};
use crate::spectral::{eig_sym, EigSystem, SymOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Semibounded from below.
    #[default]
    Below,
    /// Semibounded from above.
    Above,
}

#[derive(Debug, Clone)]
pub struct ReductionRecord {
    pub c: f64,
    pub direction: Direction,
    pub t_prime: SymOp,
    pub s_prime: SymOp,
}

impl ReductionRecord {
    pub fn map_lambda(&self, lambda: f64) -> Result<f64> {
        map_lambda(lambda, self.c, self.direction)
    }
}

/// Inverse of `A + shift·I` through the eigendecomposition of `A`.
fn shifted_inverse(eig: &EigSystem, shift: f64) -> Result<DMatrix<f64>> {
    let min_abs = eig
        .values
        .iter()
        .map(|x| (x + shift).abs())
        .fold(f64::INFINITY, f64::min);
    if !(min_abs > 1e-12) {
        return Err(LabError::SingularShift { min_abs });
    }
    Ok(eig.apply_function(|x| 1.0 / (x + shift)).into_matrix())
}

pub fn reduce_semibounded(t: &SymOp, s: &SymOp, direction: Direction) -> Result<ReductionRecord> {
    if t.order() != s.order() {
        return Err(LabError::DimensionMismatch {
            expected: t.order(),
            found: s.order(),
        });
    }
    let ts = t.add(s)?;
    let et = eig_sym(t)?;
    let ets = eig_sym(&ts)?;
    let lo = |e: &EigSystem| e.values.first().copied().unwrap_or(0.0);
    let hi = |e: &EigSystem| e.values.last().copied().unwrap_or(0.0);
    let (c, shift) = match direction {
        Direction::Below => {
            let c = 0f64.max(-lo(&et)).max(-lo(&ets)) + 1.0;
            (c, 1.0 + c)
        }
        Direction::Above => {
            let c = 0f64.max(hi(&et)).max(hi(&ets)) + 1.0;
            (c, -(1.0 + c))
        }
    };
    let rt = shifted_inverse(&et, shift)?;
    let rts = shifted_inverse(&ets, shift)?;
    let s_prime = -(&rts * s.matrix() * &rt);
    Ok(ReductionRecord {
        c,
        direction,
        t_prime: SymOp::from_matrix(rt)?,
        s_prime: SymOp::from_matrix(s_prime)?,
    })
}

/// `μ = 1/(λ + 1 + c)` for `λ ≥ −c` (below), `μ = 1/(λ − (1 + c))` for
/// `λ ≤ c` (above).
pub fn map_lambda(lambda: f64, c: f64, direction: Direction) -> Result<f64> {
    match direction {
        Direction::Below if lambda < -c => Err(LabError::OutOfRange { lambda, bound: -c }),
        Direction::Below => Ok(1.0 / (lambda + 1.0 + c)),
        Direction::Above if lambda > c => Err(LabError::OutOfRange { lambda, bound: c }),
        Direction::Above => Ok(1.0 / (lambda - (1.0 + c))),
    }
}

/// Largest entrywise deviation between `D(λ)` computed directly and through
/// the reduced pair. Outside the admissible range the reduced side is the
/// zero operator.
pub fn verify_reduction(
    t: &SymOp,
    s: &SymOp,
    lambda: f64,
    direction: Direction,
    opts: &DiffOptions,
) -> Result<f64> {
    let direct = DiffContext::new(t, s)?.difference(lambda, opts)?;
    let rec = reduce_semibounded(t, s, direction)?;
    let mu = match rec.map_lambda(lambda) {
        Ok(mu) => mu,
        Err(LabError::OutOfRange { .. }) => return Ok(direct.max_abs()),
        Err(e) => return Err(e),
    };
    // E(T′) − E(T′ + S′): the perturbed operator now sits on the right
    let reduced_ctx = DiffContext::new(&rec.t_prime.add(&rec.s_prime)?, &rec.s_prime.scale(-1.0))?;
    let reduced_opts = DiffOptions {
        kind: opts.kind.flipped(),
        ..*opts
    };
    let reduced = reduced_ctx.difference(mu, &reduced_opts)?;
    direct.max_abs_diff(&reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::numerical_rank;

    #[test]
    fn unperturbed_diagonal() {
        let t = SymOp::from_diagonal(&[0.0, 1.0]).unwrap();
        let rec = reduce_semibounded(&t, &SymOp::zeros(2), Direction::Below).unwrap();
        assert_eq!(rec.c, 1.0);
        assert_eq!(rec.s_prime.max_abs(), 0.0);
        let c = rec.c;
        assert!((rec.t_prime.get(0, 0) - 1.0 / (1.0 + c)).abs() < 1e-15);
        assert!((rec.t_prime.get(1, 1) - 1.0 / (2.0 + c)).abs() < 1e-15);
    }

    #[test]
    fn commuting_diagonal_entries() {
        let tv = [-2.0, 0.5, 1.0, 3.0];
        let sv = [1.0, -1.5, 0.0, 2.0];
        let t = SymOp::from_diagonal(&tv).unwrap();
        let s = SymOp::from_diagonal(&sv).unwrap();
        let rec = reduce_semibounded(&t, &s, Direction::Below).unwrap();
        let c = rec.c;
        for i in 0..4 {
            let want = -sv[i] / ((tv[i] + sv[i] + 1.0 + c) * (tv[i] + 1.0 + c));
            assert!((rec.s_prime.get(i, i) - want).abs() < 1e-14);
        }
        assert!(numerical_rank(&rec.s_prime, 1e-12).unwrap() == 3);
    }

    #[test]
    fn lambda_map() {
        let c = 2.5;
        assert_eq!(map_lambda(-c, c, Direction::Below).unwrap(), 1.0);
        assert!(map_lambda(1e12, c, Direction::Below).unwrap() < 1e-11);
        assert!(map_lambda(0.0, c, Direction::Below).unwrap() > map_lambda(1.0, c, Direction::Below).unwrap());
        assert!(matches!(
            map_lambda(-3.0, c, Direction::Below),
            Err(LabError::OutOfRange { .. })
        ));
        assert!(map_lambda(3.0, c, Direction::Above).is_err());
        assert_eq!(map_lambda(c, c, Direction::Above).unwrap(), -1.0);
    }

    #[test]
    fn diagonal_reduction_is_exact() {
        let t = SymOp::from_diagonal(&[-1.0, -0.25, 0.3, 0.9]).unwrap();
        let s = SymOp::from_diagonal(&[0.0, 0.6, -0.5, 0.0]).unwrap();
        for lambda in [-0.6, 0.0, 0.1, 0.5, 2.0, -10.0] {
            for dir in [Direction::Below, Direction::Above] {
                let dev = verify_reduction(&t, &s, lambda, dir, &DiffOptions::default()).unwrap();
                assert!(dev < 1e-12, "λ={lambda} {dir:?}: {dev}");
            }
        }
    }

    #[test]
    fn eigenvalues_map_order_reversing() {
        let t = SymOp::from_diagonal(&[-3.0, 0.0, 1.0, 4.0]).unwrap();
        let rec = reduce_semibounded(&t, &SymOp::zeros(4), Direction::Below).unwrap();
        let et = eig_sym(&t).unwrap();
        let ep = eig_sym(&rec.t_prime).unwrap();
        for (i, x) in et.values.iter().enumerate() {
            let mapped = 1.0 / (x + 1.0 + rec.c);
            assert!((ep.values[3 - i] - mapped).abs() < 1e-10);
        }
    }
}
