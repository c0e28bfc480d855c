//! Double-exponential quadrature on `[0, ∞)`.
//!
//! The exp-sinh map `x = exp(π/2 · sinh t)` clusters nodes double
//! exponentially at 0, which absorbs integrable algebraic or logarithmic
//! endpoint singularities, and spreads them out at infinity for integrands
//! with exponential decay.

use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Real};

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<R> {
    pub value: R,
    /// Difference between the last two step-halving levels.
    pub error: f64,
    pub levels: usize,
    pub evaluations: usize,
}

const MAX_LEVELS: usize = 12;
const MIN_LEVELS: usize = 3;

/// `∫_0^∞ f(x) dx` to relative tolerance `tol`.
pub fn exp_sinh<R: Real, F: FnMut(R) -> R>(mut f: F, tol: f64) -> Result<QuadResult<R>> {
    let half_pi = R::pi().mul_pow2(-1);
    let mut evaluations = 0usize;

    let mut node = |t: R, f: &mut F| -> Option<R> {
        let sh = t.sinh();
        let x = (half_pi * sh).exp();
        if x.is_zero() || !x.is_finite() {
            return None;
        }
        let w = half_pi * t.cosh() * x;
        evaluations += 1;
        let v = w * f(x);
        if v.is_finite() {
            Some(v)
        } else {
            None
        }
    };

    // Adds g(j h) for j = start, start ± stride, ... in each direction until
    // two consecutive terms are negligible against the running sum.
    let mut sweep = |h: R, start: i64, stride: i64, acc: &mut CompensatedSum<R>, f: &mut F| {
        for dir in [1i64, -1] {
            let mut j = if dir == 1 { start } else { -start };
            if dir == -1 && j == 0 {
                j = -stride;
            }
            let mut quiet = 0;
            loop {
                let t = h * R::from_i64(j);
                if t.abs().to_f64() > 8.0 {
                    break;
                }
                match node(t, f) {
                    Some(v) => {
                        acc.add(v);
                        let scale = acc.value().abs().to_f64();
                        if v.abs().to_f64() <= R::EPSILON * 1e-3 * scale {
                            quiet += 1;
                            if quiet >= 2 {
                                break;
                            }
                        } else {
                            quiet = 0;
                        }
                    }
                    None => break,
                }
                j += dir * stride;
            }
        }
    };

    let mut h = R::from_f64(0.5);
    let mut raw = CompensatedSum::new();
    sweep(h, 0, 1, &mut raw, &mut f);
    let mut estimate = h * raw.value();
    for level in 1..=MAX_LEVELS {
        h = h.mul_pow2(-1);
        let mut odd = CompensatedSum::new();
        sweep(h, 1, 2, &mut odd, &mut f);
        let next = estimate.mul_pow2(-1) + h * odd.value();
        let diff = (next - estimate).abs().to_f64();
        estimate = next;
        if level >= MIN_LEVELS && diff <= tol * estimate.abs().to_f64() {
            return Ok(QuadResult {
                value: estimate,
                error: diff,
                levels: level,
                evaluations,
            });
        }
        if level == MAX_LEVELS {
            return Err(Error::Numerical(format!(
                "exp-sinh quadrature did not reach tolerance {tol:.1e} (last change {diff:.1e})"
            )));
        }
    }
    unreachable!()
}

/// Default quadrature tolerance for the precision of `R`.
pub fn default_tol<R: Real>() -> f64 {
    (R::EPSILON * 64.0).max(1e-62)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{Dd, Qd};

    #[test]
    fn gamma_integrals() {
        // ∫ x^{s-1} e^{-x} dx = Γ(s); s = 1/2 has an endpoint singularity.
        let r = exp_sinh(|x: Dd| (-x).exp() / x.sqrt(), 1e-30).unwrap();
        let sqrt_pi = Dd::pi().sqrt();
        assert!(((r.value - sqrt_pi) / sqrt_pi).abs().to_f64() < 1e-29);

        let r = exp_sinh(|x: f64| x.powi(4) * (-x).exp(), 1e-15).unwrap();
        assert!((r.value - 24.0).abs() < 1e-12);
    }

    #[test]
    fn log_singularity_high_precision() {
        // ∫ log x e^{-x} dx = -γ.
        let r = exp_sinh(|x: Qd| x.ln() * (-x).exp(), 1e-60).unwrap();
        assert!((r.value + Qd::euler_gamma()).abs().to_f64() < 1e-58);
    }
}
