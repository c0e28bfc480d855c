use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Dd, Real};

const SERIES_CUTOFF: f64 = 1.2;
const MAX_CF_TERMS: usize = 50_000;

/// Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
pub fn exp_int_e1<R: Real>(x: R) -> Result<R> {
    check(x)?;
    if R::DIGITS < Dd::DIGITS {
        // The continued fraction loses a few ulps to accumulated rounding.
        return exp_int_e1(Dd::from_f64(x.to_f64())).map(|v| R::from_f64(v.to_f64()));
    }
    if x.to_f64() < SERIES_CUTOFF {
        Ok(series(x))
    } else {
        Ok(continued_fraction(x)? * (-x).exp())
    }
}

/// `e^x E1(x)`, which stays O(1/x) where `E1` itself underflows.
pub fn exp_int_e1_scaled<R: Real>(x: R) -> Result<R> {
    check(x)?;
    if R::DIGITS < Dd::DIGITS {
        return exp_int_e1_scaled(Dd::from_f64(x.to_f64())).map(|v| R::from_f64(v.to_f64()));
    }
    if x.to_f64() < SERIES_CUTOFF {
        Ok(series(x) * x.exp())
    } else {
        continued_fraction(x)
    }
}

fn check<R: Real>(x: R) -> Result<()> {
    if x > R::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("E1 requires x > 0, got {x}")))
    }
}

// E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k·k!)
fn series<R: Real>(x: R) -> R {
    let mut acc = CompensatedSum::new();
    acc.add(-R::euler_gamma());
    acc.add(-x.ln());
    let mut pow = R::one();
    for k in 1..2000 {
        pow = pow * (-x) / R::from_i64(k);
        let term = pow / R::from_i64(k);
        acc.add(-term);
        if term.abs().to_f64() < R::EPSILON * 1e-2 {
            break;
        }
    }
    acc.value()
}

// Modified Lentz evaluation of e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))).
fn continued_fraction<R: Real>(x: R) -> Result<R> {
    let tiny = R::from_f64(1e-300);
    let mut b = x + R::one();
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..MAX_CF_TERMS {
        let a = -R::from_i64((i * i) as i64);
        b += R::from_f64(2.0);
        d = a * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        d = d.recip();
        c = b + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let del = c * d;
        h *= del;
        if (del - R::one()).abs().to_f64() < R::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::Numerical(format!(
        "E1 continued fraction did not converge at x = {x}"
    )))
}
