use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::real::Real;

const STIRLING_TERMS: usize = 32;

/// `B_0, B_1, ..., B_{2·STIRLING_TERMS}` by the Akiyama–Tanigawa algorithm
/// (with the `B_1 = +1/2` convention, irrelevant here since only even
/// indices are used).
fn bernoulli() -> &'static [BigRational] {
    static CELL: OnceLock<Vec<BigRational>> = OnceLock::new();
    CELL.get_or_init(|| {
        let n = 2 * STIRLING_TERMS;
        let mut out = Vec::with_capacity(n + 1);
        let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigInt::from(j);
            }
            out.push(a[0].clone());
        }
        out
    })
}

/// `ln Γ(s)` for real `s > 0`, by upward shift and the Stirling series.
pub fn ln_gamma<R: Real>(s: R) -> Result<R> {
    if !(s > R::zero()) {
        return Err(Error::Domain("ln_gamma requires s > 0".into()));
    }
    let z0 = R::from_f64(10.0 + R::DIGITS as f64 / 2.0);
    let mut z = s;
    let mut shift = R::one();
    while z < z0 {
        shift *= z;
        z += R::one();
    }
    let half = R::from_f64(0.5);
    let two_pi = R::pi().mul_pow2(1);
    let mut acc = (z - half) * z.ln() - z + half * two_pi.ln();
    let b = bernoulli();
    let zinv = z.recip();
    let zinv2 = zinv * zinv;
    let mut zpow = zinv;
    for k in 1..=STIRLING_TERMS {
        let b2k = R::from_ratio(&b[2 * k]);
        let term = b2k * zpow / R::from_f64((2 * k * (2 * k - 1)) as f64);
        acc += term;
        if term.abs().to_f64() < R::EPSILON * 1e-2 * acc.abs().to_f64() {
            break;
        }
        zpow *= zinv2;
    }
    Ok(acc - shift.ln())
}

pub fn gamma<R: Real>(s: R) -> Result<R> {
    Ok(ln_gamma(s)?.exp())
}
