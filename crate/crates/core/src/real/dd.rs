use std::ops::Neg;

use super::eft::{quick_two_sum, two_prod, two_sum};
use super::{cached_const, impl_real_ops, Real, EULER_GAMMA_DIGITS, LN2_DIGITS, PI_DIGITS};

/// Unevaluated sum `hi + lo` of two doubles with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    fn add_impl(a: Dd, b: Dd) -> Dd {
        let (s1, s2) = two_sum(a.hi, b.hi);
        let (t1, t2) = two_sum(a.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    fn mul_impl(a: Dd, b: Dd) -> Dd {
        let (p1, p2) = two_prod(a.hi, b.hi);
        let p2 = p2 + (a.hi * b.lo + a.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    fn div_impl(a: Dd, b: Dd) -> Dd {
        let q1 = a.hi / b.hi;
        if !q1.is_finite() {
            return Dd::from_f64(q1);
        }
        let r = a - b * Dd::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from_f64(q3)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl_real_ops!(Dd);

impl Real for Dd {
    const NAME: &'static str = "extended";
    const EPSILON: f64 = 4.93038065763132e-32; // 2^-104
    const DIGITS: usize = 31;

    #[inline]
    fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi
    }

    fn mul_pow2(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.floor());
            Dd { hi, lo }
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    fn pi() -> Self {
        cached_const!(Dd, PI_DIGITS)
    }

    fn ln2() -> Self {
        cached_const!(Dd, LN2_DIGITS)
    }

    fn euler_gamma() -> Self {
        cached_const!(Dd, EULER_GAMMA_DIGITS)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn third_times_three() {
        let third = Dd::one() / Dd::from_f64(3.0);
        let err = (third * Dd::from_f64(3.0) - Dd::one()).abs();
        assert!(err.to_f64() < 1e-31);
        assert!(third.lo() != 0.0);
    }

    #[test]
    fn floor_with_low_word() {
        let x = Dd::new(4.0, -1e-20);
        assert_eq!(x.floor().to_f64(), 3.0);
        let y = Dd::new(4.0, 1e-20);
        assert_eq!(y.floor().to_f64(), 4.0);
    }

    #[test]
    fn pi_reference() {
        let p = Dd::pi();
        assert_eq!(p.hi(), std::f64::consts::PI);
        assert!((p.lo() - 1.2246467991473532e-16).abs() < 1e-31);
    }
}
