use std::ops::Neg;

use super::eft::{quick_two_sum, three_sum, three_sum2, two_prod, two_sum};
use super::{cached_const, impl_real_ops, Real, EULER_GAMMA_DIGITS, LN2_DIGITS, PI_DIGITS};

/// Unevaluated sum of four non-overlapping doubles, leading term first.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Qd([f64; 4]);

fn renorm4(c0: f64, c1: f64, c2: f64, c3: f64) -> [f64; 4] {
    if !c0.is_finite() {
        return [c0, 0.0, 0.0, 0.0];
    }
    let (s, c3) = quick_two_sum(c2, c3);
    let (s, c2) = quick_two_sum(c1, s);
    let (c0, c1) = quick_two_sum(c0, s);

    let (mut s0, mut s1, mut s2, mut s3) = (c0, c1, 0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
        }
    }
    [s0, s1, s2, s3]
}

fn renorm5(c0: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> [f64; 4] {
    if !c0.is_finite() {
        return [c0, 0.0, 0.0, 0.0];
    }
    let (s, c4) = quick_two_sum(c3, c4);
    let (s, c3) = quick_two_sum(c2, s);
    let (s, c2) = quick_two_sum(c1, s);
    let (c0, c1) = quick_two_sum(c0, s);

    let (mut s0, mut s1, mut s2, mut s3) = (c0, c1, 0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
            if s3 != 0.0 {
                s3 += c4;
            } else {
                (s2, s3) = quick_two_sum(s2, c4);
            }
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
            if s1 != 0.0 {
                (s1, s2) = quick_two_sum(s1, c4);
            } else {
                (s0, s1) = quick_two_sum(s0, c4);
            }
        }
    }
    [s0, s1, s2, s3]
}

impl Qd {
    pub fn components(self) -> [f64; 4] {
        self.0
    }

    fn add_impl(a: Qd, b: Qd) -> Qd {
        let [a0, a1, a2, a3] = a.0;
        let [b0, b1, b2, b3] = b.0;
        let (s0, t0) = two_sum(a0, b0);
        let (s1, t1) = two_sum(a1, b1);
        let (s2, t2) = two_sum(a2, b2);
        let (s3, t3) = two_sum(a3, b3);

        let (s1, t0) = two_sum(s1, t0);
        let (s2, t0, t1) = three_sum(s2, t0, t1);
        let (s3, t0) = three_sum2(s3, t0, t2);
        let t0 = t0 + t1 + t3;
        Qd(renorm5(s0, s1, s2, s3, t0))
    }

    fn mul_impl(a: Qd, b: Qd) -> Qd {
        let [a0, a1, a2, a3] = a.0;
        let [b0, b1, b2, b3] = b.0;
        let (p0, q0) = two_prod(a0, b0);
        let (p1, q1) = two_prod(a0, b1);
        let (p2, q2) = two_prod(a1, b0);
        let (p3, q3) = two_prod(a0, b2);
        let (p4, q4) = two_prod(a1, b1);
        let (p5, q5) = two_prod(a2, b0);

        let (p1, p2, q0) = three_sum(p1, p2, q0);

        // Six-three sum of (p2, q1, q2, p3, p4, p5).
        let (p2, q1, q2) = three_sum(p2, q1, q2);
        let (p3, p4, p5) = three_sum(p3, p4, p5);
        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        let s2 = s2 + (t0 + t1);

        let s1 = s1 + (a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0 + q0 + q3 + q4 + q5);
        Qd(renorm5(p0, p1, s0, s1, s2))
    }

    fn mul_f64(a: Qd, b: f64) -> Qd {
        let [a0, a1, a2, a3] = a.0;
        let (p0, q0) = two_prod(a0, b);
        let (p1, q1) = two_prod(a1, b);
        let (p2, q2) = two_prod(a2, b);
        let p3 = a3 * b;

        let (s1, q0) = two_sum(q0, p1);
        let (s2, q1, q2b) = three_sum(q0, q1, p2);
        let (s3, q1) = three_sum2(q1, q2, p3);
        let s4 = q1 + q2b;
        Qd(renorm5(p0, s1, s2, s3, s4))
    }

    fn div_impl(a: Qd, b: Qd) -> Qd {
        let b0 = b.0[0];
        let q0 = a.0[0] / b0;
        if !q0.is_finite() {
            return Qd::from_f64(q0);
        }
        let r = a - Qd::mul_f64(b, q0);
        let q1 = r.0[0] / b0;
        let r = r - Qd::mul_f64(b, q1);
        let q2 = r.0[0] / b0;
        let r = r - Qd::mul_f64(b, q2);
        let q3 = r.0[0] / b0;
        let r = r - Qd::mul_f64(b, q3);
        let q4 = r.0[0] / b0;
        Qd(renorm5(q0, q1, q2, q3, q4))
    }
}

impl Neg for Qd {
    type Output = Qd;
    fn neg(self) -> Qd {
        let [a, b, c, d] = self.0;
        Qd([-a, -b, -c, -d])
    }
}

impl PartialOrd for Qd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        for i in 0..4 {
            match self.0[i].partial_cmp(&other.0[i]) {
                Some(std::cmp::Ordering::Equal) => continue,
                o => return o,
            }
        }
        Some(std::cmp::Ordering::Equal)
    }
}

impl_real_ops!(Qd);

impl Real for Qd {
    const NAME: &'static str = "high";
    const EPSILON: f64 = 1.215_432_671_457_254e-63; // 2^-209
    const DIGITS: usize = 62;

    fn from_f64(x: f64) -> Self {
        Qd([x, 0.0, 0.0, 0.0])
    }

    fn to_f64(self) -> f64 {
        self.0[0]
    }

    fn mul_pow2(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        let [a, b, c, d] = self.0;
        Qd([a * f, b * f, c * f, d * f])
    }

    fn floor(self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        let x0 = a0.floor();
        let (mut x1, mut x2, mut x3) = (0.0, 0.0, 0.0);
        if x0 == a0 {
            x1 = a1.floor();
            if x1 == a1 {
                x2 = a2.floor();
                if x2 == a2 {
                    x3 = a3.floor();
                }
            }
        }
        Qd(renorm4(x0, x1, x2, x3))
    }

    fn pi() -> Self {
        cached_const!(Qd, PI_DIGITS)
    }

    fn ln2() -> Self {
        cached_const!(Qd, LN2_DIGITS)
    }

    fn euler_gamma() -> Self {
        cached_const!(Qd, EULER_GAMMA_DIGITS)
    }
}

impl From<f64> for Qd {
    fn from(x: f64) -> Self {
        Qd::from_f64(x)
    }
}

impl From<super::Dd> for Qd {
    fn from(x: super::Dd) -> Self {
        Qd(renorm4(x.hi(), x.lo(), 0.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn seventh_round_trip() {
        let seventh = Qd::one() / Qd::from_f64(7.0);
        let err = (seventh * Qd::from_f64(7.0) - Qd::one()).abs();
        assert!(err.to_f64() < 1e-62, "{err:?}");
    }

    #[test]
    fn machin_pi_matches_literal() {
        // pi = 16 atan(1/5) - 4 atan(1/239), arctan by Taylor series.
        fn atan_inv(n: f64) -> Qd {
            let x = Qd::one() / Qd::from_f64(n);
            let x2 = x * x;
            let mut term = x;
            let mut sum = x;
            let mut k = 1.0;
            while term.abs().to_f64() > 1e-70 {
                term = -term * x2;
                k += 2.0;
                sum += term / Qd::from_f64(k);
            }
            sum
        }
        let pi = Qd::from_f64(16.0) * atan_inv(5.0) - Qd::from_f64(4.0) * atan_inv(239.0);
        assert!((pi - Qd::pi()).abs().to_f64() < 1e-62);
    }

    #[test]
    fn cancellation_keeps_tail() {
        let a = Qd::one() + Qd::from_f64(1e-40);
        let b = a - Qd::one();
        assert!((b.to_f64() - 1e-40).abs() < 1e-55);
    }

    #[test]
    fn floor_and_ordering() {
        let x = Qd::from_f64(5.0) - Qd::from_f64(1e-50);
        assert_eq!(x.floor().to_f64(), 4.0);
        assert!(x < Qd::from_f64(5.0));
        assert!(Qd::from_f64(-1.0) < x);
    }
}
