//! Floating-point backends.
//!
//! Every numerical routine in the crate is generic over [`Real`], which is
//! implemented for `f64`, the double-double [`Dd`] (~31 significant digits)
//! and the quad-double [`Qd`] (~62 significant digits). Transcendental
//! functions have generic default implementations built only from field
//! arithmetic, so the extended types get them for free; `f64` overrides them
//! with the standard library versions.

mod dd;
mod eft;
mod qd;
mod sum;

use std::fmt;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Num;

pub use dd::Dd;
pub use qd::Qd;
pub use sum::CompensatedSum;

pub(crate) const PI_DIGITS: &str =
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899";
pub(crate) const LN2_DIGITS: &str =
    "0.693147180559945309417232121458176568075500134360255254120680009493393621969694715";
pub(crate) const EULER_GAMMA_DIGITS: &str =
    "0.577215664901532860606512090082402431042159335939923598805767234884867726777664670";

/// Error returned when a decimal string cannot be parsed into a [`Real`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRealError(pub String);

impl fmt::Display for ParseRealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid real literal `{}`", self.0)
    }
}

impl std::error::Error for ParseRealError {}

/// A real field with rounding, closed under the elementary functions used
/// throughout the crate.
pub trait Real:
    Copy
    + Send
    + Sync
    + fmt::Debug
    + fmt::Display
    + Default
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + 'static
{
    /// Short human-readable backend name.
    const NAME: &'static str;
    /// Unit roundoff.
    const EPSILON: f64;
    /// Significant decimal digits carried.
    const DIGITS: usize;

    fn from_f64(x: f64) -> Self;
    /// Nearest `f64` (the leading component for multi-word types).
    fn to_f64(self) -> f64;
    /// Exact multiplication by `2^k`.
    fn mul_pow2(self, k: i32) -> Self;
    fn floor(self) -> Self;

    fn pi() -> Self;
    fn ln2() -> Self;
    fn euler_gamma() -> Self;

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn round(self) -> Self {
        (self + Self::from_f64(0.5)).floor()
    }

    fn trunc(self) -> Self {
        if self < Self::zero() {
            -((-self).floor())
        } else {
            self.floor()
        }
    }

    fn recip(self) -> Self {
        Self::one() / self
    }

    fn from_i64(n: i64) -> Self {
        // Split so that values beyond 2^53 are still represented exactly.
        let hi = (n >> 32) as f64 * 4294967296.0;
        let lo = (n & 0xffff_ffff) as f64;
        Self::from_f64(hi) + Self::from_f64(lo)
    }

    fn from_u64(n: u64) -> Self {
        let hi = (n >> 32) as f64 * 4294967296.0;
        let lo = (n & 0xffff_ffff) as f64;
        Self::from_f64(hi) + Self::from_f64(lo)
    }

    fn from_bigint(n: &BigInt) -> Self {
        let (sign, digits) = n.to_u32_digits();
        let mut acc = Self::zero();
        for &d in digits.iter().rev() {
            acc = acc.mul_pow2(32) + Self::from_f64(d as f64);
        }
        if sign == Sign::Minus {
            -acc
        } else {
            acc
        }
    }

    fn from_ratio(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    fn powf(self, p: Self) -> Self {
        if p.is_zero() {
            return Self::one();
        }
        (p * self.ln()).exp()
    }

    fn sqrt(self) -> Self {
        generic_sqrt(self)
    }

    fn exp(self) -> Self {
        generic_exp(self)
    }

    fn ln(self) -> Self {
        generic_ln(self)
    }

    /// `(sin x, cos x)`.
    fn sin_cos(self) -> (Self, Self) {
        generic_sin_cos(self)
    }

    fn sinh(self) -> Self {
        let e = self.exp();
        (e - e.recip()).mul_pow2(-1)
    }

    fn cosh(self) -> Self {
        let e = self.exp();
        (e + e.recip()).mul_pow2(-1)
    }

    /// Parse a decimal literal such as `-1.25e-3`.
    fn parse_decimal(s: &str) -> Result<Self, ParseRealError> {
        parse_decimal(s)
    }

    /// Scientific notation with `digits` significant digits.
    fn to_sci_string(self, digits: usize) -> String {
        to_sci_string(self, digits)
    }
}

/// `exp(2πi t)`, with `t` reduced modulo 1 before scaling.
pub fn e_of<R: Real>(t: R) -> Complex<R> {
    let r = t - t.round();
    let (s, c) = (R::pi().mul_pow2(1) * r).sin_cos();
    Complex::new(c, s)
}

pub fn cabs<R: Real>(z: Complex<R>) -> R {
    (z.re * z.re + z.im * z.im).sqrt()
}

pub fn cscale<R: Real>(z: Complex<R>, a: R) -> Complex<R> {
    Complex::new(z.re * a, z.im * a)
}

fn newton_iterations<R: Real>() -> usize {
    match R::DIGITS {
        0..=17 => 1,
        18..=34 => 2,
        _ => 3,
    }
}

fn generic_sqrt<R: Real>(a: R) -> R {
    if a.is_zero() {
        return a;
    }
    if a < R::zero() {
        return R::from_f64(f64::NAN);
    }
    // Newton on 1/sqrt(a) avoids a division per step.
    let mut x = R::from_f64(1.0 / a.to_f64().sqrt());
    for _ in 0..newton_iterations::<R>() {
        let t = R::one() - a * x * x;
        x += (x * t).mul_pow2(-1);
    }
    let r = a * x;
    r + (a - r * r) * x.mul_pow2(-1)
}

fn generic_exp<R: Real>(x: R) -> R {
    let xf = x.to_f64();
    if xf.is_nan() {
        return x;
    }
    if xf > 709.0 {
        return R::from_f64(f64::INFINITY);
    }
    if xf < -745.0 {
        return R::zero();
    }
    let ln2 = R::ln2();
    let k = (x / ln2).round();
    let kf = k.to_f64() as i32;
    const HALVINGS: i32 = 12;
    let r = (x - k * ln2).mul_pow2(-HALVINGS);
    // expm1(r) by Taylor, then undo the halvings via (1+s)^2 - 1 = 2s + s^2.
    let mut term = r;
    let mut s = r;
    let mut n = 1.0;
    let tiny = R::EPSILON * 1e-3;
    loop {
        n += 1.0;
        term = term * r / R::from_f64(n);
        s += term;
        if term.to_f64().abs() < tiny {
            break;
        }
    }
    for _ in 0..HALVINGS {
        s = s.mul_pow2(1) + s * s;
    }
    (s + R::one()).mul_pow2(kf)
}

fn generic_ln<R: Real>(x: R) -> R {
    let xf = x.to_f64();
    if xf <= 0.0 || xf.is_nan() {
        return R::from_f64(f64::NAN);
    }
    if xf.is_infinite() {
        return x;
    }
    let mut y = R::from_f64(xf.ln());
    for _ in 0..newton_iterations::<R>() {
        y = y + x * (-y).exp() - R::one();
    }
    y
}

fn generic_sin_cos<R: Real>(x: R) -> (R, R) {
    let half_pi = R::pi().mul_pow2(-1);
    let q = (x / half_pi).round();
    let r = x - q * half_pi;
    let r2 = r * r;
    let tiny = R::EPSILON * 1e-3;

    let mut term = r;
    let mut sin = r;
    let mut k = 1.0;
    loop {
        term = -term * r2 / R::from_f64((k + 1.0) * (k + 2.0));
        sin += term;
        k += 2.0;
        if term.to_f64().abs() < tiny {
            break;
        }
    }
    let mut term = R::one();
    let mut cos = R::one();
    let mut k = 0.0;
    loop {
        term = -term * r2 / R::from_f64((k + 1.0) * (k + 2.0));
        cos += term;
        k += 2.0;
        if term.to_f64().abs() < tiny {
            break;
        }
    }
    match (q.to_f64() as i64).rem_euclid(4) {
        0 => (sin, cos),
        1 => (cos, -sin),
        2 => (-sin, -cos),
        _ => (-cos, sin),
    }
}

fn parse_decimal<R: Real>(s: &str) -> Result<R, ParseRealError> {
    let err = || ParseRealError(s.to_string());
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    if matches!(body, "inf" | "infinity") {
        let v = R::from_f64(f64::INFINITY);
        return Ok(if neg { -v } else { v });
    }
    let (mant, exp10) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    let digits: Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes())
        .map(|b| b - b'0')
        .collect();
    let mut acc = R::zero();
    for chunk in digits.chunks(15) {
        let mut v = 0u64;
        for &d in chunk {
            v = v * 10 + d as u64;
        }
        acc = acc * R::from_f64(10f64.powi(chunk.len() as i32)) + R::from_u64(v);
    }
    let scale = exp10 - frac_part.len() as i32;
    let ten = R::from_f64(10.0);
    let v = if scale >= 0 {
        acc * ten.powi(scale)
    } else {
        acc / ten.powi(-scale)
    };
    Ok(if neg { -v } else { v })
}

fn to_sci_string<R: Real>(x: R, digits: usize) -> String {
    let digits = digits.max(1);
    let xf = x.to_f64();
    if xf.is_nan() {
        return "NaN".into();
    }
    if xf.is_infinite() {
        return if xf > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x.is_zero() {
        return format!("{:.*}e0", digits - 1, 0.0);
    }
    let neg = x < R::zero();
    let a = x.abs();
    let ten = R::from_f64(10.0);
    let mut e10 = a.to_f64().log10().floor() as i32;
    let mut m = if e10 >= 0 {
        a / ten.powi(e10)
    } else {
        a * ten.powi(-e10)
    };
    if m >= ten {
        m /= ten;
        e10 += 1;
    } else if m < R::one() {
        m *= ten;
        e10 -= 1;
    }
    let mut ds: Vec<u8> = Vec::with_capacity(digits + 1);
    for _ in 0..=digits {
        let d = m.floor().to_f64().clamp(0.0, 9.0);
        ds.push(d as u8);
        m = (m - R::from_f64(d)) * ten;
    }
    // Round half up on the guard digit.
    let guard = ds.pop().unwrap_or(0);
    if guard >= 5 {
        let mut i = ds.len();
        loop {
            if i == 0 {
                ds.insert(0, 1);
                ds.pop();
                e10 += 1;
                break;
            }
            i -= 1;
            if ds[i] == 9 {
                ds[i] = 0;
            } else {
                ds[i] += 1;
                break;
            }
        }
    }
    let mut out = String::with_capacity(digits + 8);
    if neg {
        out.push('-');
    }
    out.push((b'0' + ds[0]) as char);
    if ds.len() > 1 {
        out.push('.');
        for &d in &ds[1..] {
            out.push((b'0' + d) as char);
        }
    }
    out.push('e');
    out.push_str(&e10.to_string());
    out
}

impl Real for f64 {
    const NAME: &'static str = "double";
    const EPSILON: f64 = f64::EPSILON / 2.0;
    const DIGITS: usize = 16;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn mul_pow2(self, k: i32) -> Self {
        self * 2f64.powi(k)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn ln2() -> Self {
        std::f64::consts::LN_2
    }
    fn euler_gamma() -> Self {
        0.577_215_664_901_532_9
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn trunc(self) -> Self {
        f64::trunc(self)
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, p: Self) -> Self {
        f64::powf(self, p)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn parse_decimal(s: &str) -> Result<Self, ParseRealError> {
        s.trim().parse().map_err(|_| ParseRealError(s.to_string()))
    }
    fn to_sci_string(self, digits: usize) -> String {
        format!("{:.*e}", digits.max(1) - 1, self)
    }
}

/// Numerical precision used by the generic routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    /// IEEE double.
    Double,
    /// Double-double, ~31 digits.
    Extended,
    /// Quad-double, ~62 digits.
    High,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
            Precision::High => "high",
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "double" | "f64" => Ok(Precision::Double),
            "extended" | "dd" => Ok(Precision::Extended),
            "high" | "qd" => Ok(Precision::High),
            other => Err(format!("unknown precision `{other}`")),
        }
    }
}

/// Implements the `num_traits` and operator plumbing shared by the
/// multi-word types in terms of their inherent `add`/`mul`/`div`.
macro_rules! impl_real_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            #[inline]
            fn add(self, rhs: $t) -> $t {
                <$t>::add_impl(self, rhs)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            #[inline]
            fn sub(self, rhs: $t) -> $t {
                <$t>::add_impl(self, -rhs)
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            #[inline]
            fn mul(self, rhs: $t) -> $t {
                <$t>::mul_impl(self, rhs)
            }
        }
        impl std::ops::Div for $t {
            type Output = $t;
            #[inline]
            fn div(self, rhs: $t) -> $t {
                <$t>::div_impl(self, rhs)
            }
        }
        impl std::ops::Rem for $t {
            type Output = $t;
            fn rem(self, rhs: $t) -> $t {
                self - rhs * $crate::real::Real::trunc(self / rhs)
            }
        }
        impl std::ops::AddAssign for $t {
            #[inline]
            fn add_assign(&mut self, rhs: $t) {
                *self = *self + rhs;
            }
        }
        impl std::ops::SubAssign for $t {
            #[inline]
            fn sub_assign(&mut self, rhs: $t) {
                *self = *self - rhs;
            }
        }
        impl std::ops::MulAssign for $t {
            #[inline]
            fn mul_assign(&mut self, rhs: $t) {
                *self = *self * rhs;
            }
        }
        impl std::ops::DivAssign for $t {
            #[inline]
            fn div_assign(&mut self, rhs: $t) {
                *self = *self / rhs;
            }
        }
        impl num_traits::Zero for $t {
            fn zero() -> $t {
                <$t>::default()
            }
            fn is_zero(&self) -> bool {
                $crate::real::Real::to_f64(*self) == 0.0
            }
        }
        impl num_traits::One for $t {
            fn one() -> $t {
                $crate::real::Real::from_f64(1.0)
            }
        }
        impl num_traits::Num for $t {
            type FromStrRadixErr = $crate::real::ParseRealError;
            fn from_str_radix(s: &str, radix: u32) -> Result<$t, Self::FromStrRadixErr> {
                if radix != 10 {
                    return Err($crate::real::ParseRealError(s.to_string()));
                }
                $crate::real::Real::parse_decimal(s)
            }
        }
        impl std::str::FromStr for $t {
            type Err = $crate::real::ParseRealError;
            fn from_str(s: &str) -> Result<$t, Self::Err> {
                $crate::real::Real::parse_decimal(s)
            }
        }
        impl std::fmt::Display for $t {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                let digits = f
                    .precision()
                    .map(|p| p + 1)
                    .unwrap_or(<$t as $crate::real::Real>::DIGITS);
                f.write_str(&$crate::real::Real::to_sci_string(*self, digits))
            }
        }
    };
}
pub(crate) use impl_real_ops;

/// Cache for a lazily parsed per-type constant.
macro_rules! cached_const {
    ($t:ty, $digits:expr) => {{
        static CELL: std::sync::OnceLock<$t> = std::sync::OnceLock::new();
        *CELL.get_or_init(|| {
            <$t as $crate::real::Real>::parse_decimal($digits).expect("constant literal")
        })
    }};
}
pub(crate) use cached_const;

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check_elementary<R: Real>(tol: f64) {
        let two = R::from_f64(2.0);
        let s = two.sqrt();
        assert!(((s * s - two).abs()).to_f64() < tol);
        let one = R::one();
        let e = one.exp();
        assert!(((e.ln() - one).abs()).to_f64() < tol);
        let x = R::from_f64(0.7);
        let (sn, cs) = x.sin_cos();
        assert!(((sn * sn + cs * cs - one).abs()).to_f64() < tol);
        let (s6, c6) = (R::pi() / R::from_f64(6.0)).sin_cos();
        assert!(((s6 - R::from_f64(0.5)).abs()).to_f64() < tol);
        assert!(((c6 * c6 - R::from_f64(0.75)).abs()).to_f64() < tol);
        // exp(ln 2) == 2 ties exp to the stored ln 2.
        assert!(((R::ln2().exp() - two).abs()).to_f64() < tol);
        let big = R::from_f64(-40.25);
        let rel = (big.exp() * (-big).exp() - one).abs().to_f64();
        assert!(rel < 100.0 * tol, "{rel}");
    }

    #[test]
    fn elementary_functions_f64() {
        check_elementary::<f64>(1e-15);
    }

    #[test]
    fn elementary_functions_dd() {
        check_elementary::<Dd>(1e-30);
    }

    #[test]
    fn elementary_functions_qd() {
        check_elementary::<Qd>(1e-60);
    }

    #[test]
    fn exp_matches_reference_digits() {
        // e = 2.71828182845904523536028747135266249775724709369995957496696762772407663
        let e: Qd = "2.71828182845904523536028747135266249775724709369995957496696762772407663"
            .parse()
            .unwrap();
        assert!((Qd::one().exp() - e).abs().to_f64() < 1e-62);
        let e: Dd = "2.718281828459045235360287471352662".parse().unwrap();
        assert!((Dd::one().exp() - e).abs().to_f64() < 1e-30);
    }

    #[test]
    fn ln10_reference() {
        let ln10: Qd = "2.30258509299404568401799145468436420760110148862877297603332790096757"
            .parse()
            .unwrap();
        assert!((Qd::from_f64(10.0).ln() - ln10).abs().to_f64() < 1e-61);
    }

    #[test]
    fn sci_string_rounds() {
        assert_eq!(1.5f64.to_sci_string(3), "1.50e0");
        assert_eq!(Dd::from_f64(0.00123).to_sci_string(3), "1.23e-3");
        assert_eq!(Dd::from_f64(9.9996).to_sci_string(4), "1.000e1");
        assert_eq!(Qd::from_f64(-2.5).to_sci_string(2), "-2.5e0");
        let third = Dd::one() / Dd::from_f64(3.0);
        assert_eq!(third.to_sci_string(30), format!("3.{}e-1", "3".repeat(29)));
    }

    #[test]
    fn parse_decimal_forms() {
        let x: Dd = "-1.25e-3".parse().unwrap();
        assert_eq!(x.to_f64(), -1.25e-3);
        assert!("1.2.3".parse::<Dd>().is_err());
        assert!("".parse::<Qd>().is_err());
        let big = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let v = Dd::from_bigint(&big);
        let w: Dd = "123456789012345678901234567890".parse().unwrap();
        assert!(((v - w) / w).abs().to_f64() < 1e-31);
    }

    #[test]
    fn e_of_is_periodic() {
        let a = e_of(Dd::from_f64(0.3));
        let b = e_of(Dd::from_f64(0.3) + Dd::from_f64(5.0));
        assert!(cabs(a - b).to_f64() < 1e-28);
        let q = e_of(Dd::from_f64(0.25));
        assert!(q.re.abs().to_f64() < 1e-31 && (q.im - Dd::one()).abs().to_f64() < 1e-31);
    }
}
