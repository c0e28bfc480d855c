//! Truncated q-expansions `Σ_{n<=N} a_n q^n`, `q = e(z)`.
//!
//! Exact expansions hold arbitrary-precision rationals; floating ones hold
//! double-double values. Coefficients beyond the truncation order are
//! unknown, and every operation truncates to the smallest order among its
//! inputs.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::bound::{Estimate, PowerBound};
use crate::error::{Error, Result};
use crate::real::{e_of, CompensatedSum, Dd, Real};

/// A point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint<R> {
    x: R,
    y: R,
}

impl<R: Real> HalfPlanePoint<R> {
    pub fn new(x: R, y: R) -> Result<Self> {
        if !(y > R::zero()) {
            return Err(Error::Domain(format!(
                "point must lie in the upper half-plane, got y = {}",
                y.to_f64()
            )));
        }
        Ok(HalfPlanePoint { x, y })
    }

    pub fn from_f64(x: f64, y: f64) -> Result<Self> {
        Self::new(R::from_f64(x), R::from_f64(y))
    }

    pub fn i() -> Self {
        HalfPlanePoint {
            x: R::zero(),
            y: R::one(),
        }
    }

    pub fn x(&self) -> R {
        self.x
    }

    pub fn y(&self) -> R {
        self.y
    }

    pub fn to_complex(&self) -> Complex<R> {
        Complex::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex<R>) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// Image under `z ↦ -1/z`.
    pub fn inversion(&self) -> Self {
        let n = self.x * self.x + self.y * self.y;
        HalfPlanePoint {
            x: -self.x / n,
            y: self.y / n,
        }
    }

    /// Image under `z ↦ a z` for real `a > 0`.
    pub fn scaled(&self, a: R) -> Self {
        HalfPlanePoint {
            x: self.x * a,
            y: self.y * a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    Exact,
    Floating,
}

impl CoefficientKind {
    pub fn name(self) -> &'static str {
        match self {
            CoefficientKind::Exact => "exact",
            CoefficientKind::Floating => "floating",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Exact(Vec<BigRational>),
    Floating(Vec<Dd>),
}

impl Coefficients {
    fn len(&self) -> usize {
        match self {
            Coefficients::Exact(v) => v.len(),
            Coefficients::Floating(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    coeffs: Coefficients,
    weight: Option<i32>,
}

impl QExpansion {
    pub fn exact(coeffs: Vec<BigRational>, weight: Option<i32>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "q-expansion needs at least the constant term".into(),
            ));
        }
        Ok(QExpansion {
            coeffs: Coefficients::Exact(coeffs),
            weight,
        })
    }

    pub fn from_integers(coeffs: Vec<BigInt>, weight: Option<i32>) -> Result<Self> {
        Self::exact(
            coeffs.into_iter().map(BigRational::from_integer).collect(),
            weight,
        )
    }

    pub fn floating(coeffs: Vec<Dd>, weight: Option<i32>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "q-expansion needs at least the constant term".into(),
            ));
        }
        Ok(QExpansion {
            coeffs: Coefficients::Floating(coeffs),
            weight,
        })
    }

    pub fn zero(order: usize) -> Self {
        QExpansion {
            coeffs: Coefficients::Exact(vec![BigRational::zero(); order + 1]),
            weight: None,
        }
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut v = vec![BigRational::zero(); order + 1];
        v[0] = c;
        QExpansion {
            coeffs: Coefficients::Exact(v),
            weight: Some(0),
        }
    }

    /// Index of the last known coefficient.
    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn weight(&self) -> Option<i32> {
        self.weight
    }

    pub fn with_weight(mut self, weight: Option<i32>) -> Self {
        self.weight = weight;
        self
    }

    pub fn kind(&self) -> CoefficientKind {
        match self.coeffs {
            Coefficients::Exact(_) => CoefficientKind::Exact,
            Coefficients::Floating(_) => CoefficientKind::Floating,
        }
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    /// Exact coefficient `a_n`, or `None` past the truncation order or for
    /// floating expansions.
    pub fn exact_coeff(&self, n: usize) -> Option<&BigRational> {
        match &self.coeffs {
            Coefficients::Exact(v) => v.get(n),
            Coefficients::Floating(_) => None,
        }
    }

    pub fn coeff<R: Real>(&self, n: usize) -> Option<R> {
        match &self.coeffs {
            Coefficients::Exact(v) => v.get(n).map(R::from_ratio),
            Coefficients::Floating(v) => v.get(n).map(|&d| dd_to_real(d)),
        }
    }

    pub fn to_reals<R: Real>(&self) -> Vec<R> {
        match &self.coeffs {
            Coefficients::Exact(v) => v.iter().map(R::from_ratio).collect(),
            Coefficients::Floating(v) => v.iter().map(|&d| dd_to_real(d)).collect(),
        }
    }

    pub fn is_cuspidal(&self) -> bool {
        match &self.coeffs {
            Coefficients::Exact(v) => v[0].is_zero(),
            Coefficients::Floating(v) => v[0].is_zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coefficients::Exact(v) => v.iter().all(Zero::is_zero),
            Coefficients::Floating(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn truncate(&self, order: usize) -> QExpansion {
        let keep = order.min(self.truncation_order()) + 1;
        let coeffs = match &self.coeffs {
            Coefficients::Exact(v) => Coefficients::Exact(v[..keep].to_vec()),
            Coefficients::Floating(v) => Coefficients::Floating(v[..keep].to_vec()),
        };
        QExpansion {
            coeffs,
            weight: self.weight,
        }
    }

    fn check_kinds(&self, other: &QExpansion) -> Result<()> {
        if self.kind() != other.kind() {
            return Err(Error::KindMismatch {
                left: self.kind().name(),
                right: other.kind().name(),
            });
        }
        Ok(())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &QExpansion) -> Result<QExpansion> {
        self.check_kinds(other)?;
        let order = self.truncation_order().min(other.truncation_order());
        let weight = match (self.weight, other.weight) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coefficients::Exact(a), Coefficients::Exact(b)) => {
                let (na, da) = common_denominator(&a[..=order]);
                let (nb, db) = common_denominator(&b[..=order]);
                let prod = cauchy_int(&na, &nb, order);
                let den = da * db;
                Coefficients::Exact(
                    prod.into_iter()
                        .map(|c| BigRational::new(c, den.clone()))
                        .collect(),
                )
            }
            (Coefficients::Floating(a), Coefficients::Floating(b)) => {
                let mut out = Vec::with_capacity(order + 1);
                for n in 0..=order {
                    let s: CompensatedSum<Dd> = (0..=n).map(|i| a[i] * b[n - i]).collect();
                    out.push(s.value());
                }
                Coefficients::Floating(out)
            }
            _ => unreachable!("kinds checked above"),
        };
        Ok(QExpansion { coeffs, weight })
    }

    /// Termwise sum; weight tag kept only when both agree.
    pub fn add(&self, other: &QExpansion) -> Result<QExpansion> {
        self.check_kinds(other)?;
        let order = self.truncation_order().min(other.truncation_order());
        let weight = if self.weight == other.weight {
            self.weight
        } else {
            None
        };
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coefficients::Exact(a), Coefficients::Exact(b)) => {
                Coefficients::Exact((0..=order).map(|n| &a[n] + &b[n]).collect())
            }
            (Coefficients::Floating(a), Coefficients::Floating(b)) => {
                Coefficients::Floating((0..=order).map(|n| a[n] + b[n]).collect())
            }
            _ => unreachable!("kinds checked above"),
        };
        Ok(QExpansion { coeffs, weight })
    }

    pub fn scale(&self, c: &BigRational) -> QExpansion {
        let coeffs = match &self.coeffs {
            Coefficients::Exact(a) => Coefficients::Exact(a.iter().map(|x| x * c).collect()),
            Coefficients::Floating(a) => {
                let cd = Dd::from_ratio(c);
                Coefficients::Floating(a.iter().map(|&x| x * cd).collect())
            }
        };
        QExpansion {
            coeffs,
            weight: self.weight,
        }
    }

    /// `F = Σ (a_n / n) q^n`, the antiderivative with `q dF/dq = f`.
    pub fn antiderivative(&self) -> Result<QExpansion> {
        if !self.is_cuspidal() {
            return Err(Error::Domain(
                "antiderivative requires a vanishing constant term".into(),
            ));
        }
        let coeffs = match &self.coeffs {
            Coefficients::Exact(a) => Coefficients::Exact(
                a.iter()
                    .enumerate()
                    .map(|(n, x)| {
                        if n == 0 {
                            BigRational::zero()
                        } else {
                            x / BigInt::from(n)
                        }
                    })
                    .collect(),
            ),
            Coefficients::Floating(a) => Coefficients::Floating(
                a.iter()
                    .enumerate()
                    .map(|(n, &x)| {
                        if n == 0 {
                            Dd::zero()
                        } else {
                            x / Dd::from_u64(n as u64)
                        }
                    })
                    .collect(),
            ),
        };
        Ok(QExpansion {
            coeffs,
            weight: None,
        })
    }

    /// `(n, |a_n|)` as doubles.
    pub fn magnitudes(&self) -> Vec<(usize, f64)> {
        match &self.coeffs {
            Coefficients::Exact(a) => a
                .iter()
                .enumerate()
                .map(|(n, x)| (n, f64::from_ratio(x).abs()))
                .collect(),
            Coefficients::Floating(a) => a
                .iter()
                .enumerate()
                .map(|(n, x)| (n, x.to_f64().abs()))
                .collect(),
        }
    }

    /// Envelope `|a_n| <= c n^p` used for tail bounds.
    ///
    /// With a weight tag `k`, cusp forms use `p = k/2 + 1` and other forms
    /// `p = k - 1` (Eisenstein growth); untagged expansions get `p` from a
    /// log-log fit. `c` is calibrated over every known coefficient with a 1.5
    /// safety factor.
    pub fn coefficient_bound(&self) -> PowerBound {
        let mags = self.magnitudes();
        match self.weight {
            Some(k) => {
                let p = if self.is_cuspidal() {
                    k as f64 / 2.0 + 1.0
                } else {
                    (k as f64 - 1.0).max(0.0)
                };
                PowerBound::calibrate(p, mags, 1.5)
            }
            None => PowerBound::fit(&mags, 1.5),
        }
    }

    /// `Σ_{n<=N} a_n e(nz)` with a bound on the omitted tail.
    pub fn eval<R: Real>(&self, z: &HalfPlanePoint<R>) -> Estimate<Complex<R>> {
        let coeffs = self.to_reals::<R>();
        let two_pi_y = R::pi().mul_pow2(1) * z.y();
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for (n, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let nr = R::from_u64(n as u64);
            let damp = (-two_pi_y * nr).exp();
            let phase = e_of(nr * z.x());
            re.add(*a * damp * phase.re);
            im.add(*a * damp * phase.im);
        }
        let r = (-two_pi_y.to_f64()).exp();
        let tail = self
            .coefficient_bound()
            .geometric_tail(self.truncation_order(), r);
        Estimate::new(Complex::new(re.value(), im.value()), tail)
    }

    pub fn to_json(&self) -> QExpansionJson {
        let coeffs = match &self.coeffs {
            Coefficients::Exact(a) => a.iter().map(ToString::to_string).collect(),
            Coefficients::Floating(a) => {
                a.iter().map(|x| x.to_sci_string(Dd::DIGITS + 1)).collect()
            }
        };
        QExpansionJson {
            truncation_order: self.truncation_order(),
            weight: self.weight,
            kind: self.kind(),
            coeffs,
        }
    }

    pub fn from_json(j: &QExpansionJson) -> Result<Self> {
        if j.coeffs.len() != j.truncation_order + 1 {
            return Err(Error::Parse(format!(
                "expected {} coefficients for truncation order {}, found {}",
                j.truncation_order + 1,
                j.truncation_order,
                j.coeffs.len()
            )));
        }
        match j.kind {
            CoefficientKind::Exact => {
                let v = j
                    .coeffs
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()?;
                Self::exact(v, j.weight)
            }
            CoefficientKind::Floating => {
                let v = j
                    .coeffs
                    .iter()
                    .map(|s| s.parse::<Dd>().map_err(|e| Error::Parse(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Self::floating(v, j.weight)
            }
        }
    }
}

/// Wire format of a [`QExpansion`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QExpansionJson {
    pub truncation_order: usize,
    pub weight: Option<i32>,
    pub kind: CoefficientKind,
    pub coeffs: Vec<String>,
}

fn dd_to_real<R: Real>(d: Dd) -> R {
    R::from_f64(d.hi()) + R::from_f64(d.lo())
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn common_denominator(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let nums = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (nums, den)
}

fn cauchy_int(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// `Π_{n>=1} (1 - q^n)` through `q^order`.
fn euler_product(order: usize) -> Vec<BigInt> {
    let mut p = vec![0i64; order + 1];
    p[0] = 1;
    for n in 1..=order {
        for k in (n..=order).rev() {
            p[k] -= p[k - n];
        }
    }
    p.into_iter().map(BigInt::from).collect()
}

/// `Δ = q Π (1 - q^n)^24` through `q^order`, i.e. Ramanujan's `τ(n)`.
pub fn delta_qexp(order: usize) -> QExpansion {
    let order = order.max(1);
    let m = order - 1;
    let p1 = euler_product(m);
    let p2 = cauchy_int(&p1, &p1, m);
    let p4 = cauchy_int(&p2, &p2, m);
    let p8 = cauchy_int(&p4, &p4, m);
    let p16 = cauchy_int(&p8, &p8, m);
    let p24 = cauchy_int(&p16, &p8, m);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(BigInt::zero());
    coeffs.extend(p24);
    QExpansion::from_integers(coeffs, Some(12)).expect("nonempty")
}

/// Constant term of `G_12`: `-B_12 / 24 = 691/65520`.
pub fn g12_constant() -> BigRational {
    BigRational::new(BigInt::from(691), BigInt::from(65520))
}

/// `G_12 = 691/65520 + Σ σ_11(n) q^n` through `q^order`.
pub fn g12_qexp(order: usize) -> QExpansion {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(g12_constant());
    for n in 1..=order {
        let s = arith::sigma(11, n as i64).expect("n >= 1");
        coeffs.push(BigRational::from_integer(s));
    }
    QExpansion::exact(coeffs, Some(12)).expect("nonempty")
}

/// The basis `(Δ², Δ G_12)` of weight-24 cusp forms through `q^order`.
pub fn s24_basis(order: usize) -> (QExpansion, QExpansion) {
    let d = delta_qexp(order);
    let g = g12_qexp(order);
    let d2 = d.mul(&d).expect("same kind");
    let dg = d.mul(&g).expect("same kind");
    (d2, dg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> QExpansion {
        QExpansion::from_integers(v.iter().map(|&x| BigInt::from(x)).collect(), None).unwrap()
    }

    fn int_coeffs(f: &QExpansion) -> Vec<BigInt> {
        match f.coefficients() {
            Coefficients::Exact(v) => v.iter().map(|x| x.to_integer()).collect(),
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn mul_examples() {
        let a = ints(&[1, 1, 0]);
        let b = ints(&[1, -1, 0]);
        assert_eq!(a.mul(&b).unwrap(), ints(&[1, 0, -1]));
        let d = delta_qexp(5);
        let one = QExpansion::constant(BigRational::one(), 5);
        assert_eq!(d.mul(&one).unwrap().coefficients(), d.coefficients());
        let d2 = d.mul(&d).unwrap();
        assert_eq!(d2.exact_coeff(2).unwrap(), &BigRational::one());
        assert_eq!(d2.weight(), Some(24));
    }

    #[test]
    fn mul_truncates_to_smaller_order() {
        let a = ints(&[1, 2, 3, 4]);
        let b = ints(&[1, 1]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.truncation_order(), 1);
        assert_eq!(c, ints(&[1, 3]));
    }

    #[test]
    fn mul_rejects_kind_mismatch() {
        let a = ints(&[1, 2]);
        let b = QExpansion::floating(vec![Dd::one(), Dd::one()], None).unwrap();
        assert!(matches!(a.mul(&b), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn delta_examples() {
        let d = delta_qexp(3);
        assert_eq!(
            int_coeffs(&d),
            vec![0, 1, -24, 252]
                .into_iter()
                .map(BigInt::from)
                .collect::<Vec<_>>()
        );
        assert_eq!(delta_qexp(1).exact_coeff(1).unwrap(), &BigRational::one());
        assert_eq!(
            delta_qexp(2).exact_coeff(2).unwrap().to_integer(),
            BigInt::from(-24)
        );
    }

    #[test]
    fn delta_known_values() {
        // τ(n) for n = 1..=12.
        let tau = [
            1i64, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
        ];
        let d = delta_qexp(12);
        for (i, &t) in tau.iter().enumerate() {
            assert_eq!(d.exact_coeff(i + 1).unwrap().to_integer(), BigInt::from(t));
        }
    }

    #[test]
    fn delta_is_multiplicative() {
        let d = delta_qexp(200);
        let tau = |n: usize| d.exact_coeff(n).unwrap().to_integer();
        for (m, n) in [(2usize, 3usize), (3, 5), (4, 9), (7, 11), (8, 25)] {
            assert_eq!(tau(m * n), tau(m) * tau(n));
        }
        // Hecke recursion at p = 2: τ(4) = τ(2)^2 - 2^11.
        assert_eq!(tau(4), tau(2) * tau(2) - BigInt::from(2048));
    }

    #[test]
    fn delta_truncation_consistency() {
        let big = delta_qexp(60);
        for m in [1usize, 2, 7, 30, 59] {
            assert_eq!(big.truncate(m), delta_qexp(m));
        }
    }

    #[test]
    fn ramanujan_congruence() {
        let d = delta_qexp(150);
        let g = g12_qexp(150);
        let p = BigInt::from(691);
        for n in 1..=150 {
            let t = d.exact_coeff(n).unwrap().to_integer();
            let s = g.exact_coeff(n).unwrap().to_integer();
            assert!(((t - s) % &p).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn g12_examples() {
        let g = g12_qexp(2);
        assert_eq!(g.exact_coeff(0).unwrap(), &g12_constant());
        assert_eq!(g.exact_coeff(1).unwrap(), &BigRational::one());
        assert_eq!(g.exact_coeff(2).unwrap().to_integer(), BigInt::from(2049));
    }

    #[test]
    fn s24_basis_leading_terms() {
        let (d2, dg) = s24_basis(6);
        assert!(d2.exact_coeff(1).unwrap().is_zero());
        assert_eq!(d2.exact_coeff(2).unwrap(), &BigRational::one());
        assert_eq!(dg.exact_coeff(1).unwrap(), &g12_constant());
        assert!(dg.exact_coeff(0).unwrap().is_zero());
        assert_eq!(d2.weight(), Some(24));
        assert_eq!(dg.weight(), Some(24));
    }

    #[test]
    fn antiderivative_examples() {
        let f = ints(&[0, 1, -24]);
        let expected = QExpansion::exact(
            vec![
                BigRational::zero(),
                BigRational::one(),
                BigRational::from_integer(BigInt::from(-12)),
            ],
            None,
        )
        .unwrap();
        assert_eq!(f.antiderivative().unwrap(), expected);
        assert!(QExpansion::zero(4).antiderivative().unwrap().is_zero());
        assert!(ints(&[1, 2]).antiderivative().is_err());
        let d = delta_qexp(10);
        let fd = d.antiderivative().unwrap();
        assert_eq!(
            fd.exact_coeff(3).unwrap(),
            &BigRational::new(BigInt::from(252), BigInt::from(3))
        );
    }

    #[test]
    fn eval_trivial_series() {
        let z = HalfPlanePoint::<f64>::from_f64(0.2, 0.7).unwrap();
        let zero = QExpansion::zero(5).eval(&z);
        assert_eq!(zero.value, Complex::new(0.0, 0.0));
        assert_eq!(zero.bound, 0.0);
        let c =
            QExpansion::constant(BigRational::new(BigInt::from(3), BigInt::from(2)), 5).eval(&z);
        assert!((c.value.re - 1.5).abs() < 1e-15 && c.value.im.abs() < 1e-15);
    }

    #[test]
    fn eval_delta_at_i_truncation_doubling() {
        let z = HalfPlanePoint::<Dd>::i();
        let a = delta_qexp(50).eval(&z);
        let b = delta_qexp(200).eval(&z);
        let diff = (a.value.re - b.value.re).abs().to_f64();
        assert!(diff < 1e-20, "{diff}");
        assert!(a.bound < 1e-20);
        let reference: Dd = "0.00178536985064215190434305496034".parse().unwrap();
        assert!((b.value.re - reference).abs().to_f64() < 1e-29);
        assert!(b.value.im.abs().to_f64() < 1e-30);
    }

    #[test]
    fn json_round_trip() {
        let g = g12_qexp(4);
        let j = g.to_json();
        assert_eq!(j.coeffs[0], "691/65520");
        assert_eq!(j.kind, CoefficientKind::Exact);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"kind\":\"exact\""));
        let back: QExpansionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(QExpansion::from_json(&back).unwrap(), g);

        let f =
            QExpansion::floating(vec![Dd::zero(), Dd::one() / Dd::from_f64(3.0)], Some(2)).unwrap();
        let back = QExpansion::from_json(&f.to_json()).unwrap();
        let diff = (back.coeff::<Dd>(1).unwrap() - f.coeff::<Dd>(1).unwrap()).abs();
        assert!(diff.to_f64() < 1e-32);
    }

    #[test]
    fn json_rejects_bad_length() {
        let j = QExpansionJson {
            truncation_order: 3,
            weight: None,
            kind: CoefficientKind::Exact,
            coeffs: vec!["1".into()],
        };
        assert!(QExpansion::from_json(&j).is_err());
    }

    fn small_series() -> impl Strategy<Value = QExpansion> {
        (1usize..8).prop_flat_map(|n| {
            proptest::collection::vec((-50i64..50, 1i64..6), n + 1).prop_map(|v| {
                QExpansion::exact(
                    v.into_iter()
                        .map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
                        .collect(),
                    None,
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn mul_commutative(a in small_series(), b in small_series()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn mul_associative(a in small_series(), b in small_series(), c in small_series()) {
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn eval_is_multiplicative(x in -0.5f64..0.5, y in 0.5f64..2.0) {
            let z = HalfPlanePoint::<Dd>::from_f64(x, y).unwrap();
            let d = delta_qexp(40);
            let g = g12_qexp(40);
            let dg = d.mul(&g).unwrap();
            let (ed, eg, edg) = (d.eval(&z), g.eval(&z), dg.eval(&z));
            let prod = ed.value * eg.value;
            let diff = crate::real::cabs(prod - edg.value).to_f64();
            let mag_d = crate::real::cabs(ed.value).to_f64();
            let mag_g = crate::real::cabs(eg.value).to_f64();
            let allowed = edg.bound + ed.bound * (mag_g + eg.bound) + eg.bound * mag_d + 1e-28;
            prop_assert!(diff <= allowed, "diff {} allowed {}", diff, allowed);
        }
    }
}
