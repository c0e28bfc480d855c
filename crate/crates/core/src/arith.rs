//! Divisor sums, the Möbius function, harmonic numbers, incomplete zeta
//! products, and the groups `PSL2(Z)` / `Gamma0(N)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Euler's constant and π at the precision of `R`.
#[derive(Debug, Clone, Copy)]
pub struct Constants<R> {
    pub euler_gamma: R,
    pub pi: R,
}

impl<R: Real> Constants<R> {
    pub fn new() -> Self {
        Constants {
            euler_gamma: R::euler_gamma(),
            pi: R::pi(),
        }
    }
}

impl<R: Real> Default for Constants<R> {
    fn default() -> Self {
        Self::new()
    }
}

/// Prime factorisation by trial division, as `(p, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `σ_l(n) = Σ_{d|n} d^l`, exactly.
pub fn sigma(l: u32, n: i64) -> Result<BigInt> {
    if n <= 0 {
        return Err(Error::Domain(format!("sigma requires n >= 1, got {n}")));
    }
    Ok(divisors(n as u64)
        .into_iter()
        .map(|d| BigInt::from(d).pow(l))
        .sum())
}

/// `σ(n) = σ_1(n)` in machine integers.
pub fn sigma1(n: u64) -> u64 {
    debug_assert!(n >= 1);
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p.pow(e + 1) - 1) / (p - 1))
        .product()
}

/// Table of `σ(k)` for `k = 0..=n` (entry 0 is unused and set to 0).
pub fn sigma1_table(n: usize) -> Vec<u64> {
    let mut t = vec![0u64; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            t[m] += d as u64;
        }
    }
    t
}

pub fn mobius(n: i64) -> Result<i8> {
    if n <= 0 {
        return Err(Error::Domain(format!("mobius requires n >= 1, got {n}")));
    }
    let f = factorize(n as u64);
    if f.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if f.len().is_multiple_of(2) { 1 } else { -1 })
}

/// `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> BigRational {
    let mut h = BigRational::zero();
    for k in 1..=n {
        h += BigRational::new(BigInt::one(), BigInt::from(k));
    }
    h
}

fn require_squarefree(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("level must be positive".into()));
    }
    if !is_squarefree(n) {
        return Err(Error::NotSquareFree(n));
    }
    Ok(())
}

/// `ζ_N(s) = Π_{p|N} (1 - p^{-s})^{-1}`.
pub fn incomplete_zeta<R: Real>(n: u64, s: R) -> Result<R> {
    require_squarefree(n)?;
    if s <= R::zero() {
        return Err(Error::Domain("incomplete_zeta requires s > 0".into()));
    }
    let mut acc = R::one();
    for p in prime_divisors(n) {
        let pr = R::from_u64(p);
        acc /= R::one() - (-s * pr.ln()).exp();
    }
    Ok(acc)
}

/// `ζ_N'(s) / ζ_N(s) = -Σ_{p|N} log p · p^{-s} / (1 - p^{-s})`.
pub fn incomplete_zeta_log_derivative<R: Real>(n: u64, s: R) -> Result<R> {
    require_squarefree(n)?;
    if s <= R::zero() {
        return Err(Error::Domain("incomplete_zeta requires s > 0".into()));
    }
    let mut acc = R::zero();
    for p in prime_divisors(n) {
        let lp = R::from_u64(p).ln();
        let ps = (-s * lp).exp();
        acc -= lp * ps / (R::one() - ps);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    FullModular,
    Gamma0,
}

/// `PSL2(Z)` or `Gamma0(N)` with `N` square-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    kind: GroupKind,
    level: u64,
}

impl GroupSpec {
    pub fn full_modular() -> Self {
        GroupSpec {
            kind: GroupKind::FullModular,
            level: 1,
        }
    }

    pub fn gamma0(level: u64) -> Result<Self> {
        require_squarefree(level)?;
        Ok(GroupSpec {
            kind: GroupKind::Gamma0,
            level,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Index of the group in `PSL2(Z)`: `N Π_{p|N} (1 + 1/p)`.
    pub fn index(&self) -> u64 {
        prime_divisors(self.level)
            .iter()
            .map(|p| p + 1)
            .product::<u64>()
            * self.level
            / prime_divisors(self.level).iter().product::<u64>()
    }

    /// Hyperbolic volume of the quotient: `(π/3) · index`.
    pub fn volume<R: Real>(&self) -> R {
        R::pi() / R::from_f64(3.0) * R::from_u64(self.index())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Dd;

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1, 6).unwrap(), BigInt::from(12));
        assert_eq!(sigma(11, 1).unwrap(), BigInt::from(1));
        assert_eq!(sigma(11, 2).unwrap(), BigInt::from(2049));
        assert!(sigma(1, 0).is_err());
        assert!(sigma(1, -3).is_err());
    }

    #[test]
    fn sigma_is_multiplicative() {
        for m in 1..=50i64 {
            for n in 1..=50i64 {
                if num_integer::gcd(m, n) != 1 {
                    continue;
                }
                for l in [0, 1, 11] {
                    assert_eq!(
                        sigma(l, m * n).unwrap(),
                        sigma(l, m).unwrap() * sigma(l, n).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn sigma1_agrees_with_exact_and_table() {
        let t = sigma1_table(300);
        for n in 1..=300u64 {
            let exact = sigma(1, n as i64).unwrap();
            assert_eq!(BigInt::from(sigma1(n)), exact);
            assert_eq!(t[n as usize], sigma1(n));
        }
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
        assert!(mobius(0).is_err());
    }

    #[test]
    fn mobius_sums_over_divisors() {
        for n in 1..=200u64 {
            let s: i64 = divisors(n)
                .into_iter()
                .map(|d| mobius(d as i64).unwrap() as i64)
                .sum();
            assert_eq!(s, if n == 1 { 1 } else { 0 }, "n = {n}");
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0), BigRational::zero());
        assert_eq!(harmonic(1), BigRational::one());
        assert_eq!(
            harmonic(3),
            BigRational::new(BigInt::from(11), BigInt::from(6))
        );
        let h22 = Dd::from_ratio(&harmonic(22));
        // Direct f64 summation in reverse order as an oracle.
        let direct: f64 = (1..=22).rev().map(|k| 1.0 / k as f64).sum();
        assert!((h22.to_f64() - direct).abs() < 1e-14);
        assert!((h22.to_f64() - 3.69081).abs() < 1e-5);
    }

    #[test]
    fn harmonic_increments() {
        for n in 1..=60u64 {
            let d = harmonic(n) - harmonic(n - 1);
            assert_eq!(d, BigRational::new(BigInt::one(), BigInt::from(n)));
        }
    }

    #[test]
    fn incomplete_zeta_examples() {
        let two = 2.0f64;
        assert_eq!(incomplete_zeta(1, two).unwrap(), 1.0);
        assert!((incomplete_zeta(2, two).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((incomplete_zeta(6, two).unwrap() - 1.5).abs() < 1e-15);
        assert!(matches!(
            incomplete_zeta(12, two),
            Err(Error::NotSquareFree(12))
        ));
    }

    #[test]
    fn incomplete_zeta_inverts_euler_factors() {
        for n in (1..=30u64).filter(|&n| is_squarefree(n)) {
            for s in [0.5, 1.0, 2.0, 3.7] {
                let z = incomplete_zeta(n, s).unwrap();
                let prod: f64 = prime_divisors(n)
                    .iter()
                    .map(|&p| 1.0 - (p as f64).powf(-s))
                    .product();
                assert!((z * prod - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn log_derivative_matches_central_difference() {
        let h = 1e-5;
        for n in [2u64, 6, 30] {
            let s = 2.0;
            let fd = (incomplete_zeta(n, s + h).unwrap() - incomplete_zeta(n, s - h).unwrap())
                / (2.0 * h);
            let ld = incomplete_zeta_log_derivative(n, s).unwrap() * incomplete_zeta(n, s).unwrap();
            assert!((fd - ld).abs() < 1e-9, "{n}: {fd} vs {ld}");
        }
    }

    #[test]
    fn group_volumes() {
        let v1: f64 = GroupSpec::full_modular().volume();
        assert!((v1 - std::f64::consts::PI / 3.0).abs() < 1e-15);
        let g = GroupSpec::gamma0(6).unwrap();
        assert_eq!(g.index(), 12);
        let p = GroupSpec::gamma0(7).unwrap();
        assert_eq!(p.index(), 8);
        assert!(GroupSpec::gamma0(8).is_err());
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }
}
