//! Values with truncation bounds, and the tail estimates behind them.

use serde::Serialize;

/// A computed value together with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub bound: f64,
}

impl<T> Estimate<T> {
    pub fn new(value: T, bound: f64) -> Self {
        Estimate { value, bound }
    }

    pub fn exact(value: T) -> Self {
        Estimate { value, bound: 0.0 }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Estimate<U> {
        Estimate {
            value: f(self.value),
            bound: self.bound,
        }
    }
}

/// Coefficient envelope `|a_n| <= c · n^p` for `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerBound {
    pub c: f64,
    pub p: f64,
}

impl PowerBound {
    pub fn new(c: f64, p: f64) -> Self {
        PowerBound { c, p }
    }

    /// Smallest `c` with `|a_n| <= c n^p` over the supplied `(n, |a_n|)`,
    /// inflated by `safety`.
    pub fn calibrate(p: f64, samples: impl IntoIterator<Item = (usize, f64)>, safety: f64) -> Self {
        let c = samples
            .into_iter()
            .filter(|&(n, _)| n >= 1)
            .map(|(n, a)| a.abs() / (n as f64).powf(p))
            .fold(0.0f64, f64::max);
        PowerBound { c: c * safety, p }
    }

    /// Exponent from a least-squares fit of `log|a_n|` against `log n` over the
    /// last quarter of the nonzero samples, then calibrated as above.
    pub fn fit(samples: &[(usize, f64)], safety: f64) -> Self {
        let nonzero: Vec<(f64, f64)> = samples
            .iter()
            .filter(|&&(n, a)| n >= 1 && a != 0.0 && a.is_finite())
            .map(|&(n, a)| ((n as f64).ln(), a.abs().ln()))
            .collect();
        let p = if nonzero.len() < 2 {
            0.0
        } else {
            let start = nonzero.len() - (nonzero.len() / 4).max(2);
            let pts = &nonzero[start..];
            let k = pts.len() as f64;
            let mx = pts.iter().map(|t| t.0).sum::<f64>() / k;
            let my = pts.iter().map(|t| t.1).sum::<f64>() / k;
            let sxx: f64 = pts.iter().map(|t| (t.0 - mx).powi(2)).sum();
            let sxy: f64 = pts.iter().map(|t| (t.0 - mx) * (t.1 - my)).sum();
            if sxx > 0.0 {
                (sxy / sxx).max(0.0)
            } else {
                0.0
            }
        };
        Self::calibrate(p, samples.iter().copied(), safety)
    }

    /// Bound on `Σ_{n>N} c n^p r^n` for `0 <= r < 1`.
    ///
    /// From index `M` on, successive terms shrink at least by
    /// `ρ = ((M+1)/M)^p r`. `M` is the first index past `N` with
    /// `ρ <= (1+r)/2`; terms before it are summed directly and the rest is
    /// dominated by a geometric series.
    pub fn geometric_tail(&self, n: usize, r: f64) -> f64 {
        if self.c == 0.0 || r == 0.0 {
            return 0.0;
        }
        if !(r < 1.0) {
            return f64::INFINITY;
        }
        let target = (1.0 + r) / (2.0 * r);
        let m_min = if self.p > 0.0 {
            (1.0 / (target.powf(1.0 / self.p) - 1.0)).ceil()
        } else {
            1.0
        };
        let m = m_min.max((n + 1) as f64);
        if m > 1e8 {
            return f64::INFINITY;
        }
        let m = m as usize;
        // log-space terms avoid overflow of n^p.
        let term = |k: usize| (self.c.ln() + self.p * (k as f64).ln() + k as f64 * r.ln()).exp();
        let head: f64 = ((n + 1)..m).map(term).sum();
        let rho = ((m as f64 + 1.0) / m as f64).powf(self.p) * r;
        head + term(m) / (1.0 - rho)
    }
}

/// `Σ_{n>N} (1 + ln n) r^n` for `0 <= r < 1`, using
/// `ln n <= ln(N+1) + (n - N - 1)/(N + 1)`.
pub fn log_geometric_tail(n: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let n1 = (n + 1) as f64;
    let lead = r.powf(n1);
    (1.0 + n1.ln()) * lead / (1.0 - r) + lead * r / ((1.0 - r) * (1.0 - r) * n1)
}

/// `∫_L^∞ t^{-α} (1 + ln t) dt` for `α > 1`, which dominates
/// `Σ_{n>L} n^{-α}(1 + ln n)` because the integrand decreases on `t >= 1`.
pub fn power_log_tail(l: f64, alpha: f64) -> f64 {
    assert!(alpha > 1.0 && l >= 1.0);
    let a1 = alpha - 1.0;
    l.powf(-a1) * ((1.0 + l.ln()) / a1 + 1.0 / (a1 * a1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_dominates_brute_force() {
        let b = PowerBound::new(2.0, 5.5);
        for &(n, r) in &[(10usize, 0.3f64), (50, 0.9), (200, 0.95)] {
            let brute: f64 = ((n + 1)..(n + 20000))
                .map(|k| 2.0 * (k as f64).powf(5.5) * r.powi(k as i32))
                .sum();
            let t = b.geometric_tail(n, r);
            assert!(
                t >= brute && t <= 2.0 * brute + 1e-300,
                "{n} {r}: {t} vs {brute}"
            );
        }
    }

    #[test]
    fn log_tail_dominates_brute_force() {
        for &(n, r) in &[(5usize, 0.5f64), (40, 0.99), (100, 0.2)] {
            let brute: f64 = ((n + 1)..(n + 100000))
                .map(|k| (1.0 + (k as f64).ln()) * r.powi(k as i32))
                .sum();
            let t = log_geometric_tail(n, r);
            assert!(t >= brute && t < 1.5 * brute, "{t} vs {brute}");
        }
    }

    #[test]
    fn power_log_tail_dominates_sum() {
        let brute: f64 = (101..2_000_000)
            .map(|k| {
                let k = k as f64;
                k.powf(-3.0) * (1.0 + k.ln())
            })
            .sum();
        let t = power_log_tail(100.0, 3.0);
        assert!(t >= brute && t < 1.2 * brute);
    }

    #[test]
    fn fit_recovers_exponent() {
        let samples: Vec<(usize, f64)> = (1..=400).map(|n| (n, 3.0 * (n as f64).powi(4))).collect();
        let b = PowerBound::fit(&samples, 1.0);
        assert!((b.p - 4.0).abs() < 1e-9);
        assert!((b.c - 3.0).abs() < 1e-6);
    }
}
