//! First-order Kronecker limit data `K1` for `PSL2(Z)` and square-free
//! `Gamma0(N)`, and quantities built from it.
//!
//! Fourier shape: `K1(z) = y + K - V^{-1} log y + Σ_{n≠0} k(n) e(nz)` where
//! negative frequencies read `e(-|n| z̄)`, and `k(-n) = k(n)` here.

use num_complex::Complex;
use serde_json::{json, Map, Value};

use crate::arith::{
    divisors, incomplete_zeta, incomplete_zeta_log_derivative, mobius, sigma1, sigma1_table,
    GroupSpec,
};
use crate::bound::{log_geometric_tail, power_log_tail, Estimate, PowerBound};
use crate::error::{Error, Result};
use crate::qseries::{delta_qexp, HalfPlanePoint, QExpansion};
use crate::real::{cabs, e_of, CompensatedSum, Real};
use crate::specfun::whittaker_star;

/// Smallest `y` at which Fourier-side evaluation is attempted.
pub const Y_FLOOR: f64 = 0.05;

/// `k(n) = (6/π) σ(n)/n` for `PSL2(Z)`, `n >= 1`.
pub fn k_full_modular<R: Real>(n: u64) -> R {
    six_over_pi::<R>() * R::from_u64(sigma1(n)) / R::from_u64(n)
}

fn six_over_pi<R: Real>() -> R {
    R::from_f64(6.0) / R::pi()
}

/// `K = (3/π)(γ - log 4π)`, the constant in the full-modular expansion.
pub fn full_modular_constant<R: Real>() -> R {
    let four_pi = R::pi().mul_pow2(2);
    R::from_f64(3.0) / R::pi() * (R::euler_gamma() - four_pi.ln())
}

/// One pulled-back copy `weight · K1(scale · z)` of the full-modular function.
#[derive(Debug, Clone, Copy)]
struct Component<R> {
    weight: R,
    scale: u64,
}

#[derive(Debug, Clone)]
pub struct KroneckerLimit<R> {
    group: GroupSpec,
    constant_k: R,
    y_coeff: R,
    logy_coeff: R,
    volume: R,
    gamma0_constant: Option<R>,
    components: Vec<Component<R>>,
    k_table: Vec<R>,
}

/// `K1` for `PSL2(Z)` with `k(n)` tabulated for `1 <= n <= n_max`.
pub fn k1_full_modular<R: Real>(n_max: usize) -> Result<KroneckerLimit<R>> {
    let components = vec![Component {
        weight: R::one(),
        scale: 1,
    }];
    KroneckerLimit::build(
        GroupSpec::full_modular(),
        components,
        full_modular_constant(),
        None,
        n_max,
    )
}

/// Constant term at `s = 1` of `E_N(z,s) = Σ_{d|N} c_d(s) E(Nz/d, s)` with
/// `c_d(s) = ζ_N(2s) μ(d) (dN)^{-s}`.
///
/// The returned function is the z-dependent part `Σ_d c_d(1) K1(Nz/d)`; the
/// remaining scalar `V^{-1} Σ_d c_d'(1)` is reported by
/// [`KroneckerLimit::gamma0_constant`].
pub fn k1_gamma0_squarefree<R: Real>(level: u64, n_max: usize) -> Result<KroneckerLimit<R>> {
    if level < 2 {
        return Err(Error::Domain(format!(
            "Gamma0 level must be >= 2, got {level}"
        )));
    }
    let group = GroupSpec::gamma0(level)?;
    let two = R::from_f64(2.0);
    let zeta = incomplete_zeta(level, two)?;
    let log_deriv = incomplete_zeta_log_derivative(level, two)?;
    let k_full = full_modular_constant::<R>();
    let three_over_pi = R::from_f64(3.0) / R::pi();

    let mut components = Vec::new();
    let mut constant = CompensatedSum::new();
    let mut derivative = CompensatedSum::new();
    for d in divisors(level) {
        let mu = mobius(d as i64)?;
        let dn = R::from_u64(d) * R::from_u64(level);
        let c = zeta * R::from_i64(mu as i64) / dn;
        let scale = level / d;
        components.push(Component { weight: c, scale });
        constant.add(c * (k_full - three_over_pi * R::from_u64(scale).ln()));
        derivative.add(c * (two * log_deriv - dn.ln()));
    }
    let full_volume = GroupSpec::full_modular().volume::<R>();
    let additive = derivative.value() / full_volume;
    KroneckerLimit::build(group, components, constant.value(), Some(additive), n_max)
}

impl<R: Real> KroneckerLimit<R> {
    fn build(
        group: GroupSpec,
        components: Vec<Component<R>>,
        constant_k: R,
        gamma0_constant: Option<R>,
        n_max: usize,
    ) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain("N_max must be at least 1".into()));
        }
        let three_over_pi = R::from_f64(3.0) / R::pi();
        let y_coeff: R = components
            .iter()
            .map(|c| c.weight * R::from_u64(c.scale))
            .collect::<CompensatedSum<R>>()
            .value();
        let logy_coeff = -three_over_pi
            * components
                .iter()
                .map(|c| c.weight)
                .collect::<CompensatedSum<R>>()
                .value();
        let volume = group.volume::<R>();

        let tol = 1e3 * R::EPSILON.max(f64::EPSILON * 1e-16);
        let y_err = (y_coeff - R::one()).abs().to_f64();
        let v_err = ((logy_coeff * volume) + R::one()).abs().to_f64();
        if y_err > tol || v_err > tol {
            return Err(Error::Numerical(format!(
                "Laurent data off shape: y coefficient error {y_err:e}, log y coefficient error {v_err:e}"
            )));
        }

        let sigma = sigma1_table(n_max);
        let six_pi = six_over_pi::<R>();
        let k_table = (1..=n_max)
            .map(|j| {
                components
                    .iter()
                    .filter(|c| (j as u64).is_multiple_of(c.scale))
                    .map(|c| {
                        let m = j / c.scale as usize;
                        c.weight * six_pi * R::from_u64(sigma[m]) / R::from_u64(m as u64)
                    })
                    .collect::<CompensatedSum<R>>()
                    .value()
            })
            .collect();

        Ok(KroneckerLimit {
            group,
            constant_k,
            y_coeff,
            logy_coeff,
            volume,
            gamma0_constant,
            components,
            k_table,
        })
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn n_max(&self) -> usize {
        self.k_table.len()
    }

    pub fn constant_k(&self) -> R {
        self.constant_k
    }

    pub fn y_coeff(&self) -> R {
        self.y_coeff
    }

    pub fn logy_coeff(&self) -> R {
        self.logy_coeff
    }

    pub fn volume(&self) -> R {
        self.volume
    }

    /// `V^{-1} Σ_d c_d'(1)` for `Gamma0(N)`; `None` for the full modular group.
    pub fn gamma0_constant(&self) -> Option<R> {
        self.gamma0_constant
    }

    pub fn k_table(&self) -> &[R] {
        &self.k_table
    }

    /// `k(n)` for `n ≠ 0`, from the table when possible and otherwise from
    /// the pullback rule. Returns zero for `n = 0`, which has no Fourier
    /// coefficient of this form (see [`Self::k_zero`]).
    pub fn k(&self, n: i64) -> R {
        let n = n.unsigned_abs();
        if n == 0 {
            return R::zero();
        }
        if (n as usize) <= self.k_table.len() {
            return self.k_table[n as usize - 1];
        }
        self.components
            .iter()
            .filter(|c| n.is_multiple_of(c.scale))
            .map(|c| c.weight * k_full_modular::<R>(n / c.scale))
            .collect::<CompensatedSum<R>>()
            .value()
    }

    /// `k(0) = K + (γ + log 4πm)/V`.
    pub fn k_zero(&self, m: u64) -> R {
        let four_pi_m = R::pi().mul_pow2(2) * R::from_u64(m);
        self.constant_k + (R::euler_gamma() + four_pi_m.ln()) / self.volume
    }

    /// `C` with `|k(n)| <= C (1 + ln|n|)`, from `σ(n)/n <= H_n`.
    pub fn k_envelope(&self) -> f64 {
        6.0 / std::f64::consts::PI
            * self
                .components
                .iter()
                .map(|c| c.weight.to_f64().abs())
                .sum::<f64>()
    }

    fn check_floor(&self, z: &HalfPlanePoint<R>) -> Result<()> {
        let y = z.y().to_f64();
        if y < Y_FLOOR {
            return Err(Error::BelowFloor { y, floor: Y_FLOOR });
        }
        Ok(())
    }

    fn fourier_tail(&self, y: f64, n: usize) -> f64 {
        2.0 * self.k_envelope() * log_geometric_tail(n, (-2.0 * std::f64::consts::PI * y).exp())
    }

    /// `K1(z)` from the Fourier expansion truncated at `N_max`, with a bound
    /// on the omitted frequencies.
    pub fn eval(&self, z: &HalfPlanePoint<R>) -> Result<Estimate<R>> {
        self.check_floor(z)?;
        let y = z.y();
        let q = e_of(z.x()) * (-(R::pi().mul_pow2(1) * y)).exp();
        let mut qn = Complex::new(R::one(), R::zero());
        let mut acc = CompensatedSum::new();
        acc.add(self.y_coeff * y);
        acc.add(self.constant_k);
        acc.add(self.logy_coeff * y.ln());
        for k in &self.k_table {
            qn = qn * q;
            // e(nz) + e(-n z̄) = 2 Re e(nz)
            acc.add(*k * qn.re.mul_pow2(1));
        }
        Ok(Estimate::new(
            acc.value(),
            self.fourier_tail(y.to_f64(), self.n_max()),
        ))
    }

    /// As [`Self::eval`], but fails if the tail bound exceeds `tol`, naming
    /// the `N_max` that would be needed.
    pub fn eval_to(&self, z: &HalfPlanePoint<R>, tol: f64) -> Result<Estimate<R>> {
        self.check_floor(z)?;
        let y = z.y().to_f64();
        if self.fourier_tail(y, self.n_max()) > tol {
            let mut need = self.n_max();
            while self.fourier_tail(y, need) > tol {
                need *= 2;
                if need > 1 << 30 {
                    return Err(Error::Domain(format!(
                        "tolerance {tol:e} unreachable at y = {y}"
                    )));
                }
            }
            let (mut lo, mut hi) = (need / 2, need);
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if self.fourier_tail(y, mid) > tol {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Err(Error::InsufficientTerms {
                what: "K1 Fourier terms (N_max)".into(),
                required: hi,
                available: self.n_max(),
            });
        }
        self.eval(z)
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let fmt = |x: R| Value::String(x.to_sci_string(digits));
        let mut k = Map::new();
        for (i, v) in self.k_table.iter().enumerate() {
            k.insert((i + 1).to_string(), fmt(*v));
        }
        json!({
            "group": self.group,
            "K": fmt(self.constant_k),
            "V": fmt(self.volume),
            "y_coeff": fmt(self.y_coeff),
            "logy_coeff": fmt(self.logy_coeff),
            "k": Value::Object(k),
            "gamma0_constant": self.gamma0_constant.map(fmt).unwrap_or(Value::Null),
        })
    }
}

/// Convenience wrapper for [`KroneckerLimit::eval`].
pub fn k1_eval<R: Real>(k1: &KroneckerLimit<R>, z: &HalfPlanePoint<R>) -> Result<Estimate<R>> {
    k1.eval(z)
}

/// Full-modular `K1` from the closed form `-(1/4π) log(y^12 |Δ(z)|^2) + K`,
/// with `Δ` summed to `order` terms.
pub fn k1_closed_form<R: Real>(z: &HalfPlanePoint<R>, order: usize) -> Result<Estimate<R>> {
    let delta = delta_qexp(order).eval(z);
    let modulus = cabs(delta.value);
    if !(modulus.to_f64() > 2.0 * delta.bound) {
        return Err(Error::Numerical(
            "Delta truncation error swamps its value".into(),
        ));
    }
    let y = z.y();
    let log_term = R::from_f64(12.0) * y.ln() + modulus.ln().mul_pow2(1);
    let value = -log_term / R::pi().mul_pow2(2) + full_modular_constant::<R>();
    // |δ log|Δ|²| <= 2 δ / (|Δ| - δ)
    let bound = 2.0 * delta.bound / (modulus.to_f64() - delta.bound) / (4.0 * std::f64::consts::PI);
    Ok(Estimate::new(value, bound))
}

fn require_cuspidal(f: &QExpansion) -> Result<()> {
    if !f.is_cuspidal() {
        return Err(Error::Domain(
            "expected a cusp form (zero constant term)".into(),
        ));
    }
    Ok(())
}

/// `A(z) = -(1/V) Σ_{n>=1} (a_n/n) W*(nz)`, summed over the known
/// coefficients of `f`.
pub fn a_func_eval<R: Real>(
    f: &QExpansion,
    volume: R,
    z: &HalfPlanePoint<R>,
) -> Result<Estimate<Complex<R>>> {
    require_cuspidal(f)?;
    if z.y().to_f64() < Y_FLOOR {
        return Err(Error::BelowFloor {
            y: z.y().to_f64(),
            floor: Y_FLOOR,
        });
    }
    let coeffs = f.to_reals::<R>();
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for (n, a) in coeffs.iter().enumerate().skip(1) {
        if a.is_zero() {
            continue;
        }
        let w = whittaker_star(n as i64, z)? * (*a / R::from_u64(n as u64));
        re.add(w.re);
        im.add(w.im);
    }
    let scale = -volume.recip();
    let value = Complex::new(re.value() * scale, im.value() * scale);
    // e^x E1(x) <= 1/x, so |W*(nz)| <= e^{-2πny} / (4πny).
    let y = z.y().to_f64();
    let env = f.coefficient_bound();
    let tail = PowerBound::new(
        env.c / (4.0 * std::f64::consts::PI * y * volume.to_f64()),
        env.p - 2.0,
    )
    .geometric_tail(
        f.truncation_order(),
        (-2.0 * std::f64::consts::PI * y).exp(),
    );
    Ok(Estimate::new(value, tail))
}

fn check_lseries_args<R: Real>(f: &QExpansion, m: u64, s: R, n_terms: usize) -> Result<PowerBound> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    if !(s.to_f64() > 3.0) {
        return Err(Error::Domain(format!(
            "s = {s} lies outside the region of absolute convergence s > 3"
        )));
    }
    if n_terms > f.truncation_order() {
        return Err(Error::InsufficientTerms {
            what: "q-expansion coefficients".into(),
            required: n_terms,
            available: f.truncation_order(),
        });
    }
    // a_n << n, with c calibrated on the known coefficients; faster observed
    // growth raises the exponent.
    let fitted = PowerBound::fit(&f.magnitudes(), 1.0);
    let p = fitted.p.max(1.0);
    if !(s.to_f64() - p > 1.0) {
        return Err(Error::Domain(format!(
            "coefficients grow like n^{p:.2}; the series is not absolutely convergent at s = {s}"
        )));
    }
    Ok(PowerBound::calibrate(p, f.magnitudes(), 1.5))
}

/// `Σ_{n=m+1}^{N} a_n k(m-n) / n^s` with a bound on the remainder `n > N`.
pub fn l_plusplus_partial<R: Real>(
    f: &QExpansion,
    k1: &KroneckerLimit<R>,
    m: u64,
    s: R,
    n_terms: usize,
) -> Result<Estimate<R>> {
    let env = check_lseries_args(f, m, s, n_terms)?;
    let coeffs = f.to_reals::<R>();
    let mut acc = CompensatedSum::new();
    for n in (m as usize + 1)..=n_terms {
        let a = coeffs[n];
        if a.is_zero() {
            continue;
        }
        let nr = R::from_u64(n as u64);
        acc.add(a * k1.k(m as i64 - n as i64) / (s * nr.ln()).exp());
    }
    let start = (n_terms as f64).max(m as f64).max(1.0);
    let rem = env.c * k1.k_envelope() * power_log_tail(start, s.to_f64() - env.p);
    Ok(Estimate::new(acc.value(), rem))
}

/// `Σ_{n=1}^{N} (a_n/n) k(-m-n) / (m+n)^{s-1}` with a bound on the remainder.
pub fn l_minus_partial<R: Real>(
    f: &QExpansion,
    k1: &KroneckerLimit<R>,
    m: u64,
    s: R,
    n_terms: usize,
) -> Result<Estimate<R>> {
    let env = check_lseries_args(f, m, s, n_terms)?;
    let coeffs = f.to_reals::<R>();
    let sm1 = s - R::one();
    let mut acc = CompensatedSum::new();
    for n in 1..=n_terms {
        let a = coeffs[n];
        if a.is_zero() {
            continue;
        }
        let t = R::from_u64(m + n as u64);
        acc.add(a / R::from_u64(n as u64) * k1.k(-(m as i64) - n as i64) / (sm1 * t.ln()).exp());
    }
    // |a_n|/n <= c (m+n)^{p-1} for p >= 1.
    let start = (m + n_terms as u64) as f64;
    let rem = env.c * k1.k_envelope() * power_log_tail(start, s.to_f64() - env.p);
    Ok(Estimate::new(acc.value(), rem))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K2Source {
    UserSupplied,
    Extrapolated,
}

/// Coefficients `b_m = -L^+_m(1)` and `b_{-m} = -L^-_m(1)` of the
/// harmonic part `B(z)` of `K2`, which must come from outside this crate.
#[derive(Debug, Clone)]
pub struct K2Coefficients<R> {
    b_plus: Vec<Complex<R>>,
    b_minus: Vec<Complex<R>>,
    source: K2Source,
    errors: Option<Vec<f64>>,
}

impl<R: Real> K2Coefficients<R> {
    /// `b_plus[m-1]`, `b_minus[m-1]` for `m = 1..=len`. Extrapolated values
    /// must carry one error per index, applied to both sides.
    pub fn new(
        b_plus: Vec<Complex<R>>,
        b_minus: Vec<Complex<R>>,
        source: K2Source,
        errors: Option<Vec<f64>>,
    ) -> Result<Self> {
        if b_plus.len() != b_minus.len() {
            return Err(Error::Domain("b_plus and b_minus lengths differ".into()));
        }
        match (&source, &errors) {
            (K2Source::Extrapolated, None) => {
                return Err(Error::Domain(
                    "extrapolated coefficients need error estimates".into(),
                ))
            }
            (_, Some(e)) if e.len() != b_plus.len() => {
                return Err(Error::Domain(
                    "one error estimate per coefficient expected".into(),
                ))
            }
            _ => {}
        }
        Ok(K2Coefficients {
            b_plus,
            b_minus,
            source,
            errors,
        })
    }

    pub fn zeros(len: usize) -> Self {
        let z = vec![Complex::new(R::zero(), R::zero()); len];
        K2Coefficients {
            b_plus: z.clone(),
            b_minus: z,
            source: K2Source::UserSupplied,
            errors: None,
        }
    }

    pub fn len(&self) -> usize {
        self.b_plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b_plus.is_empty()
    }

    pub fn source(&self) -> K2Source {
        self.source
    }
}

/// `K2(z) = A(z) + B(z) + F(z) K1(z)` where `F = Σ (a_n/n) q^n` and
/// `B(z) = Σ_m b_m e(mz) + b_{-m} e(-m z̄)` uses the supplied coefficients.
pub fn k2_assemble<R: Real>(
    f: &QExpansion,
    k1: &KroneckerLimit<R>,
    b: Option<&K2Coefficients<R>>,
    z: &HalfPlanePoint<R>,
) -> Result<Estimate<Complex<R>>> {
    let b = b.ok_or(Error::MissingCoefficients)?;
    require_cuspidal(f)?;
    let a = a_func_eval(f, k1.volume(), z)?;
    let big_f = f.antiderivative()?.eval(z);
    let k = k1.eval(z)?;

    let x = z.x();
    let decay = (-(R::pi().mul_pow2(1) * z.y())).exp();
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    let mut b_bound = 0.0;
    let mut damp = R::one();
    for m in 0..b.len() {
        damp *= decay;
        let mr = R::from_u64(m as u64 + 1);
        let ep = e_of(mr * x) * damp;
        let em = ep.conj();
        let t = b.b_plus[m] * ep + b.b_minus[m] * em;
        re.add(t.re);
        im.add(t.im);
        if let Some(errs) = &b.errors {
            b_bound += 2.0 * errs[m] * damp.to_f64();
        }
    }
    let b_val = Complex::new(re.value(), im.value());
    let fk = big_f.value * k.value;
    let fk_bound = cabs(big_f.value).to_f64() * k.bound
        + k.value.abs().to_f64() * big_f.bound
        + big_f.bound * k.bound;
    Ok(Estimate::new(
        a.value + b_val + fk,
        a.bound + b_bound + fk_bound,
    ))
}
