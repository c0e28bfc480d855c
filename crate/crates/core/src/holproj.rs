//! Holomorphic projection of `f·K1` for weight-24 cusp forms `f` on
//! `PSL2(Z)`, and coordinates of the result in the basis `{Δ², ΔG12}`.
//!
//! With `f = Σ a_l q^l`, the m-th coefficient of the projection is
//!
//! ```text
//! π d_m = 6 Σ_{l=1}^{m-1} a_l σ(m-l)/(m-l)
//!       + 6 m^23 Σ_{l>m} a_l σ(l-m) / (l^23 (l-m))
//!       + 23 a_m / (4m) + 3 a_m (2γ + log m - H_22).
//! ```
//!
//! The `l = m` contribution of the first sum is carried by the last term, so
//! the first sum stops at `m - 1`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{harmonic, sigma1_table};
use crate::bound::{power_log_tail, Estimate, PowerBound};
use crate::error::{Error, Result};
use crate::qseries::{s24_basis, QExpansion};
use crate::real::{CompensatedSum, Real};

/// Default relative tolerance on each `d_m`.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default number of coefficients used by [`decompose`].
pub const DEFAULT_M_FIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormId {
    Delta2,
    DeltaG12,
    Custom,
}

fn check_form(f: &QExpansion) -> Result<()> {
    if let Some(k) = f.weight() {
        if k != 24 {
            return Err(Error::Domain(format!(
                "expected a weight-24 form, got weight {k}"
            )));
        }
    }
    if !f.is_cuspidal() {
        return Err(Error::Domain(
            "expected a cusp form (zero constant term)".into(),
        ));
    }
    Ok(())
}

/// Coefficient envelope `|a_l| <= c l^12`.
fn envelope(f: &QExpansion) -> PowerBound {
    PowerBound::calibrate(12.0, f.magnitudes(), 1.5)
}

/// Bound on the omitted part of the infinite sum past `l_max`, after the
/// division by π. Uses `σ(k)/k <= 1 + ln k <= 1 + ln l`.
fn remainder(env: &PowerBound, m: usize, l_max: usize) -> f64 {
    if env.c == 0.0 {
        return 0.0;
    }
    let m23 = (m as f64).powi(23);
    6.0 * m23 * env.c * power_log_tail(l_max as f64, 11.0) / std::f64::consts::PI
}

fn dm_sum<R: Real>(a: &[R], sigma: &[u64], m: usize, l_max: usize) -> R {
    let mut acc = CompensatedSum::new();
    let six = R::from_f64(6.0);
    for l in 1..m {
        if !a[l].is_zero() {
            let k = m - l;
            acc.add(six * a[l] * R::from_u64(sigma[k]) / R::from_u64(k as u64));
        }
    }
    let mr = R::from_u64(m as u64);
    for l in (m + 1)..=l_max {
        if a[l].is_zero() {
            continue;
        }
        let k = l - m;
        let ratio = (mr / R::from_u64(l as u64)).powi(23);
        acc.add(six * a[l] * R::from_u64(sigma[k]) / R::from_u64(k as u64) * ratio);
    }
    let am = a[m];
    if !am.is_zero() {
        let h22 = R::from_ratio(&harmonic(22));
        acc.add(R::from_f64(23.0) * am / (R::from_f64(4.0) * mr));
        acc.add(R::from_f64(3.0) * am * (R::euler_gamma().mul_pow2(1) + mr.ln() - h22));
    }
    acc.value() / R::pi()
}

/// `d_m` with the infinite sum cut at `l_max`; the bound covers `l > l_max`.
pub fn dm_weight24_at<R: Real>(f: &QExpansion, m: usize, l_max: usize) -> Result<Estimate<R>> {
    check_form(f)?;
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let l_max = l_max.max(m);
    if l_max > f.truncation_order() {
        return Err(Error::InsufficientTerms {
            what: "q-expansion coefficients".into(),
            required: l_max,
            available: f.truncation_order(),
        });
    }
    let a = f.to_reals::<R>();
    let sigma = sigma1_table(l_max);
    let value = dm_sum(&a, &sigma, m, l_max);
    Ok(Estimate::new(value, remainder(&envelope(f), m, l_max)))
}

/// `d_m` to relative tolerance `tol`: the cutoff doubles until the remainder
/// is below `tol/10 · |d_m|`. Also returns the cutoff used.
pub fn dm_weight24<R: Real>(f: &QExpansion, m: usize, tol: f64) -> Result<(Estimate<R>, usize)> {
    check_form(f)?;
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let available = f.truncation_order();
    if available < m {
        return Err(Error::InsufficientTerms {
            what: "q-expansion coefficients".into(),
            required: m,
            available,
        });
    }
    let a = f.to_reals::<R>();
    let sigma = sigma1_table(available);
    let env = envelope(f);
    let mut l_max = (2 * m).max(32).min(available);
    loop {
        let value = dm_sum(&a, &sigma, m, l_max);
        let bound = remainder(&env, m, l_max);
        let target = tol / 10.0 * value.abs().to_f64();
        if bound <= target {
            return Ok((Estimate::new(value, bound), l_max));
        }
        if l_max == available {
            let mut need = available.max(1);
            while remainder(&env, m, need) > target {
                need *= 2;
                if need > 1 << 40 {
                    break;
                }
            }
            return Err(Error::InsufficientTerms {
                what: format!("q-expansion coefficients for d_{m} at tolerance {tol:e}"),
                required: need,
                available,
            });
        }
        l_max = (2 * l_max).min(available);
    }
}

/// The sequence `d_1, ..., d_M` for one form.
#[derive(Debug, Clone)]
pub struct ProjectionCoeffs<R> {
    pub form_id: FormId,
    pub tol: f64,
    pub d: Vec<R>,
    pub tail_error: Vec<f64>,
    pub truncation: Vec<usize>,
}

impl<R: Real> ProjectionCoeffs<R> {
    pub fn with_form_id(mut self, id: FormId) -> Self {
        self.form_id = id;
        self
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn to_json(&self, digits: usize, decomposition: Option<&Decomposition<R>>) -> Value {
        let fmt = |x: &R| Value::String(x.to_sci_string(digits));
        json!({
            "form": self.form_id,
            "tol": self.tol,
            "d": self.d.iter().map(fmt).collect::<Vec<_>>(),
            "tail_error": self.tail_error,
            "truncation": self.truncation,
            "decomposition": decomposition.map(|dc| dc.to_json(digits)).unwrap_or(Value::Null),
        })
    }
}

/// `d_m` for `m = 1..=m_max`, computed in parallel over `m`.
pub fn project<R: Real>(f: &QExpansion, m_max: usize, tol: f64) -> Result<ProjectionCoeffs<R>> {
    if m_max < 2 {
        return Err(Error::Domain(format!(
            "M_max must be at least 2, got {m_max}"
        )));
    }
    let terms: Vec<(Estimate<R>, usize)> = (1..=m_max)
        .into_par_iter()
        .map(|m| dm_weight24::<R>(f, m, tol))
        .collect::<Result<_>>()?;
    Ok(ProjectionCoeffs {
        form_id: FormId::Custom,
        tol,
        d: terms.iter().map(|t| t.0.value).collect(),
        tail_error: terms.iter().map(|t| t.0.bound).collect(),
        truncation: terms.iter().map(|t| t.1).collect(),
    })
}

/// Coordinates of a projection in the basis `{Δ², ΔG12}`.
#[derive(Debug, Clone)]
pub struct Decomposition<R> {
    pub c_delta2: R,
    pub c_delta_g12: R,
    /// `‖W(Ac - d)‖ / ‖W d‖` with rows equilibrated by `W`.
    pub residual: f64,
    pub condition: f64,
    pub m_fit: usize,
    /// Exact solve of the rows `m = 1, 2`.
    pub two_by_two: [R; 2],
    /// Relative gap between the fitted and the 2×2 coordinates.
    pub discrepancy: f64,
}

/// Above this gap between the least-squares and 2×2 solutions, something is wrong.
pub const DISCREPANCY_LIMIT: f64 = 1e-6;

impl<R: Real> Decomposition<R> {
    pub fn is_consistent(&self) -> bool {
        self.discrepancy <= DISCREPANCY_LIMIT
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "c_delta2": self.c_delta2.to_sci_string(digits),
            "c_deltaG12": self.c_delta_g12.to_sci_string(digits),
            "residual": self.residual,
            "condition": self.condition,
            "m_fit": self.m_fit,
            "two_by_two": [self.two_by_two[0].to_sci_string(digits), self.two_by_two[1].to_sci_string(digits)],
            "discrepancy": self.discrepancy,
        })
    }
}

const MAX_CONDITION: f64 = 1e12;

/// Least-squares fit of `d_1..d_{m_fit}` against the coefficients of `Δ²`
/// and `ΔG12`, by Householder QR on equilibrated rows.
pub fn decompose<R: Real>(p: &ProjectionCoeffs<R>, m_fit: usize) -> Result<Decomposition<R>> {
    if m_fit < 2 {
        return Err(Error::Domain(format!(
            "M_fit must be at least 2, got {m_fit}"
        )));
    }
    if m_fit > p.len() {
        return Err(Error::InsufficientTerms {
            what: "projection coefficients".into(),
            required: m_fit,
            available: p.len(),
        });
    }
    let (d2, dg) = s24_basis(m_fit);
    let col1: Vec<R> = (1..=m_fit).map(|m| d2.coeff::<R>(m).unwrap()).collect();
    let col2: Vec<R> = (1..=m_fit).map(|m| dg.coeff::<R>(m).unwrap()).collect();
    let rhs: Vec<R> = p.d[..m_fit].to_vec();

    let mut rows: Vec<[R; 3]> = (0..m_fit)
        .map(|i| {
            let s = col1[i].abs().max(col2[i].abs()).max(rhs[i].abs());
            let w = if s.is_zero() { R::one() } else { s.recip() };
            [col1[i] * w, col2[i] * w, rhs[i] * w]
        })
        .collect();
    let b_norm = norm(rows.iter().map(|r| r[2]));

    // Householder reflections on the two columns, carried onto the rhs.
    let mut r = [[R::zero(); 2]; 2];
    for j in 0..2 {
        let alpha = norm(rows[j..].iter().map(|row| row[j]));
        if alpha.is_zero() {
            return Err(Error::IllConditioned {
                condition: f64::INFINITY,
            });
        }
        let alpha = if rows[j][j] > R::zero() {
            -alpha
        } else {
            alpha
        };
        let mut v: Vec<R> = rows[j..].iter().map(|row| row[j]).collect();
        v[0] -= alpha;
        let vnorm2: R = v
            .iter()
            .map(|x| *x * *x)
            .collect::<CompensatedSum<R>>()
            .value();
        for c in j..3 {
            let dot: R = v
                .iter()
                .zip(&rows[j..])
                .map(|(vi, row)| *vi * row[c])
                .collect::<CompensatedSum<R>>()
                .value();
            let f = dot.mul_pow2(1) / vnorm2;
            for (vi, row) in v.iter().zip(rows[j..].iter_mut()) {
                row[c] -= f * *vi;
            }
        }
        for c in j..2 {
            r[j][c] = rows[j][c];
        }
    }
    let condition = condition_2x2(r);
    if !(condition < MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let x2 = rows[1][2] / r[1][1];
    let x1 = (rows[0][2] - r[0][1] * x2) / r[0][0];
    let resid = norm(rows[2..].iter().map(|row| row[2]));
    let residual = if b_norm.is_zero() {
        resid.to_f64()
    } else {
        (resid / b_norm).to_f64()
    };

    let det = col1[0] * col2[1] - col2[0] * col1[1];
    if det.is_zero() {
        return Err(Error::IllConditioned {
            condition: f64::INFINITY,
        });
    }
    let t1 = (rhs[0] * col2[1] - col2[0] * rhs[1]) / det;
    let t2 = (col1[0] * rhs[1] - rhs[0] * col1[1]) / det;
    let scale = x1.abs().max(x2.abs()).to_f64().max(f64::MIN_POSITIVE);
    let discrepancy = (x1 - t1).abs().max((x2 - t2).abs()).to_f64() / scale;

    Ok(Decomposition {
        c_delta2: x1,
        c_delta_g12: x2,
        residual,
        condition,
        m_fit,
        two_by_two: [t1, t2],
        discrepancy,
    })
}

fn norm<R: Real>(xs: impl Iterator<Item = R>) -> R {
    xs.map(|x| x * x)
        .collect::<CompensatedSum<R>>()
        .value()
        .sqrt()
}

/// Ratio of singular values of an upper-triangular 2×2 matrix.
fn condition_2x2<R: Real>(r: [[R; 2]; 2]) -> f64 {
    let (a, b, d) = (r[0][0].to_f64(), r[0][1].to_f64(), r[1][1].to_f64());
    let fro2 = a * a + b * b + d * d;
    let det = (a * d).abs();
    if det == 0.0 {
        return f64::INFINITY;
    }
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let smax2 = (fro2 + disc) / 2.0;
    let smin2 = det * det / smax2;
    (smax2 / smin2).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{Dd, Qd};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    const ORDER: usize = 400;

    fn rel(a: Dd, b: f64) -> f64 {
        ((a.to_f64() - b) / b).abs()
    }

    fn basis_projection(id: FormId) -> (ProjectionCoeffs<Dd>, Decomposition<Dd>) {
        let (d2, dg) = s24_basis(ORDER);
        let f = if id == FormId::Delta2 { d2 } else { dg };
        let p = project::<Dd>(&f, DEFAULT_M_FIT, DEFAULT_TOL)
            .unwrap()
            .with_form_id(id);
        let dc = decompose(&p, DEFAULT_M_FIT).unwrap();
        (p, dc)
    }

    #[test]
    fn zero_form() {
        let z = QExpansion::zero(50);
        let (d, _) = dm_weight24::<Dd>(&z, 3, 1e-10).unwrap();
        assert!(d.value.is_zero() && d.bound == 0.0);
        let p = project::<f64>(&z, 5, 1e-10).unwrap();
        assert!(p.d.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn first_coefficient_of_delta_squared() {
        let (d2, _) = s24_basis(ORDER);
        let (d1, _) = dm_weight24::<Dd>(&d2, 1, 1e-12).unwrap();
        assert!(rel(d1.value, 2.26247484188621e-7) < 1e-12);
        // a_1 = 0, so only the infinite sum survives
        let a = d2.to_reals::<Dd>();
        let sigma = sigma1_table(ORDER);
        let mut direct = Dd::zero();
        for l in 2..=ORDER {
            direct += a[l] * Dd::from_u64(sigma[l - 1])
                / (Dd::from_u64(l as u64).powi(23) * Dd::from_u64(l as u64 - 1));
        }
        direct = direct * Dd::from_f64(6.0) / Dd::pi();
        let full = dm_weight24_at::<Dd>(&d2, 1, ORDER).unwrap();
        assert!(((full.value - direct) / direct).abs().to_f64() < 1e-25);
    }

    #[test]
    fn truncation_doubling() {
        let (d2, dg) = s24_basis(ORDER);
        for f in [&d2, &dg] {
            for m in [1usize, 2, 3, 7] {
                for l in [40usize, 100] {
                    let a = dm_weight24_at::<Dd>(f, m, l).unwrap();
                    let b = dm_weight24_at::<Dd>(f, m, 2 * l).unwrap();
                    assert!((a.value - b.value).abs().to_f64() <= a.bound, "m={m} L={l}");
                }
            }
        }
    }

    #[test]
    fn insufficient_truncation_names_length() {
        let (d2, _) = s24_basis(30);
        match dm_weight24::<Dd>(&d2, 10, 1e-12) {
            Err(Error::InsufficientTerms {
                required,
                available,
                ..
            }) => {
                assert_eq!(available, 30);
                assert!(required > 30);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(dm_weight24_at::<Dd>(&d2, 5, 31).is_err());
    }

    #[test]
    fn rejects_wrong_forms() {
        let d = crate::qseries::delta_qexp(20);
        assert!(dm_weight24::<f64>(&d, 1, 1e-10).is_err());
        let g = crate::qseries::g12_qexp(20)
            .mul(&crate::qseries::g12_qexp(20))
            .unwrap();
        assert!(dm_weight24::<f64>(&g, 1, 1e-10).is_err());
        assert!(project::<f64>(&QExpansion::zero(10), 1, 1e-10).is_err());
    }

    #[test]
    fn reproduces_published_decompositions() {
        let (_, a) = basis_projection(FormId::Delta2);
        assert!((a.c_delta2.to_f64() + 0.852857).abs() <= 5e-7);
        assert!((a.c_delta_g12.to_f64() - 0.0000214526).abs() <= 5e-11);
        assert!(a.residual <= 1e-6 && a.is_consistent());

        let (_, b) = basis_projection(FormId::DeltaG12);
        assert!((b.c_delta2.to_f64() - 0.220305).abs() <= 5e-7);
        assert!((b.c_delta_g12.to_f64() + 0.591762).abs() <= 5e-7);
        assert!(b.residual <= 1e-6 && b.is_consistent());
    }

    #[test]
    fn basis_vector_decomposes_to_unit() {
        let (d2, _) = s24_basis(12);
        let p = ProjectionCoeffs {
            form_id: FormId::Custom,
            tol: 0.0,
            d: (1..=10).map(|m| d2.coeff::<Dd>(m).unwrap()).collect(),
            tail_error: vec![0.0; 10],
            truncation: vec![0; 10],
        };
        let dc = decompose(&p, 10).unwrap();
        assert!((dc.c_delta2 - Dd::one()).abs().to_f64() < 1e-12);
        assert!(dc.c_delta_g12.abs().to_f64() < 1e-12);
        assert!(dc.residual <= 1e-12);
        assert!(decompose(&p, 11).is_err());
        assert!(decompose(&p, 1).is_err());
    }

    #[test]
    fn tolerance_refinement_is_stable() {
        let (_, dg) = s24_basis(ORDER);
        let a = project::<Dd>(&dg, 6, 1e-8).unwrap();
        let b = project::<Dd>(&dg, 6, 1e-9).unwrap();
        for (x, y) in a.d.iter().zip(&b.d) {
            assert!(((*x - *y) / *y).abs().to_f64() <= 1e-8);
        }
    }

    #[test]
    fn precision_escalation() {
        let (d2, dg) = s24_basis(ORDER);
        for f in [&d2, &dg] {
            for m in 1..=5 {
                let (a, _) = dm_weight24::<Dd>(f, m, 1e-12).unwrap();
                let (b, _) = dm_weight24::<Qd>(f, m, 1e-12).unwrap();
                assert!(((a.value.to_f64() - b.value.to_f64()) / b.value.to_f64()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn json_shape() {
        let (p, dc) = basis_projection(FormId::Delta2);
        let j = p.to_json(17, Some(&dc));
        assert_eq!(j["form"], "delta2");
        assert_eq!(j["d"].as_array().unwrap().len(), DEFAULT_M_FIT);
        assert!(j["decomposition"]["c_deltaG12"].is_string());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn projection_is_linear(an in -20i64..20, ad in 1i64..10, bn in -20i64..20, bd in 1i64..10) {
            let (d2, dg) = s24_basis(200);
            let alpha = BigRational::new(BigInt::from(an), BigInt::from(ad));
            let beta = BigRational::new(BigInt::from(bn), BigInt::from(bd));
            let combo = d2.scale(&alpha).add(&dg.scale(&beta)).unwrap();
            let (af, bf) = (Dd::from_ratio(&alpha), Dd::from_ratio(&beta));
            for m in 1..=4 {
                let f = dm_weight24_at::<Dd>(&d2, m, 200).unwrap();
                let g = dm_weight24_at::<Dd>(&dg, m, 200).unwrap();
                let h = dm_weight24_at::<Dd>(&combo, m, 200).unwrap();
                let want = af * f.value + bf * g.value;
                let slack = af.abs().to_f64() * f.bound + bf.abs().to_f64() * g.bound + 1e-25 * want.abs().to_f64().max(1.0);
                prop_assert!((h.value - want).abs().to_f64() <= slack);
            }
        }
    }
}
