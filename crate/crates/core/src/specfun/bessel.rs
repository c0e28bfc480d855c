use num_complex::Complex;

use super::e1::exp_int_e1_scaled;
use super::gamma::ln_gamma;
use super::quad::{default_tol, exp_sinh};
use crate::error::{Error, Result};
use crate::qseries::HalfPlanePoint;
use crate::real::{e_of, Real};

fn check_positive<R: Real>(what: &str, v: R) -> Result<()> {
    if v > R::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive, got {v}")))
    }
}

/// `∫_1^∞ (t²-1)^{s-1} e^{-2πty} dt`.
///
/// With `t = 1 + u` and `v = 2πy·u` this is
/// `e^{-2πy}/(2πy) · ∫_0^∞ (u(u+2))^{s-1} e^{-v} dv`, integrated by exp-sinh
/// quadrature, which copes with the `u^{s-1}` endpoint singularity for s < 1.
pub fn kbessel_integral<R: Real>(s: R, y: R) -> Result<R> {
    check_positive("s", s)?;
    check_positive("y", y)?;
    let two_pi_y = R::pi().mul_pow2(1) * y;
    let sm1 = s - R::one();
    let two = R::from_f64(2.0);
    let q = exp_sinh(
        |v: R| {
            if sm1.is_zero() {
                (-v).exp()
            } else {
                let u = v / two_pi_y;
                (sm1 * (u.ln() + (u + two).ln()) - v).exp()
            }
        },
        default_tol::<R>(),
    )?;
    Ok(q.value * (-two_pi_y).exp() / two_pi_y)
}

/// `K_{s-1/2}(2πy)` from its integral representation, for `s > 0`.
pub fn kbessel<R: Real>(s: R, y: R) -> Result<R> {
    let integral = kbessel_integral(s, y)?;
    let half = R::from_f64(0.5);
    let pi_y = R::pi() * y;
    let log_prefactor = half * R::pi().ln() - ln_gamma(s)? + (s - half) * pi_y.ln();
    Ok(log_prefactor.exp() * integral)
}

/// `∂/∂s K_{s-1/2}(2πy)` at `s = 1`, i.e. `Γ(0,4πy) e^{2πy} / (2√y)`.
pub fn kbessel_s_derivative_at_1<R: Real>(y: R) -> Result<R> {
    check_positive("y", y)?;
    let two_pi_y = R::pi().mul_pow2(1) * y;
    let scaled = exp_int_e1_scaled(two_pi_y.mul_pow2(1))?;
    Ok(scaled * (-two_pi_y).exp() / y.sqrt().mul_pow2(1))
}

/// `W_s(nz) = 2|n|^{1/2} y^{1/2} K_{s-1/2}(2π|n|y) e(nx)`.
pub fn whittaker_w<R: Real>(s: R, n: i64, z: &HalfPlanePoint<R>) -> Result<Complex<R>> {
    if n == 0 {
        return Err(Error::Domain("whittaker_w requires n != 0".into()));
    }
    let ny = R::from_i64(n.abs()) * z.y();
    let radial = ny.sqrt().mul_pow2(1) * kbessel(s, ny)?;
    Ok(e_of(R::from_i64(n) * z.x()) * radial)
}

/// `W*(nz) = Γ(0,4πny) e^{4πny} e(nz)`, the `s`-derivative of `W_s(nz)` at 1.
pub fn whittaker_star<R: Real>(n: i64, z: &HalfPlanePoint<R>) -> Result<Complex<R>> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "whittaker_star requires n >= 1, got {n}"
        )));
    }
    let two_pi_ny = R::pi().mul_pow2(1) * R::from_i64(n) * z.y();
    let radial = exp_int_e1_scaled(two_pi_ny.mul_pow2(1))? * (-two_pi_ny).exp();
    Ok(e_of(R::from_i64(n) * z.x()) * radial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{cabs, Dd, Qd};
    use crate::specfun::e1::exp_int_e1;
    use crate::specfun::fd::fd_derivative;
    use num_traits::One;

    const S_GRID: [f64; 6] = [0.5, 0.75, 1.0, 1.5, 2.0, 3.0];
    const Y_GRID: [f64; 4] = [0.05, 0.25, 1.0, 10.0];
    // K_{s-1/2}(2πy), 30 digits, rows indexed by S_GRID, columns by Y_GRID.
    const REFERENCE: [[&str; 4]; 6] = [
        [
            "1.33031363515644263671337939145",
            "0.195128727687444217661751933065",
            "0.000916584360904370311894090307506",
            "8.13927440387292429956646503073e-29",
        ],
        [
            "1.4013844605433382243867113226",
            "0.198248834082450252507470022128",
            "0.000920840110472272943015575982464",
            "8.14329186043231040829923442854e-29",
        ],
        [
            "1.63323006813354873890945940083",
            "0.207879576350761908546955619835",
            "0.000933721365853994407215106467414",
            "8.15535607058015530006147318145e-29",
        ],
        [
            "2.89955878185295100078818935907",
            "0.250752359634554469553263405549",
            "0.000986996057681045123170700485736",
            "8.20379098168608387011088533483e-29",
        ],
        [
            "6.83196283912889456746598460965",
            "0.340219824927053200665389654165",
            "0.00108232773670017367184747910083",
            "8.28515259371088807787479313581e-29",
        ],
        [
            "66.8736694801837229549301359057",
            "0.857651578850758864828196295233",
            "0.00145049479387788246604218062296",
            "8.55094296744807292906418593808e-29",
        ],
    ];

    #[test]
    fn kbessel_reference_grid() {
        for (i, &s) in S_GRID.iter().enumerate() {
            for (j, &y) in Y_GRID.iter().enumerate() {
                let want = Dd::parse_decimal(REFERENCE[i][j]).unwrap();
                let yd = Dd::parse_decimal(&y.to_string()).unwrap();
                let got: Dd = kbessel(Dd::from_f64(s), yd).unwrap();
                let err = ((got - want) / want).abs().to_f64();
                assert!(err < 1e-27, "s={s} y={y}: rel err {err:e}");
                let got64: f64 = kbessel(s, y).unwrap();
                assert!(((got64 - want.to_f64()) / want.to_f64()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn half_integer_closed_form() {
        for y in [0.1, 1.0, 3.0] {
            let y = Qd::from_f64(y);
            let got = kbessel(Qd::one(), y).unwrap();
            let want = (-(Qd::pi().mul_pow2(1) * y)).exp() / y.sqrt().mul_pow2(1);
            assert!(((got - want) / want).abs().to_f64() < 1e-55);
        }
    }

    #[test]
    fn inner_integral_at_s_equal_one() {
        let got: Dd = kbessel_integral(Dd::one(), Dd::one()).unwrap();
        let two_pi = Dd::pi().mul_pow2(1);
        let want = (-two_pi).exp() / two_pi;
        assert!(((got - want) / want).abs().to_f64() < 1e-29);
    }

    #[test]
    fn large_argument_asymptotic() {
        // √Y K_ν(Y) = √(π/2) e^{-Y} (1 + O((1+s²)/Y)) at Y = 50.
        let big_y = 50.0;
        for s in [0.5, 1.0, 2.0, 3.0] {
            let k: f64 = kbessel(s, big_y / (2.0 * std::f64::consts::PI)).unwrap();
            let ratio = big_y.sqrt() * k / ((std::f64::consts::PI / 2.0).sqrt() * (-big_y).exp());
            assert!(
                (ratio - 1.0).abs() <= (1.0 + s * s) / big_y,
                "s={s}: {ratio}"
            );
        }
    }

    #[test]
    fn domain_errors() {
        assert!(kbessel(0.0, 1.0).is_err());
        assert!(kbessel(1.0, -1.0).is_err());
        assert!(kbessel_s_derivative_at_1(0.0).is_err());
        let z = HalfPlanePoint::<f64>::i();
        assert!(whittaker_w(1.0, 0, &z).is_err());
        assert!(whittaker_star(0, &z).is_err());
    }

    #[test]
    fn s_derivative_closed_form() {
        let y = 1.0f64;
        let four_pi = 4.0 * std::f64::consts::PI;
        let want = exp_int_e1(four_pi).unwrap() * (2.0 * std::f64::consts::PI).exp() / 2.0;
        let got = kbessel_s_derivative_at_1(y).unwrap();
        assert!(((got - want) / want).abs() < 1e-14);

        // Large y: Γ(0,x) ~ e^{-x}/x gives e^{-2πy} / (8π y^{3/2}).
        let y = 20.0f64;
        let asym = (-2.0 * std::f64::consts::PI * y).exp() / (2.0 * four_pi * y.powf(1.5));
        let ratio = kbessel_s_derivative_at_1(y).unwrap() / asym;
        assert!((ratio - 1.0).abs() < 5e-2);
    }

    #[test]
    fn s_derivative_matches_finite_difference() {
        for y in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let y = Dd::from_f64(y);
            let fd = fd_derivative(|s: Dd| kbessel(s, y), Dd::one(), 1e-4, 3).unwrap();
            let exact = kbessel_s_derivative_at_1(y).unwrap();
            let rel = ((fd.value - exact) / exact).abs().to_f64();
            assert!(rel < 1e-7, "y={y}: {rel:e}");
        }
    }

    #[test]
    fn whittaker_at_s_one_is_exponential() {
        let z = HalfPlanePoint::<Dd>::from_f64(0.3, 0.7).unwrap();
        let w = whittaker_w(Dd::one(), 1, &z).unwrap();
        let e = e_of(z.x()) * (-(Dd::pi().mul_pow2(1) * z.y())).exp();
        assert!(cabs(w - e).to_f64() < 1e-30);

        let i = HalfPlanePoint::<f64>::i();
        let m = cabs(whittaker_w(1.0, 1, &i).unwrap());
        assert!((m - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-16);
    }

    #[test]
    fn whittaker_negative_index_is_conjugate() {
        let z = HalfPlanePoint::<f64>::from_f64(0.21, 0.4).unwrap();
        for n in 1..4 {
            let a = whittaker_w(1.3, n, &z).unwrap();
            let b = whittaker_w(1.3, -n, &z).unwrap();
            assert!((a.conj() - b).norm() < 1e-16);
        }
    }

    #[test]
    fn whittaker_composes_kbessel() {
        let i = HalfPlanePoint::<f64>::i();
        let w = whittaker_w(1.5, 1, &i).unwrap();
        let k = kbessel(1.5, 1.0).unwrap();
        assert!((w.re - 2.0 * k).abs() < 1e-17 && w.im.abs() < 1e-17);
    }

    #[test]
    fn whittaker_star_properties() {
        // Large ny: |W*| ~ e^{-2πny}/(4πny).
        let z = HalfPlanePoint::<f64>::from_f64(0.1, 10.0).unwrap();
        let w = whittaker_star(2, &z).unwrap();
        let x = 4.0 * std::f64::consts::PI * 20.0;
        let asym = (-2.0 * std::f64::consts::PI * 20.0).exp() / x;
        assert!((w.norm() / asym - 1.0).abs() < 5e-2);

        let a = HalfPlanePoint::<Dd>::from_f64(0.37, 0.8).unwrap();
        let b = HalfPlanePoint::new(a.x() + Dd::one(), a.y()).unwrap();
        for n in 1..4 {
            let d = whittaker_star(n, &a).unwrap() - whittaker_star(n, &b).unwrap();
            assert!(cabs(d).to_f64() < 1e-30);
        }
    }

    #[test]
    fn whittaker_star_is_s_derivative() {
        let i = HalfPlanePoint::<Dd>::i();
        let re = fd_derivative(|s: Dd| Ok(whittaker_w(s, 1, &i)?.re), Dd::one(), 1e-4, 3).unwrap();
        let star = whittaker_star(1, &i).unwrap();
        assert!((re.value - star.re).abs().to_f64() < 1e-6 * star.re.abs().to_f64());
    }
}
