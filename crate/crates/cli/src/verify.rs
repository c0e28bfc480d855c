use klab_core::arith::{harmonic, is_squarefree, sigma};
use klab_core::holproj::{decompose, project, DEFAULT_M_FIT};
use klab_core::kronecker::{k1_closed_form, k1_full_modular, k1_gamma0_squarefree};
use klab_core::qseries::{delta_qexp, s24_basis};
use klab_core::real::{cabs, e_of};
use klab_core::specfun::{
    exp_int_e1, fd_derivative, fd_dz, fd_dzbar, fd_laplacian, kbessel, kbessel_s_derivative_at_1,
    log_moment_integral, whittaker_star,
};
use klab_core::{FdConfig, GroupSpec, HalfPlanePoint, Real};
use num_bigint::BigInt;
use num_complex::Complex;
use serde_json::{json, Value};

use crate::args::Suite;
use crate::output::{CliResult, Output};

pub struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn failed(name: impl Into<String>, e: impl std::fmt::Display) -> Check {
    check(name, false, format!("error: {e}"))
}

fn rel_check(name: String, got: f64, want: f64, tol: f64) -> Check {
    let err = ((got - want) / want).abs();
    check(
        name,
        err <= tol,
        format!("relative error {err:.3e} (limit {tol:.0e})"),
    )
}

pub fn run<R: Real>(suite: Suite) -> CliResult<(Output, bool)> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Arith | Suite::All) {
        arith_suite(&mut checks);
    }
    if matches!(suite, Suite::Specfun | Suite::All) {
        specfun_suite::<R>(&mut checks);
    }
    if matches!(suite, Suite::Kronecker | Suite::All) {
        kronecker_suite::<R>(&mut checks);
    }
    if matches!(suite, Suite::Holproj | Suite::All) {
        holproj_suite::<R>(&mut checks);
    }
    let passed = checks.iter().all(|c| c.passed);
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                if c.passed { "PASS" } else { "FAIL" }.to_string(),
                c.name.clone(),
                c.detail.clone(),
            ]
        })
        .collect();
    let json = json!({
        "suite": format!("{suite:?}").to_lowercase(),
        "precision": R::NAME,
        "passed": passed,
        "checks": checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect::<Vec<Value>>(),
    });
    Ok((
        Output::table(json, &["status", "check", "detail"], rows),
        passed,
    ))
}

fn arith_suite(out: &mut Vec<Check>) {
    let delta = delta_qexp(500);
    let p = BigInt::from(691);
    let bad = (1..=500usize).find(|&n| {
        let tau = delta.exact_coeff(n).unwrap().to_integer();
        let s = sigma(11, n as i64).unwrap();
        ((tau - s) % &p) != BigInt::from(0)
    });
    out.push(check(
        "ramanujan congruence tau(n) = sigma_11(n) mod 691, n <= 500",
        bad.is_none(),
        bad.map(|n| format!("fails at n = {n}")).unwrap_or_default(),
    ));
    let t2 = delta.exact_coeff(2).unwrap().to_integer();
    let t3 = delta.exact_coeff(3).unwrap().to_integer();
    out.push(check(
        "tau(2) = -24, tau(3) = 252",
        t2 == BigInt::from(-24) && t3 == BigInt::from(252),
        format!("tau(2) = {t2}, tau(3) = {t3}"),
    ));
}

fn specfun_suite<R: Real>(out: &mut Vec<Check>) {
    match exp_int_e1(R::one()) {
        Ok(v) => out.push(rel_check(
            "E1(1)".into(),
            v.to_f64(),
            0.219_383_934_395_520_27,
            1e-15,
        )),
        Err(e) => out.push(failed("E1(1)", e)),
    }
    let y = R::one();
    match kbessel(R::one(), y) {
        Ok(v) => {
            let want = (-2.0 * std::f64::consts::PI).exp() / 2.0;
            out.push(rel_check(
                "K_{1/2}(2 pi) closed form".into(),
                v.to_f64(),
                want,
                1e-10,
            ));
        }
        Err(e) => out.push(failed("K_{1/2}(2 pi) closed form", e)),
    }

    for y in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let name = format!("s-derivative of K_{{s-1/2}}(2 pi y) at s = 1, y = {y}");
        let yr = R::from_f64(y);
        let res = fd_derivative(|s: R| kbessel(s, yr), R::one(), 1e-4, 3)
            .and_then(|fd| Ok((fd.value, kbessel_s_derivative_at_1(yr)?)));
        match res {
            Ok((fd, exact)) => out.push(rel_check(name, fd.to_f64(), exact.to_f64(), 1e-6)),
            Err(e) => out.push(failed(name, e)),
        }
    }

    let cfg = FdConfig::default();
    for n in [1i64, 2] {
        for (x, y) in [(0.0, 1.0), (0.3, 0.7)] {
            let z = HalfPlanePoint::<R>::from_f64(x, y).unwrap();
            let tag = format!("n = {n}, z = {x}+{y}i");
            let star = |w: &HalfPlanePoint<R>| whittaker_star(n, w);
            let nr = R::from_i64(n);
            let enz = e_of(nr * z.x()) * (-(R::pi().mul_pow2(1) * nr * z.y())).exp();
            let i_over_2y = Complex::new(R::zero(), z.y().mul_pow2(1).recip());
            let two_pi_i_n = Complex::new(R::zero(), R::pi().mul_pow2(1) * nr);
            let cases: [(&str, _, klab_core::Result<Complex<R>>); 3] = [
                (
                    "d/dz W*",
                    fd_dz(star, &z, &cfg).map(|e| e.value),
                    Ok(i_over_2y * enz),
                ),
                (
                    "d/dzbar W*",
                    fd_dzbar(star, &z, &cfg).map(|e| e.value),
                    whittaker_star(n, &z).map(|w| -(i_over_2y * enz) + two_pi_i_n * w),
                ),
                (
                    "laplacian W*",
                    fd_laplacian(star, &z, &cfg).map(|e| e.value),
                    Ok(-enz),
                ),
            ];
            for (what, got, want) in cases {
                let name = format!("{what} identity, {tag}");
                match (got, want) {
                    (Ok(g), Ok(w)) => {
                        let err = (cabs(g - w) / cabs(w)).to_f64();
                        out.push(check(
                            name,
                            err <= 1e-5,
                            format!("relative error {err:.3e} (limit 1e-5)"),
                        ));
                    }
                    (Err(e), _) | (_, Err(e)) => out.push(failed(name, e)),
                }
            }
        }
    }

    let mut fact = 1.0f64;
    for n in 0..=10u32 {
        if n > 0 {
            fact *= n as f64;
        }
        let name = format!("log-moment integral n = {n}");
        let want = fact * (f64::from_ratio(&harmonic(n as u64)) - 0.577_215_664_901_532_9);
        match log_moment_integral::<R>(n, 1e-12) {
            Ok(q) => out.push(rel_check(name, q.value.to_f64(), want, 1e-8)),
            Err(e) => out.push(failed(name, e)),
        }
    }
}

fn kronecker_suite<R: Real>(out: &mut Vec<Check>) {
    let mut worst: f64 = 0.0;
    let mut err = None;
    for n in 2..=30u64 {
        if !is_squarefree(n) {
            continue;
        }
        match k1_gamma0_squarefree::<R>(n, 4) {
            Ok(g) => {
                let v = GroupSpec::gamma0(n).unwrap().volume::<R>();
                worst = worst
                    .max((g.y_coeff() - R::one()).abs().to_f64())
                    .max((g.logy_coeff() + v.recip()).abs().to_f64());
            }
            Err(e) => err = Some(e),
        }
    }
    out.push(match err {
        Some(e) => failed("Gamma0(N) expansion shape, N <= 30", e),
        None => check(
            "Gamma0(N) expansion shape, N <= 30",
            worst <= 1e-14,
            format!("max deviation {worst:.3e} (limit 1e-14)"),
        ),
    });

    let full = k1_full_modular::<R>(200).expect("n_max >= 1");
    for p in [2u64, 3, 5, 7, 11] {
        let name = format!("Gamma0({p}) prime formula");
        match k1_gamma0_squarefree::<R>(p, 200) {
            Ok(g) => {
                let d = R::from_u64(p * p - 1);
                let worst = (1..=200i64)
                    .map(|n| {
                        let mut want = -full.k(n) / d;
                        if n % p as i64 == 0 {
                            want += R::from_u64(p) / d * full.k(n / p as i64);
                        }
                        (g.k(n) - want).abs().to_f64()
                    })
                    .fold(0.0, f64::max);
                out.push(check(
                    name,
                    worst <= 1e-13,
                    format!("max deviation {worst:.3e} (limit 1e-13)"),
                ));
            }
            Err(e) => out.push(failed(name, e)),
        }
    }

    let k1 = k1_full_modular::<R>(80).expect("n_max >= 1");
    let mut worst: f64 = 0.0;
    let mut err = None;
    for j in 0..20 {
        let x = -0.5 + 0.05 * j as f64 + 0.013;
        let y = 0.5 + 2.5 * ((j * 7) % 20) as f64 / 19.0;
        let z = HalfPlanePoint::<R>::from_f64(x, y).unwrap();
        match (k1.eval(&z), k1_closed_form(&z, 80)) {
            (Ok(a), Ok(b)) => {
                worst = worst.max((a.value - b.value).abs().to_f64() - a.bound - b.bound)
            }
            (Err(e), _) | (_, Err(e)) => err = Some(e),
        }
    }
    out.push(match err {
        Some(e) => failed("Fourier K1 vs closed form, 20 points", e),
        None => check(
            "Fourier K1 vs closed form, 20 points",
            worst <= 1e-9,
            format!("max excess over tail bounds {worst:.3e} (limit 1e-9)"),
        ),
    });

    let cfg = FdConfig::default();
    let points = [(0.0, 1.2), (0.1, 0.8), (-0.3, 1.5), (0.45, 0.9), (0.2, 2.0)];
    let k1 = k1_full_modular::<R>(150).expect("n_max >= 1");
    for (x, y) in points {
        let z = HalfPlanePoint::<R>::from_f64(x, y).unwrap();
        let name = format!("laplacian K1 = -3/pi at {x}+{y}i");
        match fd_laplacian(|w| Ok(Complex::new(k1.eval(w)?.value, R::zero())), &z, &cfg) {
            Ok(l) => out.push(rel_check(
                name,
                l.value.re.to_f64(),
                -3.0 / std::f64::consts::PI,
                1e-4,
            )),
            Err(e) => out.push(failed(name, e)),
        }
    }
    let g6 = k1_gamma0_squarefree::<R>(6, 400).expect("6 is square-free");
    let z = HalfPlanePoint::<R>::from_f64(0.2, 0.7).unwrap();
    let name = "laplacian K1 = -1/V for Gamma0(6)";
    match fd_laplacian(|w| Ok(Complex::new(g6.eval(w)?.value, R::zero())), &z, &cfg) {
        Ok(l) => out.push(rel_check(
            name.into(),
            l.value.re.to_f64(),
            -1.0 / (4.0 * std::f64::consts::PI),
            1e-4,
        )),
        Err(e) => out.push(failed(name, e)),
    }
}

fn holproj_suite<R: Real>(out: &mut Vec<Check>) {
    let (d2, dg) = s24_basis(400);
    let published = [
        ("delta2", &d2, -0.852857, 0.0000214526, 5e-7, 5e-11),
        ("delta_g12", &dg, 0.220305, -0.591762, 5e-7, 5e-7),
    ];
    for (label, f, c1, c2, t1, t2) in published {
        let res = project::<R>(f, DEFAULT_M_FIT, 1e-10).and_then(|p| decompose(&p, DEFAULT_M_FIT));
        match res {
            Ok(dc) => {
                let e1 = (dc.c_delta2.to_f64() - c1).abs();
                let e2 = (dc.c_delta_g12.to_f64() - c2).abs();
                out.push(check(
                    format!("published decomposition of {label}"),
                    e1 <= t1 && e2 <= t2,
                    format!(
                        "c = ({}, {}), errors {e1:.2e}, {e2:.2e}",
                        dc.c_delta2.to_sci_string(12),
                        dc.c_delta_g12.to_sci_string(12)
                    ),
                ));
                out.push(check(
                    format!("S24 membership residual of {label}"),
                    dc.residual <= 1e-6 && dc.is_consistent(),
                    format!(
                        "residual {:.3e}, 2x2 gap {:.3e}",
                        dc.residual, dc.discrepancy
                    ),
                ));
            }
            Err(e) => out.push(failed(format!("published decomposition of {label}"), e)),
        }
    }
}
