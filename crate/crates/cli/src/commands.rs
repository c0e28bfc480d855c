use klab_core::arith::{harmonic, mobius, sigma};
use klab_core::holproj::{decompose, dm_weight24, project};
use klab_core::kronecker::{
    k1_closed_form, k1_full_modular, k1_gamma0_squarefree, l_minus_partial, l_plusplus_partial,
};
use klab_core::qseries::{delta_qexp, g12_qexp, s24_basis};
use klab_core::specfun::{
    exp_int_e1, kbessel, kbessel_s_derivative_at_1, whittaker_star, whittaker_w,
};
use klab_core::{Error, Estimate, FormId, HalfPlanePoint, KroneckerLimit, QExpansion, Real};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::args::{
    ArithCmd, CuspForm24, Form, GlobalOpts, Group, GroupOpts, HolprojCmd, K1Cmd, LseriesCmd,
    SpecfunCmd,
};
use crate::output::{estimate, real, CliError, CliResult, Output};

pub fn qexp(form: Form, terms: usize, opts: &GlobalOpts) -> CliResult<Output> {
    if terms > opts.max_terms {
        return Err(CliError::usage(format!(
            "--terms {terms} exceeds --max-terms {}",
            opts.max_terms
        )));
    }
    let f = match form {
        Form::Delta => delta_qexp(terms),
        Form::G12 => g12_qexp(terms),
        Form::Delta2 => s24_basis(terms).0,
        Form::DeltaG12 => s24_basis(terms).1,
    };
    let j = f.to_json();
    let rows = j
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| vec![n.to_string(), a.clone()])
        .collect();
    let mut json = serde_json::to_value(&j).expect("serializable");
    json["form"] = Value::String(form_name(form).into());
    Ok(Output::table(json, &["n", "a_n"], rows))
}

fn form_name(form: Form) -> &'static str {
    match form {
        Form::Delta => "delta",
        Form::G12 => "g12",
        Form::Delta2 => "delta2",
        Form::DeltaG12 => "delta_g12",
    }
}

pub fn arith(cmd: &ArithCmd) -> CliResult<Output> {
    let json = match *cmd {
        ArithCmd::Sigma { l, n } => {
            json!({ "function": "sigma", "l": l, "n": n, "value": sigma(l, n)?.to_string() })
        }
        ArithCmd::Mobius { n } => json!({ "function": "mobius", "n": n, "value": mobius(n)? }),
        ArithCmd::Harmonic { n } => {
            json!({ "function": "harmonic", "n": n, "value": harmonic(n).to_string() })
        }
    };
    Ok(Output::value(json))
}

fn point<R: Real>(x: f64, y: f64) -> CliResult<HalfPlanePoint<R>> {
    Ok(HalfPlanePoint::from_f64(x, y)?)
}

pub fn specfun<R: Real>(cmd: &SpecfunCmd) -> CliResult<Output> {
    let json = match *cmd {
        SpecfunCmd::E1 { x } => {
            json!({ "function": "e1", "x": x, "value": real(exp_int_e1(R::from_f64(x))?) })
        }
        SpecfunCmd::Kbessel { s, y } => {
            json!({ "function": "kbessel", "s": s, "y": y, "value": real(kbessel(R::from_f64(s), R::from_f64(y))?) })
        }
        SpecfunCmd::KbesselDs { y } => {
            json!({ "function": "kbessel_s_derivative_at_1", "y": y, "value": real(kbessel_s_derivative_at_1(R::from_f64(y))?) })
        }
        SpecfunCmd::Whittaker { s, n, x, y } => {
            let w = whittaker_w(R::from_f64(s), n, &point::<R>(x, y)?)?;
            json!({ "function": "whittaker_w", "s": s, "n": n, "x": x, "y": y, "re": real(w.re), "im": real(w.im) })
        }
        SpecfunCmd::Wstar { n, x, y } => {
            let w = whittaker_star(n, &point::<R>(x, y)?)?;
            json!({ "function": "whittaker_star", "n": n, "x": x, "y": y, "re": real(w.re), "im": real(w.im) })
        }
    };
    Ok(Output::value(json))
}

fn build_k1<R: Real>(g: GroupOpts, n_max: usize) -> CliResult<KroneckerLimit<R>> {
    match (g.group, g.level) {
        (Group::Sl2z, None) | (Group::Sl2z, Some(1)) => Ok(k1_full_modular(n_max)?),
        (Group::Sl2z, Some(_)) => Err(CliError::usage("--level applies to --group gamma0 only")),
        (Group::Gamma0, Some(level)) => Ok(k1_gamma0_squarefree(level, n_max)?),
        (Group::Gamma0, None) => Err(CliError::usage("--group gamma0 needs --level")),
    }
}

pub fn k1<R: Real>(cmd: &K1Cmd, opts: &GlobalOpts) -> CliResult<Output> {
    match *cmd {
        K1Cmd::Coeffs { group, max_n } => {
            if max_n > opts.max_terms {
                return Err(CliError::usage(format!(
                    "--max-n {max_n} exceeds --max-terms {}",
                    opts.max_terms
                )));
            }
            let k1 = build_k1::<R>(group, max_n)?;
            let rows = k1
                .k_table()
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    vec![
                        (i + 1).to_string(),
                        k.to_sci_string(crate::output::digits::<R>()),
                    ]
                })
                .collect();
            Ok(Output::table(
                k1.to_json(crate::output::digits::<R>()),
                &["n", "k_n"],
                rows,
            ))
        }
        K1Cmd::Eval { group, x, y, max_n } => {
            let z = point::<R>(x, y)?;
            let k1 = match max_n {
                Some(n) => build_k1::<R>(group, n)?,
                None => {
                    let probe = build_k1::<R>(group, 1)?;
                    match probe.eval_to(&z, opts.tol) {
                        Err(Error::InsufficientTerms { required, .. })
                            if required <= opts.max_terms =>
                        {
                            build_k1::<R>(group, required)?
                        }
                        Err(e) => return Err(e.into()),
                        Ok(_) => probe,
                    }
                }
            };
            let value = k1.eval_to(&z, opts.tol)?;
            let mut json = json!({
                "group": k1.group(),
                "x": x,
                "y": y,
                "max_n": k1.n_max(),
                "k1": estimate(&value),
                "gamma0_constant": k1.gamma0_constant().map(real).unwrap_or(Value::Null),
            });
            if group.group == Group::Sl2z {
                let order = k1.n_max().max(8);
                json["closed_form"] = estimate(&k1_closed_form(&z, order)?);
            }
            Ok(Output::value(json))
        }
    }
}

fn cusp_form(form: CuspForm24, order: usize) -> QExpansion {
    let (d2, dg) = s24_basis(order);
    match form {
        CuspForm24::Delta2 => d2,
        CuspForm24::DeltaG12 => dg,
    }
}

fn cusp_form_id(form: CuspForm24) -> FormId {
    match form {
        CuspForm24::Delta2 => FormId::Delta2,
        CuspForm24::DeltaG12 => FormId::DeltaG12,
    }
}

/// `a_n ↦ a_n / n^k`, keeping coefficients exact.
fn normalized(f: &QExpansion, k: u32) -> CliResult<QExpansion> {
    let coeffs = (0..=f.truncation_order())
        .map(|n| {
            let a = f.exact_coeff(n).expect("exact basis form").clone();
            if n == 0 || k == 0 {
                a
            } else {
                a / BigRational::from_integer(BigInt::from(n).pow(k))
            }
        })
        .collect();
    Ok(QExpansion::exact(coeffs, None)?)
}

pub fn lseries<R: Real>(cmd: &LseriesCmd, opts: &GlobalOpts) -> CliResult<Output> {
    let (o, which) = match cmd {
        LseriesCmd::Plusplus(o) => (o, "plusplus"),
        LseriesCmd::Minus(o) => (o, "minus"),
    };
    if o.terms > opts.max_terms {
        return Err(CliError::usage(format!(
            "--terms {} exceeds --max-terms {}",
            o.terms, opts.max_terms
        )));
    }
    let f = normalized(&cusp_form(o.form, o.terms), o.normalize)?;
    let k1 = build_k1::<R>(o.group, 16)?;
    let s = R::from_f64(o.s);
    let e: Estimate<R> = match cmd {
        LseriesCmd::Plusplus(_) => l_plusplus_partial(&f, &k1, o.m, s, o.terms)?,
        LseriesCmd::Minus(_) => l_minus_partial(&f, &k1, o.m, s, o.terms)?,
    };
    Ok(Output::value(json!({
        "series": which,
        "form": cusp_form_id(o.form),
        "normalize": o.normalize,
        "group": k1.group(),
        "m": o.m,
        "s": o.s,
        "terms": o.terms,
        "partial_sum": real(e.value),
        "remainder_bound": e.bound,
    })))
}

/// Runs `job` on the form at growing truncation orders until it stops
/// asking for more coefficients, up to `max_terms`.
fn with_enough_terms<T>(
    form: CuspForm24,
    max_terms: usize,
    mut job: impl FnMut(&QExpansion) -> klab_core::Result<T>,
) -> CliResult<T> {
    let mut order = 200.min(max_terms);
    loop {
        let f = cusp_form(form, order);
        match job(&f) {
            Err(Error::InsufficientTerms { required, .. }) if order < max_terms => {
                order = required.max(2 * order).min(max_terms);
            }
            other => return Ok(other?),
        }
    }
}

pub fn holproj<R: Real>(cmd: &HolprojCmd, opts: &GlobalOpts) -> CliResult<Output> {
    let tol = opts.tol;
    let digits = crate::output::digits::<R>();
    match *cmd {
        HolprojCmd::Dm { form, m } => {
            let (d, cutoff) =
                with_enough_terms(form, opts.max_terms, |f| dm_weight24::<R>(f, m, tol))?;
            Ok(Output::value(json!({
                "form": cusp_form_id(form),
                "m": m,
                "tol": tol,
                "d": real(d.value),
                "tail_error": d.bound,
                "truncation": cutoff,
            })))
        }
        HolprojCmd::Project { form, m_max } => {
            let p = with_enough_terms(form, opts.max_terms, |f| project::<R>(f, m_max, tol))?
                .with_form_id(cusp_form_id(form));
            let rows =
                p.d.iter()
                    .zip(&p.tail_error)
                    .enumerate()
                    .map(|(i, (d, e))| {
                        vec![
                            (i + 1).to_string(),
                            d.to_sci_string(digits),
                            format!("{e:e}"),
                        ]
                    })
                    .collect();
            Ok(Output::table(
                p.to_json(digits, None),
                &["m", "d_m", "tail_error"],
                rows,
            ))
        }
        HolprojCmd::Decompose { form, m_fit } => {
            let p =
                with_enough_terms(form, opts.max_terms, |f| project::<R>(f, m_fit.max(2), tol))?
                    .with_form_id(cusp_form_id(form));
            let dc = decompose(&p, m_fit)?;
            if !dc.is_consistent() {
                return Err(CliError {
                    code: 3,
                    message: format!(
                        "least-squares and 2x2 coordinates disagree (relative gap {:e})",
                        dc.discrepancy
                    ),
                });
            }
            Ok(Output::value(p.to_json(digits, Some(&dc))))
        }
    }
}
