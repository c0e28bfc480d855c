//! Finite-difference operators on the upper half-plane, with Richardson
//! extrapolation over successive step halvings.

use num_complex::Complex;

use crate::bound::Estimate;
use crate::error::{Error, Result};
use crate::qseries::HalfPlanePoint;
use crate::real::{cabs, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    /// Base step as a multiple of `y`.
    pub step: f64,
    pub richardson_levels: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            step: 1e-3,
            richardson_levels: 3,
        }
    }
}

impl FdConfig {
    pub fn new(step: f64, richardson_levels: usize) -> Result<Self> {
        let cfg = FdConfig {
            step,
            richardson_levels,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Domain(format!(
                "fd step must be positive, got {}",
                self.step
            )));
        }
        if !(1..=4).contains(&self.richardson_levels) {
            return Err(Error::Domain(format!(
                "richardson_levels must be in 1..=4, got {}",
                self.richardson_levels
            )));
        }
        Ok(())
    }

    fn base_step<R: Real>(&self, z: &HalfPlanePoint<R>) -> Result<R> {
        self.validate()?;
        if self.step >= 1.0 {
            return Err(Error::Domain(format!(
                "fd stencil with step {}·y leaves the upper half-plane",
                self.step
            )));
        }
        Ok(z.y() * R::from_f64(self.step))
    }
}

/// Richardson extrapolation of estimates with `O(h²)` error at steps
/// `h, h/2, h/4, ...`; the bound is the last correction.
fn richardson<R: Real>(levels: Vec<Complex<R>>) -> Estimate<Complex<R>> {
    let mut row = levels.clone();
    let mut last_correction = f64::INFINITY;
    let mut factor = R::one();
    for _ in 1..levels.len() {
        factor *= R::from_f64(4.0);
        let denom = factor - R::one();
        let next: Vec<Complex<R>> = (1..row.len())
            .map(|k| row[k] + (row[k] - row[k - 1]) / denom)
            .collect();
        last_correction = cabs(next[next.len() - 1] - row[row.len() - 1]).to_f64();
        row = next;
    }
    Estimate::new(row[row.len() - 1], last_correction)
}

fn shift<R: Real>(z: &HalfPlanePoint<R>, dx: R, dy: R) -> Result<HalfPlanePoint<R>> {
    HalfPlanePoint::new(z.x() + dx, z.y() + dy)
}

/// `Δf = -y²(f_xx + f_yy)` by the five-point stencil.
pub fn fd_laplacian<R, F>(
    f: F,
    z: &HalfPlanePoint<R>,
    cfg: &FdConfig,
) -> Result<Estimate<Complex<R>>>
where
    R: Real,
    F: Fn(&HalfPlanePoint<R>) -> Result<Complex<R>>,
{
    let mut h = cfg.base_step(z)?;
    let centre = f(z)?;
    let four = R::from_f64(4.0);
    let y2 = z.y() * z.y();
    let mut levels = Vec::with_capacity(cfg.richardson_levels);
    for _ in 0..cfg.richardson_levels {
        let zero = R::zero();
        let sum = f(&shift(z, h, zero)?)?
            + f(&shift(z, -h, zero)?)?
            + f(&shift(z, zero, h)?)?
            + f(&shift(z, zero, -h)?)?
            - centre * four;
        levels.push(-(sum * (y2 / (h * h))));
        h = h.mul_pow2(-1);
    }
    Ok(richardson(levels))
}

type Gradient<R> = (Estimate<Complex<R>>, Estimate<Complex<R>>);

fn gradient<R, F>(f: &F, z: &HalfPlanePoint<R>, cfg: &FdConfig) -> Result<Gradient<R>>
where
    R: Real,
    F: Fn(&HalfPlanePoint<R>) -> Result<Complex<R>>,
{
    let mut h = cfg.base_step(z)?;
    let zero = R::zero();
    let mut dx = Vec::with_capacity(cfg.richardson_levels);
    let mut dy = Vec::with_capacity(cfg.richardson_levels);
    for _ in 0..cfg.richardson_levels {
        let inv = (h.mul_pow2(1)).recip();
        dx.push((f(&shift(z, h, zero)?)? - f(&shift(z, -h, zero)?)?) * inv);
        dy.push((f(&shift(z, zero, h)?)? - f(&shift(z, zero, -h)?)?) * inv);
        h = h.mul_pow2(-1);
    }
    Ok((richardson(dx), richardson(dy)))
}

fn times_i<R: Real>(w: Complex<R>) -> Complex<R> {
    Complex::new(-w.im, w.re)
}

fn wirtinger<R, F>(
    f: F,
    z: &HalfPlanePoint<R>,
    cfg: &FdConfig,
    sign: R,
) -> Result<Estimate<Complex<R>>>
where
    R: Real,
    F: Fn(&HalfPlanePoint<R>) -> Result<Complex<R>>,
{
    let (gx, gy) = gradient(&f, z, cfg)?;
    let half = R::from_f64(0.5);
    let value = (gx.value + times_i(gy.value) * sign) * half;
    Ok(Estimate::new(value, 0.5 * (gx.bound + gy.bound)))
}

/// `d/dz = (∂x - i∂y)/2`.
pub fn fd_dz<R, F>(f: F, z: &HalfPlanePoint<R>, cfg: &FdConfig) -> Result<Estimate<Complex<R>>>
where
    R: Real,
    F: Fn(&HalfPlanePoint<R>) -> Result<Complex<R>>,
{
    wirtinger(f, z, cfg, -R::one())
}

/// `d/dz̄ = (∂x + i∂y)/2`.
pub fn fd_dzbar<R, F>(f: F, z: &HalfPlanePoint<R>, cfg: &FdConfig) -> Result<Estimate<Complex<R>>>
where
    R: Real,
    F: Fn(&HalfPlanePoint<R>) -> Result<Complex<R>>,
{
    wirtinger(f, z, cfg, R::one())
}

/// Central-difference derivative of a real function of one variable.
pub fn fd_derivative<R, F>(f: F, at: R, step: f64, levels: usize) -> Result<Estimate<R>>
where
    R: Real,
    F: Fn(R) -> Result<R>,
{
    if !(step > 0.0) || !(1..=4).contains(&levels) {
        return Err(Error::Domain(
            "fd_derivative needs step > 0 and 1..=4 levels".into(),
        ));
    }
    let mut h = R::from_f64(step);
    let mut ests = Vec::with_capacity(levels);
    for _ in 0..levels {
        let d = (f(at + h)? - f(at - h)?) / h.mul_pow2(1);
        ests.push(Complex::new(d, R::zero()));
        h = h.mul_pow2(-1);
    }
    Ok(richardson(ests).map(|c| c.re))
}
