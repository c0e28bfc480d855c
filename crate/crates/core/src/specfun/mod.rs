//! Special functions: incomplete gamma, K-Bessel, Whittaker functions, and
//! finite-difference operators for checking identities among them.

pub mod bessel;
pub mod e1;
pub mod fd;
pub mod gamma;
pub mod quad;

pub use bessel::{
    kbessel, kbessel_integral, kbessel_s_derivative_at_1, whittaker_star, whittaker_w,
};
pub use e1::{exp_int_e1, exp_int_e1_scaled};
pub use fd::{fd_derivative, fd_dz, fd_dzbar, fd_laplacian, FdConfig};
pub use gamma::{gamma, ln_gamma};
pub use quad::{exp_sinh, QuadResult};

use crate::error::{Error, Result};
use crate::real::Real;

/// `∫_0^∞ y^n log y e^{-y} dy` by quadrature; equals `n!(H_n - γ)`.
pub fn log_moment_integral<R: Real>(n: u32, tol: f64) -> Result<QuadResult<R>> {
    if n > 170 {
        return Err(Error::Domain(format!("log moment order {n} too large")));
    }
    exp_sinh(|y: R| y.powi(n as i32) * y.ln() * (-y).exp(), tol)
}
