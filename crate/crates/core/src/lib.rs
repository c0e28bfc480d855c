//! Fourier-side data of the Kronecker limit formula.
//!
//! Arithmetic functions, q-expansions of `Δ`, `G12` and the weight-24 cusp
//! forms, the first-order limit function `K1` for `PSL2(Z)` and square-free
//! `Gamma0(N)`, the special functions that enter its second-order analogue,
//! and the holomorphic projection of `f·K1` in weight 24.
//!
//! Floating computations are generic over [`Real`], implemented by `f64`,
//! double-double [`Dd`] and quad-double [`Qd`].

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod arith;
pub mod bound;
pub mod error;
pub mod holproj;
pub mod kronecker;
pub mod qseries;
pub mod real;
pub mod specfun;

pub use arith::{GroupKind, GroupSpec};
pub use bound::{Estimate, PowerBound};
pub use error::{Error, Result};
pub use holproj::{Decomposition, FormId, ProjectionCoeffs};
pub use kronecker::{K2Coefficients, K2Source, KroneckerLimit};
pub use qseries::{CoefficientKind, HalfPlanePoint, QExpansion, QExpansionJson};
pub use real::{CompensatedSum, Dd, Precision, Qd, Real};
pub use specfun::FdConfig;
