use clap::{Args, Parser, Subcommand, ValueEnum};
use klab_core::Precision;

#[derive(Debug, Parser)]
#[command(
    name = "klab",
    version,
    about = "Kronecker limit functions, q-expansions and holomorphic projections"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Working precision: double, extended (double-double) or high (quad-double).
    #[arg(long, global = true, env = "KLAB_PRECISION", default_value = "extended", value_parser = parse_precision)]
    pub precision: Precision,

    /// Relative tolerance for truncated sums and projections.
    #[arg(long, global = true, env = "KLAB_TOL", default_value_t = 1e-10)]
    pub tol: f64,

    /// Largest q-expansion length or Fourier cutoff the tool will build on its own.
    #[arg(long, global = true, env = "KLAB_MAX_TERMS", default_value_t = 5000)]
    pub max_terms: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    s.parse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Delta,
    G12,
    Delta2,
    #[value(name = "delta-g12", alias = "delta_g12")]
    DeltaG12,
}

/// Weight-24 cusp forms accepted by the projection and L-series commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CuspForm24 {
    Delta2,
    #[value(name = "delta-g12", alias = "delta_g12")]
    DeltaG12,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Group {
    #[value(alias = "psl2z", alias = "full")]
    Sl2z,
    Gamma0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Arith,
    Specfun,
    Kronecker,
    Holproj,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-expansion coefficients of Δ, G12, Δ² or ΔG12.
    Qexp {
        #[arg(value_enum)]
        form: Form,
        /// Truncation order N (coefficients a_0..a_N).
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Arithmetic functions.
    #[command(subcommand)]
    Arith(ArithCmd),
    /// Special functions.
    #[command(subcommand)]
    Specfun(SpecfunCmd),
    /// First-order Kronecker limit function.
    #[command(subcommand)]
    K1(K1Cmd),
    /// Partial sums of L++_m(s) and L-_m(s) in the region s > 3.
    #[command(subcommand)]
    Lseries(LseriesCmd),
    /// Holomorphic projection coefficients in weight 24.
    #[command(subcommand)]
    Holproj(HolprojCmd),
    /// Run a verification suite; exit code 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum ArithCmd {
    /// σ_l(n).
    Sigma {
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long)]
        n: i64,
    },
    /// μ(n).
    Mobius {
        #[arg(long)]
        n: i64,
    },
    /// H_n as an exact fraction.
    Harmonic {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpecfunCmd {
    /// E1(x) = Γ(0, x).
    E1 {
        #[arg(long)]
        x: f64,
    },
    /// K_{s-1/2}(2πy).
    Kbessel {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        y: f64,
    },
    /// ∂/∂s K_{s-1/2}(2πy) at s = 1.
    KbesselDs {
        #[arg(long)]
        y: f64,
    },
    /// W_s(nz).
    Whittaker {
        #[arg(long)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// W*(nz).
    Wstar {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
}

#[derive(Debug, Args, Clone, Copy)]
pub struct GroupOpts {
    #[arg(long, value_enum, default_value_t = Group::Sl2z)]
    pub group: Group,
    /// Level N for gamma0 (square-free).
    #[arg(long)]
    pub level: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum K1Cmd {
    /// Fourier data: K, V and k(n) for 1 <= n <= max-n.
    Coeffs {
        #[command(flatten)]
        group: GroupOpts,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// K1(x + iy); the cutoff defaults to the smallest one meeting --tol.
    Eval {
        #[command(flatten)]
        group: GroupOpts,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        max_n: Option<usize>,
    },
}

#[derive(Debug, Args, Clone, Copy)]
pub struct LseriesOpts {
    #[arg(long, value_enum)]
    pub form: CuspForm24,
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 4.0)]
    pub s: f64,
    /// Partial sum over n <= terms.
    #[arg(long, default_value_t = 200)]
    pub terms: usize,
    /// Replace a_n by a_n / n^k before summing.
    #[arg(long, default_value_t = 11)]
    pub normalize: u32,
    #[command(flatten)]
    pub group: GroupOpts,
}

#[derive(Debug, Subcommand)]
pub enum LseriesCmd {
    /// Σ_{n>m} a_n k(m-n) / n^s.
    Plusplus(LseriesOpts),
    /// Σ_{n>=1} (a_n/n) k(-m-n) / (m+n)^{s-1}.
    Minus(LseriesOpts),
}

#[derive(Debug, Subcommand)]
pub enum HolprojCmd {
    /// A single coefficient d_m.
    Dm {
        #[arg(long, value_enum)]
        form: CuspForm24,
        #[arg(long)]
        m: usize,
    },
    /// d_1, ..., d_{m-max}.
    Project {
        #[arg(long, value_enum)]
        form: CuspForm24,
        #[arg(long, default_value_t = 10)]
        m_max: usize,
    },
    /// Coordinates of the projection in the basis {Δ², ΔG12}.
    Decompose {
        #[arg(long, value_enum)]
        form: CuspForm24,
        #[arg(long, default_value_t = 10)]
        m_fit: usize,
    },
}
