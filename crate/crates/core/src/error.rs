use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "uncertainty relation violated: det sigma = {det:e} is below hbar^2/4 = {bound:e}"
    )]
    UncertaintyViolation { det: f64, bound: f64 },

    #[error(
        "overdamped regime: omega = {omega} must exceed |mu| = {mu} \
         (Omega^2 = omega^2 - mu^2 = {omega_sq:e}); closed-form dynamics and \
         purity-preserving coefficients exist only for omega > |mu|"
    )]
    OverdampedRegime { omega: f64, mu: f64, omega_sq: f64 },

    #[error(
        "no stationary state without friction: lambda = 0 leaves the asymptotic \
         variances undefined"
    )]
    NoStationaryState,

    #[error(
        "fundamental constraint violated: D_pp*D_qq - D_pq^2 - lambda^2*hbar^2/4 = {residual:e} < 0"
    )]
    FundamentalConstraint { residual: f64 },

    #[error(
        "diffusion coefficients are off the purity-preserving manifold: \
         D_pp*D_qq - D_pq^2 = {det:e}, expected hbar^2*lambda^2/4 = {target:e}"
    )]
    NotOnPureFamily { det: f64, target: f64 },

    #[error("step size dt = {dt:e} exceeds the stability limit {limit:e}")]
    StepSizeTooLarge { dt: f64, limit: f64 },

    #[error(
        "phase-space grid too small along {axis}: need halfwidth covering {required:e}, have {available:e}"
    )]
    GridTooSmall {
        axis: &'static str,
        required: f64,
        available: f64,
    },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error(transparent)]
    Config(#[from] crate::cli::ConfigError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code: 2 config error, 3 physics-constraint violation,
    /// 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(e) => e.exit_code(),
            Error::InvalidParameter { .. }
            | Error::UncertaintyViolation { .. }
            | Error::OverdampedRegime { .. }
            | Error::NoStationaryState
            | Error::FundamentalConstraint { .. }
            | Error::NotOnPureFamily { .. } => 3,
            Error::StepSizeTooLarge { .. }
            | Error::GridTooSmall { .. }
            | Error::NumericalFailure(_)
            | Error::Io(_) => 4,
        }
    }
}
