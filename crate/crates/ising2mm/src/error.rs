use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
///
/// Variants are grouped by origin: domain/usage errors (rejected inputs),
/// solver failures (a numerical routine could not finish its job), and
/// certificate failures (a mathematical identity that is supposed to hold
/// was violated beyond tolerance).
#[derive(Debug, Error)]
pub enum Error {
    /// Input lies outside the mathematical domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The continuation in `t` hit the fold point of the implicit equation
    /// before reaching the requested target coupling.
    #[error("branch point reached: t_cr = {t_cr:.16e} blocks continuation to t = {t_target:.16e}")]
    BranchPointReached { t_cr: f64, t_target: f64 },

    /// An iterative solver exhausted its iteration budget.
    #[error("no convergence in {context}: residual {residual:.3e}")]
    NoConvergence { context: String, residual: f64 },

    /// An evaluation point collided with a pole of the expression.
    #[error("pole encountered at u = {location:.16e}")]
    Pole { location: f64 },

    /// Series reversion requires a nonzero linear coefficient.
    #[error("singular reversion: vanishing linear coefficient")]
    SingularReversion,

    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("quadrature failure: error estimate {estimate:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureFailure { estimate: f64, tol: f64 },

    /// The string-equation continuation in lambda folded before lambda = 1.
    #[error("continuation failure at lambda = {lambda:.6}: no real solution branch ahead")]
    ContinuationFailure { lambda: f64 },

    /// An enumeration request exceeded the configured size cap.
    #[error("cap exceeded: requested work {requested} exceeds cap {cap}")]
    CapExceeded { requested: u64, cap: u64 },

    /// Two sheets of the spectral curve could not be separated at this point.
    #[error("branch point proximity at z = {z_re:.12e} + {z_im:.12e} i: root separation {separation:.3e}")]
    BranchPointProximity { z_re: f64, z_im: f64, separation: f64 },

    /// Sheet tracking could not decide a unique labelling.
    #[error("ambiguous sheet assignment at z = {z_re:.12e} + {z_im:.12e} i")]
    AmbiguousSheet { z_re: f64, z_im: f64 },

    /// A fit window does not fit between two nearby spectral endpoints.
    #[error("insufficient window: endpoint gap {gap:.3e} below required {needed:.3e}")]
    InsufficientWindow { gap: f64, needed: f64 },

    /// A certified inequality or identity failed at a witness point.
    #[error("certificate failure in {check} at theta = {theta:.12}: margin {margin:.3e}")]
    CertificateFailure {
        check: String,
        theta: f64,
        margin: f64,
    },

    /// Asymptotic formulas are unreliable inside the guard band around the
    /// multicritical temperature.
    #[error("guard band: tau = {tau:.6} is within {band:.3} of the multicritical temperature 1/4")]
    GuardBand { tau: f64, band: f64 },

    /// A floating-point evaluation lost too many digits to cancellation.
    #[error("evaluation unstable in {context}: about {digits_lost:.1} digits lost")]
    EvaluationUnstable { context: String, digits_lost: f64 },

    /// Argument outside the supported range of a special function.
    #[error("range error: x = {x:.6} outside supported interval [{lo}, {hi}]")]
    RangeError { x: f64, lo: f64, hi: f64 },

    /// A coefficient extraction ran out of float precision.
    #[error("precision loss at order {order}: dual-route relative disagreement {rel:.3e}")]
    PrecisionLoss { order: usize, rel: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to: usage and domain
    /// problems exit with 2, failed certificates and runtime failures with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::RangeError { .. }
            | Error::CapExceeded { .. }
            | Error::GuardBand { .. } => 2,
            _ => 1,
        }
    }
}
