//! The algebraic sextic identity satisfied by the pair (X(u), Y(u)).
//!
//! The parametrized curve lies on an affine algebraic curve of bidegree
//! (4, 4) whose coefficients are rational in (sigma, tau, t, q):
//!
//!   S(X, Y) = tau q X^4 + (tau/q) Y^4 - t X^3 Y^3 - q X^3 Y - (1/q) X Y^3
//!             + (t/tau) X^2 Y^2 + s2(q) X^2 + s2(1/q) Y^2 + s1 X Y + s0,
//!
//! with s2 evaluated once at q and once at 1/q (the X <-> Y exchange is the
//! Ising spin flip).  The residual of S along the parametrization, measured
//! against the largest participating monomial, vanishes to rounding.

use num_complex::Complex64;

use super::CurveData;

/// Coefficients of the sextic identity at a phase point.
#[derive(Clone, Copy, Debug)]
pub struct SexticCoefficients {
    pub tau: f64,
    pub t: f64,
    pub q: f64,
    /// Coefficient of X^2.
    pub s2_q: f64,
    /// Coefficient of Y^2 (s2 with q -> 1/q).
    pub s2_qinv: f64,
    /// Coefficient of X Y.
    pub s1: f64,
    /// Constant term.
    pub s0: f64,
}

fn s2(sig: f64, tau: f64, t: f64, q: f64) -> f64 {
    let term1 = (1.0 - 6.0 * sig - 3.0 * sig * sig) / (27.0 * tau * t * (sig + 1.0).powi(3));
    let term2 = -(sig.powi(3) * tau * tau + 3.0 * sig * sig * tau * tau - 9.0 * sig * tau * tau
        - 27.0 * tau * tau
        + 1.0)
        / (27.0 * tau * t);
    let bracket = (9.0 * tau * tau - 9.0)
        + 9.0 * (q + 1.0) * sig
        + (4.0 / q - (28.0 * tau * tau + 6.0)) * sig * sig
        - 6.0 * (q + 1.0) * sig.powi(3)
        + (30.0 * tau * tau + 3.0) * sig.powi(4)
        + (q + 1.0) * sig.powi(5)
        - 12.0 * sig.powi(6) * tau * tau
        + sig.powi(8) * tau * tau;
    let term3 = -(q - 1.0) * sig / (27.0 * tau * t * (sig * sig - 1.0).powi(3)) * bracket;
    term1 + term2 + term3
}

fn s1(sig: f64, tau: f64, t: f64, q: f64) -> f64 {
    let term1 = -8.0 * (5.0 * sig + 3.0) / (81.0 * (sig + 1.0).powi(2) * t);
    let term2 = -(sig.powi(6) * tau * tau - 15.0 * sig.powi(4) * tau * tau
        + 27.0 * sig * sig * tau * tau
        - 3.0 * sig * sig
        + 243.0 * tau * tau
        + 24.0 * sig
        + 171.0)
        / (243.0 * t);
    let term3 = -4.0 * sig.powi(3) * (sig * sig + 3.0) / (81.0 * t * (sig * sig - 1.0).powi(2))
        * (q + 1.0 / q - 2.0);
    term1 + term2 + term3
}

fn s0(sig: f64, tau: f64, t: f64, q: f64) -> f64 {
    let br = 15.0 * q * sig.powi(6) * tau * tau
        + 9.0 * q * sig.powi(5) * t
        + (12.0 - 111.0 * tau * tau) * q * sig.powi(4)
        + 15.0 * (q * q - 1.2 * t * q + 1.0) * sig.powi(3)
        + (177.0 * tau * tau - 15.0) * q * sig * sig
        - 54.0 * (q * q - t * q / 6.0 + 1.0) * sig
        + 81.0 * (1.0 - tau * tau) * q;
    -sig / (19683.0 * t * t * tau * q * q * (sig * sig - 1.0).powi(4)) * br * br
}

/// Computes the lower-order sextic coefficients at the curve's phase point.
pub fn sextic_coefficients(cd: &CurveData) -> SexticCoefficients {
    let tau = cd.phase.tau;
    let t = cd.phase.t;
    let q = cd.phase.q();
    let sig = cd.sigma;
    SexticCoefficients {
        tau,
        t,
        q,
        s2_q: s2(sig, tau, t, q),
        s2_qinv: s2(sig, tau, t, 1.0 / q),
        s1: s1(sig, tau, t, q),
        s0: s0(sig, tau, t, q),
    }
}

/// Evaluates the sextic polynomial at (x, y).
pub fn sextic_eval(co: &SexticCoefficients, x: Complex64, y: Complex64) -> Complex64 {
    let (tau, t, q) = (co.tau, co.t, co.q);
    let x2 = x * x;
    let x3 = x2 * x;
    let y2 = y * y;
    let y3 = y2 * y;
    tau * q * x3 * x + tau / q * y3 * y - t * x3 * y3 - q * x3 * y - x * y3 / q
        + t / tau * x2 * y2
        + co.s2_q * x2
        + co.s2_qinv * y2
        + co.s1 * x * y
        + co.s0
}

/// Scaled residual |S(X(u), Y(u))| / max |monomial| of the identity at u.
pub fn sextic_residual(cd: &CurveData, co: &SexticCoefficients, u: Complex64) -> f64 {
    let x = cd.x(u);
    let y = cd.y(u);
    let (tau, t, q) = (co.tau, co.t, co.q);
    let x2 = x * x;
    let x3 = x2 * x;
    let y2 = y * y;
    let y3 = y2 * y;
    let terms = [
        tau * q * x3 * x,
        tau / q * y3 * y,
        -t * x3 * y3,
        -q * x3 * y,
        -x * y3 / q,
        t / tau * x2 * y2,
        co.s2_q * x2,
        co.s2_qinv * y2,
        co.s1 * x * y,
        Complex64::new(co.s0, 0.0),
    ];
    let scale = terms.iter().map(|m| m.norm()).fold(0.0f64, f64::max).max(1e-300);
    let sum = terms.iter().sum::<Complex64>();
    sum.norm() / scale
}
