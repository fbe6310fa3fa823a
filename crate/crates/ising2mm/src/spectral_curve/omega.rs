//! The resolvent primitive Omega on the spectral curve.
//!
//! In the u-parametrization, tau * Omega is an explicit Laurent polynomial
//! in u minus log u.  Pushed to the z-plane it has sheet-dependent
//! asymptotics whose constant and subleading coefficients admit closed
//! forms; those are exposed in [`OmegaConstants`]:
//!
//!   sheet 1:  tau Omega = (t q / 4) z^4 + z^2 / 2 - ln z + ell0 + O(z^-2),
//!   sheet 3:  tau Omega = -(3/4) tau^(4/3) (q/-t)^(1/3) z^(4/3)
//!                         - (1/2) tau^(2/3) (q/-t)^(2/3) z^(2/3)
//!                         + (ln z)/3 + ell1 + C1 z^(-2/3) + C2 z^(-4/3) + ...
//!
//! (on sheet 3 at real z > 0 the parameter u is negative, so the principal
//! logarithm contributes a constant imaginary part -pi; the closed forms
//! below are the real parts).

use num_complex::Complex64;

use super::CurveData;
use crate::error::{Error, Result};
use crate::phase_space::den_a;

/// Closed-form asymptotic constants of tau * Omega.
#[derive(Clone, Copy, Debug)]
pub struct OmegaConstants {
    /// Constant term of the sheet-1 expansion.
    pub ell0: f64,
    /// Constant term (real part) of the sheet-3 expansion.
    pub ell1: f64,
    /// Coefficient of z^(-2/3) on sheet 3.
    pub c1: f64,
    /// Coefficient of z^(-4/3) on sheet 3.
    pub c2: f64,
}

/// Evaluates tau * Omega at a point u of the parametrization domain.
pub fn omega_eval(cd: &CurveData, u: Complex64) -> Result<Complex64> {
    if u.norm() == 0.0 {
        return Err(Error::Pole { location: 0.0 });
    }
    let (a, b, c) = (cd.abc.a, cd.abc.b, cd.abc.c);
    let d = den_a(a, b, c);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let u2 = u * u;
    let u4 = u2 * u2;
    let val = (-0.25 * a2 * c2 * u4 - 0.75 * a2 * b2 / u4
        + 0.5 * (a2 * a2 * c2 + a2 * b2 * c2 + 3.0 * a2 + 3.0 * c2) * u2
        - 1.5 * (a2 * a2 * b2 + a2 * b2 * c2 - a2 - b2) / u2)
        / d;
    Ok(val - u.ln())
}

/// Closed forms for the asymptotic constants of tau * Omega.
pub fn omega_constants(cd: &CurveData) -> OmegaConstants {
    let (a, b, c) = (cd.abc.a, cd.abc.b, cd.abc.c);
    let d = den_a(a, b, c);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let (a4, b4) = (a2 * a2, b2 * b2);
    let (a6, b6) = (a4 * a2, b4 * b2);
    let (a8, b8) = (a4 * a4, b4 * b4);
    let a10 = a8 * a2;

    let ell0 = cd.a_scale.ln()
        - (9.0 * a6 * c2 + 20.0 * a4 * b2 * c2 + 9.0 * a2 * b4 * c2
            + 18.0 * a4
            + 18.0 * a2 * b2
            + 18.0 * a2 * c2
            + 18.0 * b2 * c2)
            / (6.0 * d);

    let ell1 = -3.0
        * (2.0 * a6 * b2 + 2.0 * a4 * b4 + 2.0 * a4 * b2 * c2 + 2.0 * a2 * b4 * c2
            + a4
            + 4.0 * a2 * b2
            + b4)
        / (2.0 * a2 * b2 * d)
        - (a2 * b2 * cd.a_scale / 3.0).ln() / 3.0;

    let tau = cd.phase.tau;
    let t = cd.phase.t;
    let q = cd.phase.q();

    let poly1 = 3.0 * a8 * b4 * c2 + 3.0 * a6 * b6 * c2 + 3.0 * a8 * b2 + 3.0 * a6 * b4
        + 3.0 * a6 * b2 * c2
        + 3.0 * a4 * b6
        + 3.0 * a4 * b4 * c2
        + 3.0 * a2 * b6 * c2
        - a6
        - 9.0 * a4 * b2
        - 9.0 * a2 * b4
        - b6;
    let c1 = c.powf(1.5) * tau.powf(7.0 / 3.0)
        / (54.0 * b.powf(1.5) * (-t).powf(4.0 / 3.0) * q.powf(1.0 / 6.0))
        * poly1;

    let poly2 = 6.0 * a10 * b4 * c2 + 9.0 * a8 * b6 * c2 + 6.0 * a6 * b8 * c2 + 2.0 * a10 * b2
        - 6.0 * a8 * b4
        + 2.0 * a8 * b2 * c2
        - 6.0 * a6 * b6
        - 6.0 * a6 * b4 * c2
        + 2.0 * a4 * b8
        - 6.0 * a4 * b6 * c2
        + 2.0 * a2 * b8 * c2
        - a8
        - 10.0 * a6 * b2
        - 12.0 * a4 * b4
        - 10.0 * a2 * b6
        - b8;
    let c2_coeff = -c2 * tau.powf(8.0 / 3.0)
        / (324.0 * b2 * (-t).powf(5.0 / 3.0) * q.powf(1.0 / 3.0))
        * poly2;

    OmegaConstants {
        ell0,
        ell1,
        c1,
        c2: c2_coeff,
    }
}
