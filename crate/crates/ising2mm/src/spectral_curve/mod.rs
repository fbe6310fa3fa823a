//! The genus-zero spectral curve: rational parametrization X(u), Y(u), branch
//! points, sheet inversion, the Omega function with its asymptotic constants,
//! equilibrium-measure densities with endpoint exponents, the sextic identity,
//! and the lensing-inequality certifier.

mod lensing;
mod measures;
mod omega;
mod sextic;
mod sheets;

pub use lensing::{
    check_lensing, check_lensing_point, lensing_coefficients, LensingCertificate,
    LensingCoefficients,
};
pub use measures::{
    endpoint_exponent, measure_density, mu_mass, r_minus, r_plus, MeasureSample, Which,
};
pub use omega::{omega_constants, omega_eval, OmegaConstants};
pub use sextic::{sextic_coefficients, sextic_eval, sextic_residual, SexticCoefficients};
pub use sheets::{invert_sheet, invert_sheet_side, Side};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase_space::{den_a, map_abc, p_b, p_c, AbcPoint, PhasePoint};

/// Immutable data of one spectral curve: parametrization scales, branch
/// points, and the phase-space image of its (a, b, c) parameters.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub abc: AbcPoint,
    /// Scale A of X(u).
    pub a_scale: f64,
    /// Scale B of Y(u); equals A with the roles of b and c swapped.
    pub b_scale: f64,
    /// Branch point alpha = X(a) > 0.
    pub alpha: f64,
    /// Branch point beta = X(b) >= alpha.
    pub beta: f64,
    pub phase: PhasePoint,
    /// sigma = a^2 b c on the analytic branch.
    pub sigma: f64,
}

/// Builds the curve attached to an admissible (a, b, c).
///
/// A = sqrt(3 P_c / D) and B = sqrt(3 P_b / D) with D the common denominator
/// of the parametrization; the branch points are alpha = X(a), beta = X(b).
pub fn curve_from_abc(p: &AbcPoint) -> Result<CurveData> {
    let phase = map_abc(p)?;
    let d = den_a(p.a, p.b, p.c);
    if d <= 0.0 {
        return Err(Error::Domain(format!(
            "curve_from_abc: non-positive parametrization denominator {d}"
        )));
    }
    let a_scale = (3.0 * p_c(p.a, p.b, p.c) / d).sqrt();
    let b_scale = (3.0 * p_b(p.a, p.b, p.c) / d).sqrt();
    let cd = CurveData {
        abc: *p,
        a_scale,
        b_scale,
        alpha: 0.0,
        beta: 0.0,
        phase,
        sigma: p.a * p.a * p.b * p.c,
    };
    let alpha = cd.x_real(p.a);
    let beta = cd.x_real(p.b);
    Ok(CurveData { alpha, beta, ..cd })
}

impl CurveData {
    /// X(u) = A (u + (a^2+b^2)/u - a^2 b^2 / (3 u^3)).
    pub fn x(&self, u: Complex64) -> Complex64 {
        let (a, b) = (self.abc.a, self.abc.b);
        let a2 = a * a;
        let b2 = b * b;
        self.a_scale * (u + (a2 + b2) / u - a2 * b2 / (3.0 * u * u * u))
    }

    /// Y(u) = B (1/u + (a^2+c^2) u - a^2 c^2 u^3 / 3).
    pub fn y(&self, u: Complex64) -> Complex64 {
        let (a, c) = (self.abc.a, self.abc.c);
        let a2 = a * a;
        let c2 = c * c;
        self.b_scale * (1.0 / u + (a2 + c2) * u - a2 * c2 * u * u * u / 3.0)
    }

    /// X'(u) = A (u^2 - a^2)(u^2 - b^2) / u^4.
    pub fn x_prime(&self, u: Complex64) -> Complex64 {
        let (a, b) = (self.abc.a, self.abc.b);
        let u2 = u * u;
        self.a_scale * (u2 - a * a) * (u2 - b * b) / (u2 * u2)
    }

    /// X on the real axis.
    pub fn x_real(&self, u: f64) -> f64 {
        let (a, b) = (self.abc.a, self.abc.b);
        let a2 = a * a;
        let b2 = b * b;
        self.a_scale * (u + (a2 + b2) / u - a2 * b2 / (3.0 * u * u * u))
    }

    /// Y on the real axis.
    pub fn y_real(&self, u: f64) -> f64 {
        let (a, c) = (self.abc.a, self.abc.c);
        let a2 = a * a;
        let c2 = c * c;
        self.b_scale * (1.0 / u + (a2 + c2) * u - a2 * c2 * u * u * u / 3.0)
    }
}
