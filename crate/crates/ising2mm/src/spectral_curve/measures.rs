//! Equilibrium measures of the two-matrix pair, sampled through the
//! u-parametrization.
//!
//! Both measure supports are images of circles-with-angle-dependent-radius
//! in the u-plane:
//!
//!   mu on [-alpha, alpha]:              u = r_+(theta) e^{i theta}, theta in (0, pi),
//!   nu on (-inf, -beta] u [beta, inf):  u = r_-(theta) e^{i theta},
//!       theta in (0, pi/3) -> [beta, inf), theta in (2pi/3, pi) -> (-inf, -beta],
//!
//! with r_+- the two radii making Im X vanish.  On these curves s = X(u) is
//! real and the densities are (tau/pi) |Im Y(u)|.  r_- exists exactly when
//! sin^2 theta <= 3/4 (independent of the curve parameters).

use num_complex::Complex64;

use super::CurveData;
use crate::error::{Error, Result};
use crate::quad::integrate;

/// Which equilibrium measure to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// Measure of the first matrix, supported on [-alpha, alpha].
    Mu,
    /// Measure of the second resolvent pair, supported on |s| >= beta.
    Nu,
}

/// One sample of a measure density.
#[derive(Clone, Copy, Debug)]
pub struct MeasureSample {
    pub theta: f64,
    /// Position s = X(u(theta)) on the support (real up to rounding).
    pub s: f64,
    pub density: f64,
}

fn g_inner(theta: f64, a: f64, b: f64) -> f64 {
    let s = theta.sin();
    (4.0 / 3.0 * a * a * b * b * s * s + (a * a - b * b).powi(2) / 4.0).sqrt()
}

/// Radius of the outer Im X = 0 curve.
pub fn r_plus(theta: f64, a: f64, b: f64) -> f64 {
    ((a * a + b * b) / 2.0 + g_inner(theta, a, b)).sqrt()
}

/// Radius of the inner Im X = 0 curve; defined exactly for sin^2 theta <= 3/4.
pub fn r_minus(theta: f64, a: f64, b: f64) -> Result<f64> {
    let s = theta.sin();
    if s * s > 0.75 + 1e-12 {
        return Err(Error::Domain(format!(
            "r_minus: theta = {theta} has sin^2 theta = {} > 3/4",
            s * s
        )));
    }
    let v = (a * a + b * b) / 2.0 - g_inner(theta, a, b);
    Ok(v.max(0.0).sqrt())
}

/// Samples the density of `which` at parameter angle theta.
pub fn measure_density(cd: &CurveData, which: Which, theta: f64) -> Result<MeasureSample> {
    let (a, b) = (cd.abc.a, cd.abc.b);
    let tau = cd.phase.tau;
    if !(0.0..=std::f64::consts::PI).contains(&theta) || theta == 0.0 {
        return Err(Error::Domain(format!(
            "measure_density: theta = {theta} outside (0, pi)"
        )));
    }
    let r = match which {
        Which::Mu => r_plus(theta, a, b),
        Which::Nu => r_minus(theta, a, b)?,
    };
    let u = Complex64::from_polar(r, theta);
    let s = cd.x(u).re;
    let density = tau / std::f64::consts::PI * cd.y(u).im.abs();
    Ok(MeasureSample { theta, s, density })
}

/// Total mass of mu, by quadrature of density * |ds/dtheta| over (0, pi).
///
/// ds/dtheta is computed analytically: du/dtheta = (r' + i r) e^{i theta}
/// with r' = g' / (2 r_+) and g' = (4/3) a^2 b^2 sin(2 theta) / (2 g), then
/// ds/dtheta = Re(X'(u) du/dtheta).
pub fn mu_mass(cd: &CurveData) -> Result<f64> {
    let (a, b) = (cd.abc.a, cd.abc.b);
    let tau = cd.phase.tau;
    let f = |theta: f64| {
        let g = g_inner(theta, a, b);
        let r = r_plus(theta, a, b);
        let gp = 4.0 / 3.0 * a * a * b * b * (2.0 * theta).sin() / (2.0 * g);
        let rp = gp / (2.0 * r);
        let u = Complex64::from_polar(r, theta);
        let dudth = Complex64::new(rp, r) * Complex64::from_polar(1.0, theta);
        let dsdth = (cd.x_prime(u) * dudth).re;
        let dens = tau / std::f64::consts::PI * cd.y(u).im.abs();
        dens * dsdth.abs()
    };
    let eps = 1e-12;
    let half = std::f64::consts::FRAC_PI_2;
    let left = integrate(&f, eps, half, 1e-10)?;
    let right = integrate(&f, half, std::f64::consts::PI - eps, 1e-10)?;
    Ok(left.value + right.value)
}

/// Finds theta with s(theta) = starget by 200-step bisection.
fn bisect_theta(
    cd: &CurveData,
    which: Which,
    starget: f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64> {
    let f = |th: f64| -> Result<f64> { Ok(measure_density(cd, which, th)?.s - starget) };
    let flo = f(lo)?;
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if (f(m)? > 0.0) == (flo > 0.0) {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Least-squares exponent of the density at the measure's endpoint.
///
/// Fits the slope of log(density) against log|s - s_end| on 40 samples with
/// |s - s_end| log-spaced in [1e-6, 1e-3] * s_end; mu is fitted at alpha,
/// nu at beta.  When the two endpoints are distinct but closer than twice
/// the window top the regimes mix and no exponent can be read off; this is
/// reported as `InsufficientWindow`.  Exactly coincident endpoints
/// (alpha == beta) are allowed: the merged endpoint has its own exponent.
pub fn endpoint_exponent(cd: &CurveData, which: Which) -> Result<f64> {
    let (w_lo, w_hi) = (1e-6, 1e-3);
    let npts = 40usize;
    let end = match which {
        Which::Mu => cd.alpha,
        Which::Nu => cd.beta,
    };
    let gap = cd.beta - cd.alpha;
    let needed = 2.0 * w_hi * end;
    if gap > 0.0 && gap < needed {
        return Err(Error::InsufficientWindow { gap, needed });
    }
    let mut xs = Vec::with_capacity(npts);
    let mut ys = Vec::with_capacity(npts);
    for k in 0..npts {
        let frac = w_lo * (w_hi / w_lo).powf(k as f64 / (npts - 1) as f64);
        let sample = match which {
            Which::Mu => {
                let starget = end * (1.0 - frac);
                let th = bisect_theta(cd, which, starget, 1e-12, std::f64::consts::FRAC_PI_2)?;
                measure_density(cd, which, th)?
            }
            Which::Nu => {
                let starget = end * (1.0 + frac);
                let th = bisect_theta(
                    cd,
                    which,
                    starget,
                    1e-12,
                    std::f64::consts::FRAC_PI_3 - 1e-12,
                )?;
                measure_density(cd, which, th)?
            }
        };
        if sample.density <= 0.0 {
            return Err(Error::EvaluationUnstable {
                context: format!("endpoint exponent sampling at theta = {}", sample.theta),
                digits_lost: 16.0,
            });
        }
        xs.push((sample.s - end).abs().ln());
        ys.push(sample.density.ln());
    }
    let n = npts as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx = xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    let sxy = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>();
    Ok(sxy / sxx)
}
