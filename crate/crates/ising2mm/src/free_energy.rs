//! Genus-zero free energy by two independent integral routes.
//!
//! The sigma route evaluates the closed form
//! `F = 3/4 + (1/2) ln((1 - tau^2) sigma / (-3t)) - int_0^sigma (lambda(u) -
//! lambda(u)^2/2) du/u` on top of the implicit sigma-equation; the lambda
//! route solves the planar string equation for `f(lambda)` by continuation
//! and integrates `(1 - lambda) ln[(1 - tau^2) f / (tau lambda)]` over the
//! filling fraction.  Both must agree, and both decouple to the quartic
//! one-matrix free energy in the weak-coupling limits, which is also
//! implemented here as an independent oracle.

use crate::error::{Error, Result};
use crate::phase_space::{classify, g_eval, lambda_eval, solve_sigma, PhasePoint, RegionLabel};
use crate::quad;
use crate::series_tools::{free_energy_series, TruncatedSeries};

/// Which integral representation produced a free-energy value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeEnergyMethod {
    /// Theorem form: sigma from the implicit equation, quadrature in u.
    UIntegral,
    /// String-equation form: continuation in lambda, quadrature in lambda.
    LambdaIntegral,
}

impl FreeEnergyMethod {
    /// Stable identifier used in serialized output.
    pub fn as_str(&self) -> &'static str {
        match self {
            FreeEnergyMethod::UIntegral => "u_integral",
            FreeEnergyMethod::LambdaIntegral => "lambda_integral",
        }
    }
}

/// A free-energy evaluation together with its provenance and error estimate.
#[derive(Clone, Copy, Debug)]
pub struct FreeEnergyResult {
    pub value: f64,
    pub method: FreeEnergyMethod,
    /// Accumulated quadrature error estimate; at most the requested tolerance.
    pub quad_error_estimate: f64,
    /// sigma obtained from the implicit equation (u route) or reconstructed
    /// from f(1) (lambda route).
    pub sigma_used: f64,
}

/// Planar limits of the biorthogonal-recursion coefficients at a given f.
#[derive(Clone, Copy, Debug)]
pub struct PlanarCoefficients {
    pub f: f64,
    pub r: f64,
    pub s: f64,
    /// Tilde counterpart of r (spins flipped, e^H <-> e^-H).
    pub rt: f64,
    /// Tilde counterpart of s.
    pub st: f64,
}

fn require_genus_zero(p: &PhasePoint, what: &str) -> Result<()> {
    if !(p.t < 0.0) {
        return Err(Error::Domain(format!(
            "{what}: requires t < 0, got t = {}",
            p.t
        )));
    }
    match classify(p, 1e-9)? {
        RegionLabel::GenusZeroInterior => Ok(()),
        other => Err(Error::Domain(format!(
            "{what}: point (tau={}, t={}, H={}) is not in the genus-zero interior ({other:?})",
            p.tau, p.t, p.h
        ))),
    }
}

/// Free energy by the sigma-form u-integral.
///
/// # Arguments
/// * `p` - parameter point; must classify as genus-zero interior with t < 0.
/// * `tol` - absolute quadrature tolerance (1e-11 is the library default).
pub fn f_eval(p: &PhasePoint, tol: f64) -> Result<FreeEnergyResult> {
    require_genus_zero(p, "f_eval")?;
    let sol = solve_sigma(p)?;
    let sigma = sol.sigma;
    if !(0.0..1.0 - 1e-10).contains(&sigma) {
        return Err(Error::Domain(format!(
            "f_eval: sigma = {sigma} outside the open unit branch interval"
        )));
    }
    // Guard against solver drift: sigma must satisfy lambda(sigma) = 1.
    let lam_sigma = lambda_eval(sigma, p)?;
    if (lam_sigma - 1.0).abs() > 1e-8 {
        return Err(Error::EvaluationUnstable {
            context: format!("lambda(sigma) = {lam_sigma} deviates from 1"),
            digits_lost: (lam_sigma - 1.0).abs().log10() + 16.0,
        });
    }

    let (tau, t, ch) = (p.tau, p.t, p.cosh_h());
    let limit0 = (tau * tau - 1.0) / (3.0 * t);
    let integrand = move |u: f64| -> f64 {
        if u.abs() < 1e-280 {
            return limit0;
        }
        let lam = g_eval(u, tau, ch)
            .expect("u stays in [0, sigma] with sigma < 1, away from the poles")
            / t;
        (lam - 0.5 * lam * lam) / u
    };
    let q = quad::integrate(integrand, 0.0, sigma, tol)?;
    if q.error_estimate > tol {
        return Err(Error::QuadratureFailure {
            estimate: q.error_estimate,
            tol,
        });
    }
    let value = 0.75 + 0.5 * ((1.0 - tau * tau) * sigma / (-3.0 * t)).ln() - q.value;
    Ok(FreeEnergyResult {
        value,
        method: FreeEnergyMethod::UIntegral,
        quad_error_estimate: q.error_estimate,
        sigma_used: sigma,
    })
}

/// dF/dt at fixed (tau, H), by differentiating the sigma form under the
/// integral sign (the sigma-dependence cancels because lambda(sigma) = 1):
/// `dF/dt = -1/(2t) + (1/t) int_0^sigma (lambda - lambda^2) du/u`.
pub fn f_t_derivative(p: &PhasePoint, tol: f64) -> Result<f64> {
    require_genus_zero(p, "f_t_derivative")?;
    let sigma = solve_sigma(p)?.sigma;
    let (tau, t, ch) = (p.tau, p.t, p.cosh_h());
    let limit0 = (tau * tau - 1.0) / (3.0 * t);
    let integrand = move |u: f64| -> f64 {
        if u.abs() < 1e-280 {
            return limit0;
        }
        let lam = g_eval(u, tau, ch)
            .expect("u stays in [0, sigma] with sigma < 1, away from the poles")
            / t;
        (lam - lam * lam) / u
    };
    let q = quad::integrate(integrand, 0.0, sigma, tol)?;
    Ok(-0.5 / t + q.value / t)
}

/// The implicit planar string equation lambda(f) at fixed (tau, t, H).
fn lam_of_f(f: f64, tau: f64, t: f64, ch: f64) -> f64 {
    let d1 = tau - 3.0 * t * f;
    let d2 = tau * tau - 9.0 * t * t * f * f;
    -tau * f
        + 3.0 * t * t / tau * f * f * f
        + tau * f / (d1 * d1)
        + 6.0 * tau * tau * t * f * f * (ch - 1.0) / (d2 * d2)
}

/// d lambda / d f for the Newton steps of the continuation.
fn dlam_df(f: f64, tau: f64, t: f64, ch: f64) -> f64 {
    let d1 = tau - 3.0 * t * f;
    let d2 = tau * tau - 9.0 * t * t * f * f;
    -tau
        + 9.0 * t * t / tau * f * f
        + tau * (tau + 3.0 * t * f) / (d1 * d1 * d1)
        + 12.0 * tau * tau * t * f * (tau * tau + 9.0 * t * t * f * f) * (ch - 1.0)
            / (d2 * d2 * d2)
}

/// Safeguarded Newton for lambda(f) = lam inside a bracket where the branch
/// is monotone increasing; falls back to bisection whenever a Newton step
/// leaves the bracket, so it cannot diverge.
fn solve_f_in_bracket(lam: f64, mut lo: f64, mut hi: f64, tau: f64, t: f64, ch: f64) -> f64 {
    let mut f = 0.5 * (lo + hi);
    for _ in 0..80 {
        let r = lam_of_f(f, tau, t, ch) - lam;
        if r > 0.0 {
            hi = f;
        } else {
            lo = f;
        }
        let d = dlam_df(f, tau, t, ch);
        let mut next = if d > 0.0 { f - r / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - f).abs() <= 1e-16 * (1.0 + f.abs()) {
            return next;
        }
        f = next;
    }
    f
}

/// Monotone continuation of the Gaussian branch f(lambda) from f(0) = 0 up to
/// `lam_max`, in `steps` equal lambda increments.  Returns the grid of
/// (lambda, f) pairs including both endpoints.
fn build_f_branch(
    p: &PhasePoint,
    lam_max: f64,
    steps: usize,
) -> Result<Vec<(f64, f64)>> {
    let (tau, t, ch) = (p.tau, p.t, p.cosh_h());
    // f = -tau/(3t) maps to the u = 1 pole of the filling function; the
    // branch stays strictly below it (f(1) = sigma * (-tau/(3t)), sigma < 1).
    let cap = if t < 0.0 {
        -tau / (3.0 * t) * (1.0 - 1e-12)
    } else {
        f64::MAX
    };
    let gaussian_slope = tau / (1.0 - tau * tau);
    let mut grid = Vec::with_capacity(steps + 1);
    grid.push((0.0, 0.0));
    let mut f_prev = 0.0;
    for i in 1..=steps {
        let lam_i = lam_max * i as f64 / steps as f64;
        // March forward with doubling steps until lambda(f) exceeds the
        // target; a non-increasing stretch before that is the fold.
        let mut lo = f_prev;
        let mut step = gaussian_slope * lam_max / steps as f64;
        let mut hi = None;
        let mut fu = f_prev;
        while fu < cap {
            fu = (fu + step).min(cap);
            let lam_here = lam_of_f(fu, tau, t, ch);
            if lam_here >= lam_i {
                hi = Some(fu);
                break;
            }
            if dlam_df(fu, tau, t, ch) <= 0.0 {
                return Err(Error::ContinuationFailure { lambda: lam_i });
            }
            lo = fu;
            step *= 2.0;
        }
        let hi = hi.ok_or(Error::ContinuationFailure { lambda: lam_i })?;
        let f_i = solve_f_in_bracket(lam_i, lo, hi, tau, t, ch);
        if f_i <= f_prev && i > 0 && lam_i > 0.0 {
            return Err(Error::ContinuationFailure { lambda: lam_i });
        }
        grid.push((lam_i, f_i));
        f_prev = f_i;
    }
    Ok(grid)
}

/// Evaluates f at an arbitrary lambda by bracketed refinement between the two
/// nearest continuation grid points.
fn f_from_grid(grid: &[(f64, f64)], lam: f64, tau: f64, t: f64, ch: f64) -> f64 {
    if lam <= 0.0 {
        return 0.0;
    }
    let last = grid.len() - 1;
    let lam_max = grid[last].0;
    if lam >= lam_max {
        return grid[last].1;
    }
    let idx = ((lam / lam_max * last as f64).floor() as usize).min(last - 1);
    let (l0, f0) = grid[idx];
    let (l1, f1) = grid[idx + 1];
    if lam <= l0 {
        return f0;
    }
    if lam >= l1 {
        return f1;
    }
    solve_f_in_bracket(lam, f0, f1, tau, t, ch)
}

/// Number of continuation steps used for the lambda route.
const CONTINUATION_STEPS: usize = 64;

/// Solves the planar string equation for f(lambda) by continuation from the
/// Gaussian branch f(0) = 0.
///
/// # Arguments
/// * `p` - parameter point with 0 < tau < 1 and t <= 0.
/// * `lam` - filling fraction in [0, 1].
pub fn f_at_lambda(p: &PhasePoint, lam: f64) -> Result<f64> {
    if !(p.tau > 0.0 && p.tau < 1.0) {
        return Err(Error::Domain(format!(
            "f_at_lambda: tau = {} outside (0, 1)",
            p.tau
        )));
    }
    if !(0.0..=1.0).contains(&lam) {
        return Err(Error::Domain(format!(
            "f_at_lambda: lambda = {lam} outside [0, 1]"
        )));
    }
    if p.t > 0.0 {
        return Err(Error::Domain(format!(
            "f_at_lambda: requires t <= 0, got t = {}",
            p.t
        )));
    }
    if lam == 0.0 {
        return Ok(0.0);
    }
    let grid = build_f_branch(p, lam, CONTINUATION_STEPS)?;
    Ok(grid[grid.len() - 1].1)
}

/// Free energy by the lambda-route string-equation integral.
///
/// # Arguments
/// * `p` - parameter point; must classify as genus-zero interior with t < 0.
/// * `tol` - absolute quadrature tolerance.
pub fn f_lambda_form(p: &PhasePoint, tol: f64) -> Result<FreeEnergyResult> {
    require_genus_zero(p, "f_lambda_form")?;
    let (tau, t, ch) = (p.tau, p.t, p.cosh_h());
    let grid = build_f_branch(p, 1.0, CONTINUATION_STEPS)?;
    let f1 = grid[grid.len() - 1].1;
    let sigma_used = -3.0 * t * f1 / tau;

    let pref = (1.0 - tau * tau) / tau;
    let integrand = move |lam: f64| -> f64 {
        if lam <= 0.0 {
            return 0.0;
        }
        let f = f_from_grid(&grid, lam, tau, t, ch);
        (1.0 - lam) * (pref * f / lam).ln()
    };
    let q = quad::integrate(integrand, 0.0, 1.0, tol)?;
    if q.error_estimate > tol {
        return Err(Error::QuadratureFailure {
            estimate: q.error_estimate,
            tol,
        });
    }
    Ok(FreeEnergyResult {
        value: q.value,
        method: FreeEnergyMethod::LambdaIntegral,
        quad_error_estimate: q.error_estimate,
        sigma_used,
    })
}

/// Closed-form planar recursion coefficients R, S and their spin-flipped
/// counterparts at a given f.
///
/// # Arguments
/// * `f` - planar limit of h_k/h_{k-1}; any real value away from the pole.
/// * `p` - parameter point supplying (tau, t, H).
pub fn planar_relations(f: f64, p: &PhasePoint) -> Result<PlanarCoefficients> {
    let (tau, t, h) = (p.tau, p.t, p.h);
    let d2 = tau * tau - 9.0 * t * t * f * f;
    if d2.abs() <= 1e-12 * tau * tau {
        return Err(Error::Pole { location: f });
    }
    let em = (-h).exp();
    let ep = h.exp();
    let f3 = f * f * f;
    Ok(PlanarCoefficients {
        f,
        s: t * em / tau * f3,
        st: t * ep / tau * f3,
        r: (tau + 3.0 * t * em * f) * f / d2,
        rt: (tau + 3.0 * t * ep * f) * f / d2,
    })
}

/// Filling fraction recovered from the first string equation
/// `lambda = -tau f + rt + 3 t e^{-H} (st + rt^2)`.
pub fn lambda_eq_c(co: &PlanarCoefficients, p: &PhasePoint) -> f64 {
    -p.tau * co.f + co.rt + 3.0 * p.t * (-p.h).exp() * (co.st + co.rt * co.rt)
}

/// Filling fraction recovered from the second string equation
/// `lambda = -tau f + r + 3 t e^{H} (s + r^2)`; agrees identically with
/// [`lambda_eq_c`].
pub fn lambda_eq_d(co: &PlanarCoefficients, p: &PhasePoint) -> f64 {
    -p.tau * co.f + co.r + 3.0 * p.t * p.h.exp() * (co.s + co.r * co.r)
}

/// Free energy of the quartic one-matrix model,
/// `curly F(t) = int_0^1 (1 - lambda) ln r(lambda) d lambda` with
/// `r = 2 / (1 + sqrt(1 + 12 t lambda))`.
///
/// The rationalized form of r is required: the textbook ratio
/// `(-1 + sqrt(1 + 12 t lambda)) / (6 t lambda)` cancels catastrophically
/// for small |t lambda| and its logarithm overflows near lambda = 0.
///
/// # Arguments
/// * `t` - coupling with 1 + 12t > 0.
/// * `tol` - absolute quadrature tolerance.
pub fn f_one_matrix(t: f64, tol: f64) -> Result<f64> {
    if !(1.0 + 12.0 * t > 0.0) {
        return Err(Error::Domain(format!(
            "f_one_matrix: requires t > -1/12, got t = {t}"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let integrand = move |lam: f64| -> f64 {
        if lam <= 0.0 {
            return 0.0;
        }
        let r = 2.0 / (1.0 + (1.0 + 12.0 * t * lam).sqrt());
        (1.0 - lam) * r.ln()
    };
    Ok(quad::integrate(integrand, 0.0, 1.0, tol)?.value)
}

/// Taylor coefficients of F(tau, t, H) in t up to the requested order,
/// computed termwise-analytically from the series machinery (no quadrature).
///
/// # Arguments
/// * `tau` - temperature parameter in (0, 1).
/// * `h` - magnetic field.
/// * `order` - highest power of t; coefficient 0 is exactly zero.
pub fn f_series(tau: f64, h: f64, order: usize) -> Result<TruncatedSeries<f64>> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!(
            "f_series: tau = {tau} outside (0, 1)"
        )));
    }
    let fe = free_energy_series(&tau, &h.cosh(), order)?;
    Ok(TruncatedSeries::new(fe.f))
}
