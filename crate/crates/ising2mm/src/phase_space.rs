//! Phase space of the model: the rational parametrization (a, b, c) -> (tau, t, q),
//! the implicit equation for the analytic branch sigma(tau, t, H), critical
//! surfaces, and the discriminant that vanishes on them.
//!
//! Conventions used throughout the crate:
//! tau = e^{-2 beta}, H = beta h, q = e^H.  The parameter region is
//! R = { 1 <= a <= 1/b, 0 < c <= b <= 1 }.  The analytic branch sigma is the
//! solution of G(sigma) = t passing through sigma(t = 0) = 0, where
//!
//! G(s) = -(tau^2/9) s (s^2 - 3) - s / (3 (1+s)^2) + (2/3) (s/(1-s^2))^2 (cosh H - 1).

use crate::error::{Error, Result};

/// Point in the (a, b, c) parameter region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbcPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Point in model-parameter space. `h` is the magnetic combination H = beta h.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub tau: f64,
    pub t: f64,
    pub h: f64,
}

/// Result of solving the implicit equation for sigma.
#[derive(Clone, Copy, Debug)]
pub struct SigmaSolution {
    pub sigma: f64,
    /// Residual check |J(sigma)| passed at the returned value.
    pub converged: bool,
    /// Continuation steps actually taken.
    pub steps: usize,
    /// Set when the derivative |dJ/dsigma| dropped below the detection
    /// threshold at the accepted solution (fold nearby).
    pub hit_branch_point: bool,
}

/// Phase-space classification of a parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionLabel {
    /// Strictly inside the genus-zero phase (t_cr < t < 0).
    GenusZeroInterior,
    /// On the low-temperature critical surface.
    LowTempSurface,
    /// On the high-temperature critical surface.
    HighTempSurface,
    /// On the curve where the two critical surfaces meet (H != 0).
    GammaB,
    /// The multicritical point (tau, t, H) = (1/4, -5/72, 0).
    Multicritical,
    /// Beyond the critical surface: the genus-zero branch does not reach here.
    Outside,
    /// On a coordinate boundary of the parameter domain.
    Boundary(BoundaryKind),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    TZero,
    TauZero,
    TauOne,
    /// |H| so large that q = e^H overflows the trusted range.
    QWall,
}

impl AbcPoint {
    /// Validates membership in the closed region R (tolerance 1e-12).
    pub fn new(a: f64, b: f64, c: f64) -> Result<AbcPoint> {
        let p = AbcPoint { a, b, c };
        if !p.in_region(1e-12) {
            return Err(Error::Domain(format!(
                "(a, b, c) = ({a}, {b}, {c}) outside region 1 <= a <= 1/b, 0 < c <= b <= 1"
            )));
        }
        Ok(p)
    }

    pub fn in_region(&self, tol: f64) -> bool {
        let AbcPoint { a, b, c } = *self;
        a.is_finite()
            && b.is_finite()
            && c.is_finite()
            && b > 0.0
            && a >= 1.0 - tol
            && a * b <= 1.0 + tol
            && b <= 1.0 + tol
            && c > 0.0
            && c <= b + tol
    }

    /// True when strictly inside R.
    pub fn is_interior(&self, margin: f64) -> bool {
        let AbcPoint { a, b, c } = *self;
        a > 1.0 + margin && a * b < 1.0 - margin && b < 1.0 - margin && c < b - margin && c > margin
    }
}

impl PhasePoint {
    pub fn new(tau: f64, t: f64, h: f64) -> PhasePoint {
        PhasePoint { tau, t, h }
    }

    pub fn q(&self) -> f64 {
        self.h.exp()
    }

    pub fn cosh_h(&self) -> f64 {
        self.h.cosh()
    }
}

// ---------------------------------------------------------------------------
// The rational map (a, b, c) -> (tau, t, q)
// ---------------------------------------------------------------------------

pub(crate) fn p_c(a: f64, b: f64, c: f64) -> f64 {
    a.powi(4) * c * c + a * a * b * b * c * c + a * a + c * c
}

pub(crate) fn p_b(a: f64, b: f64, c: f64) -> f64 {
    a.powi(4) * b * b + a * a * b * b * c * c + a * a + b * b
}

pub(crate) fn den_a(a: f64, b: f64, c: f64) -> f64 {
    a.powi(4) * b * b * c * c
        + 3.0 * a.powi(4)
        + 3.0 * a * a * b * b
        + 3.0 * a * a * c * c
        + 3.0 * b * b * c * c
        - 3.0
}

/// Maps an (a, b, c) point to (tau, t, q); stored as a [`PhasePoint`] with
/// h = ln q.  Errors if the point is outside the closed region R.
pub fn map_abc(p: &AbcPoint) -> Result<PhasePoint> {
    if !p.in_region(1e-12) {
        return Err(Error::Domain(format!(
            "map_abc: ({}, {}, {}) outside region R",
            p.a, p.b, p.c
        )));
    }
    Ok(map_abc_unchecked(p))
}

/// Same as [`map_abc`] without the region membership check.
pub fn map_abc_unchecked(p: &AbcPoint) -> PhasePoint {
    let AbcPoint { a, b, c } = *p;
    let pc = p_c(a, b, c);
    let pb = p_b(a, b, c);
    let da = den_a(a, b, c);
    let tau = 1.0 / (pc * pb).sqrt();
    let t = -a * a * b * c * da / (9.0 * pc * pb);
    let q = c * pb / (b * pc);
    PhasePoint {
        tau,
        t,
        h: q.ln(),
    }
}

/// sigma = a^2 b c, the value of the analytic branch at the image point.
pub fn sigma_abc(p: &AbcPoint) -> f64 {
    p.a * p.a * p.b * p.c
}

/// Jacobian determinant of the map (a, b, c) -> (tau, t, q).
///
/// Vanishes precisely on the boundary factors a = 1, ab = 1, a = b (and the
/// reflections ac = 1, bc = 1, a = c that lie outside R), so the map is a
/// diffeomorphism on the interior.
pub fn jacobian_abc(p: &AbcPoint) -> f64 {
    let AbcPoint { a, b, c } = *p;
    let a2 = a * a;
    let b2 = b * b;
    let c2 = c * c;
    let num = -4.0
        * a
        * c
        * (a2 - 1.0)
        * (a2 + 1.0)
        * (a2 * b2 - 1.0)
        * (a2 * c2 - 1.0)
        * (b2 * c2 - 1.0)
        * (a2 - b2)
        * (a2 - c2);
    let den = 3.0 * b * p_b(a, b, c).powf(1.5) * p_c(a, b, c).powf(3.5);
    num / den
}

// ---------------------------------------------------------------------------
// The implicit equation
// ---------------------------------------------------------------------------

/// G(s) for given tau and cosh H.
pub fn g_eval(s: f64, tau: f64, cosh_h: f64) -> Result<f64> {
    let onep = 1.0 + s;
    if onep.abs() < 1e-13 {
        return Err(Error::Pole { location: -1.0 });
    }
    let mut val = -(tau * tau / 9.0) * s * (s * s - 3.0) - s / (3.0 * onep * onep);
    if cosh_h != 1.0 {
        let onem2 = 1.0 - s * s;
        if onem2.abs() < 1e-13 {
            return Err(Error::Pole {
                location: if s > 0.0 { 1.0 } else { -1.0 },
            });
        }
        val += 2.0 / 3.0 * (s / onem2) * (s / onem2) * (cosh_h - 1.0);
    }
    Ok(val)
}

/// dG/ds.
pub fn g_prime(s: f64, tau: f64, cosh_h: f64) -> Result<f64> {
    let onep = 1.0 + s;
    if onep.abs() < 1e-13 {
        return Err(Error::Pole { location: -1.0 });
    }
    let mut val = -(tau * tau / 9.0) * (3.0 * s * s - 3.0) - (1.0 - s) / (3.0 * onep.powi(3));
    if cosh_h != 1.0 {
        let onem2 = 1.0 - s * s;
        if onem2.abs() < 1e-13 {
            return Err(Error::Pole {
                location: if s > 0.0 { 1.0 } else { -1.0 },
            });
        }
        val += 2.0 / 3.0 * (cosh_h - 1.0) * 2.0 * s * (1.0 + s * s) / onem2.powi(3);
    }
    Ok(val)
}

/// The implicit function J(sigma; tau, t, H) = G(sigma) - t whose zero along
/// the branch through the origin defines sigma(tau, t, H).
pub fn i_eval(sigma: f64, p: &PhasePoint) -> Result<f64> {
    Ok(g_eval(sigma, p.tau, p.cosh_h())? - p.t)
}

/// lambda(u) = G(u)/t, the filling function used in the free-energy integral.
pub fn lambda_eval(u: f64, p: &PhasePoint) -> Result<f64> {
    if p.t == 0.0 {
        return Err(Error::Domain("lambda_eval: t must be nonzero".into()));
    }
    Ok(g_eval(u, p.tau, p.cosh_h())? / p.t)
}

/// Location of the fold of the analytic branch: the first zero of G' in
/// (0, 1).  For H = 0 this is min(1, 1/sqrt(tau) - 1) in closed form.
fn fold_sigma(tau: f64, cosh_h: f64) -> Result<f64> {
    if cosh_h == 1.0 {
        return Ok((1.0 / tau.sqrt() - 1.0).min(1.0));
    }
    // G'(0) < 0 and G' -> +infinity as s -> 1^- (the magnetic term dominates),
    // so a sign change exists; march to bracket it, then bisect.
    let lo0 = 1e-12;
    let hi0 = 1.0 - 1e-12;
    let n = 20000;
    let mut prev = lo0;
    let mut bracket = None;
    for i in 1..=n {
        let s = lo0 + (hi0 - lo0) * i as f64 / n as f64;
        if g_prime(s, tau, cosh_h)? > 0.0 {
            bracket = Some((prev, s));
            break;
        }
        prev = s;
    }
    let (mut sl, mut sh) = bracket.ok_or_else(|| Error::NoConvergence {
        context: "fold_sigma bracket".into(),
        residual: f64::NAN,
    })?;
    for _ in 0..200 {
        let m = 0.5 * (sl + sh);
        if g_prime(m, tau, cosh_h)? < 0.0 {
            sl = m;
        } else {
            sh = m;
        }
    }
    Ok(0.5 * (sl + sh))
}

/// Critical coupling t_cr(tau, H): the fold value of the analytic branch.
///
/// For H = 0 the closed forms are used:
/// t_low(tau)  = -1/12 + (2/9) tau^2                 (tau <= 1/4),
/// t_high(tau) = -(2/9) sqrt(tau) (sqrt(tau)-1)^2 (sqrt(tau)+2)   (tau > 1/4).
/// Otherwise the double-root system J = dJ/dsigma = 0 is solved numerically
/// along the branch.
pub fn t_critical(tau: f64, h: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!(
            "t_critical: tau = {tau} outside (0, 1)"
        )));
    }
    if h == 0.0 {
        if tau <= 0.25 {
            return Ok(t_low(tau));
        }
        return Ok(t_high(tau));
    }
    let ch = h.cosh();
    let sc = fold_sigma(tau, ch)?;
    g_eval(sc, tau, ch)
}

/// Low-temperature critical coupling (exact for tau <= 1/4, H = 0).
pub fn t_low(tau: f64) -> f64 {
    -1.0 / 12.0 + 2.0 / 9.0 * tau * tau
}

/// High-temperature critical coupling (exact for tau >= 1/4, H = 0).
pub fn t_high(tau: f64) -> f64 {
    let rt = tau.sqrt();
    -(2.0 / 9.0) * rt * (rt - 1.0) * (rt - 1.0) * (rt + 2.0)
}

/// Solves G(sigma) = t along the analytic branch through sigma(0) = 0 by
/// adaptive continuation in t with Newton correction.
///
/// The initial step is |t|/32; a step is halved whenever Newton needs more
/// than 6 iterations, and grown after easy steps.  Newton stalls when the
/// derivative |dJ/dsigma| drops below 1e-7 (an imminent fold); the solver then
/// falls back to bisection, which remains valid because G is monotone on the
/// branch up to the fold.  A target beyond the fold is reported through
/// [`Error::BranchPointReached`] with a refined t_cr.
pub fn solve_sigma(p: &PhasePoint) -> Result<SigmaSolution> {
    let t_target = p.t;
    if t_target == 0.0 {
        return Ok(SigmaSolution {
            sigma: 0.0,
            converged: true,
            steps: 0,
            hit_branch_point: false,
        });
    }
    if !(p.tau > 0.0 && p.tau < 1.0) {
        return Err(Error::Domain(format!(
            "solve_sigma: tau = {} outside (0, 1)",
            p.tau
        )));
    }
    let ch = p.cosh_h();
    let newton_tol = 1e-13;
    let deriv_floor = 1e-7;
    let scale = t_target.abs().max(1e-3);

    // Fold of the branch for t < 0; G is strictly decreasing on [0, s_fold].
    let s_fold = if t_target < 0.0 {
        let sf = fold_sigma(p.tau, ch)?;
        let tc = g_eval(sf, p.tau, ch)?;
        if t_target < tc - 1e-14 * scale {
            return Err(Error::BranchPointReached {
                t_cr: tc,
                t_target,
            });
        }
        Some(sf)
    } else {
        None
    };

    let mut s = 0.0f64;
    let mut t_cur = 0.0f64;
    let mut step = t_target / 32.0;
    let mut steps = 0usize;
    let min_step = t_target.abs() * 1e-10;
    let mut stalled = false;

    'outer: while t_cur != t_target {
        let mut t_next = t_cur + step;
        if (t_target - t_next) * step.signum() < 0.0 {
            t_next = t_target;
        }

        // Newton for G(s) = t_next from the current branch point.
        let mut s_try = s;
        let mut iters = 0usize;
        let mut converged = false;
        while iters < 50 {
            let g = g_eval(s_try, p.tau, ch)?;
            let gp = g_prime(s_try, p.tau, ch)?;
            if gp.abs() < deriv_floor && (g - t_next).abs() > newton_tol * scale {
                break; // derivative too small for Newton near the fold
            }
            let ds = (g - t_next) / gp;
            let mut s_new = s_try - ds;
            // stay within the pole-free interval of the branch
            if let Some(sf) = s_fold {
                if s_new > sf {
                    s_new = 0.5 * (s_try + sf);
                }
            } else if s_new <= -1.0 + 1e-12 {
                s_new = 0.5 * (s_try + (-1.0 + 1e-12));
            }
            iters += 1;
            let done = (g_eval(s_new, p.tau, ch)? - t_next).abs() <= newton_tol * scale
                || (s_new - s_try).abs() <= 1e-16 * (1.0 + s_try.abs());
            s_try = s_new;
            if done {
                converged = true;
                break;
            }
        }

        if !converged || iters > 6 {
            step *= 0.5;
            if step.abs() < min_step {
                stalled = true;
                break 'outer;
            }
            if !converged {
                continue;
            }
        }

        s = s_try;
        t_cur = t_next;
        steps += 1;
        if iters <= 3 {
            step *= 1.5;
            let cap = t_target / 8.0;
            if step.abs() > cap.abs() {
                step = cap;
            }
        }
        if steps > 100_000 {
            return Err(Error::NoConvergence {
                context: "solve_sigma continuation".into(),
                residual: (t_target - t_cur).abs(),
            });
        }
    }

    if stalled {
        // Newton derailed by the flattening derivative; finish with bisection
        // on the monotone branch segment.
        s = match s_fold {
            Some(sf) => bisect_branch(t_target, p.tau, ch, 0.0, sf)?,
            None => {
                // t > 0: march toward the pole at -1 until G exceeds the target.
                let mut lo = 0.0f64;
                let mut hi = None;
                for k in 1..4096 {
                    let cand = -1.0 + 2.0 / (1.0 + (k as f64 * 0.01).exp());
                    if g_eval(cand, p.tau, ch)? >= t_target {
                        hi = Some(cand);
                        break;
                    }
                    lo = cand;
                }
                let hi = hi.ok_or_else(|| Error::NoConvergence {
                    context: "solve_sigma bracket (t > 0)".into(),
                    residual: f64::NAN,
                })?;
                // orientation: G(hi) >= t > G(lo) with hi < lo <= 0
                bisect_branch(t_target, p.tau, ch, hi, lo)?
            }
        };
        steps += 1;
    }

    let near = g_prime(s, p.tau, ch)?.abs() < deriv_floor;
    let residual = (g_eval(s, p.tau, ch)? - t_target).abs();
    Ok(SigmaSolution {
        sigma: s,
        converged: residual <= 1e-10 * scale,
        steps,
        hit_branch_point: near,
    })
}

/// Bisection for G(s) = t on a segment where G decreases from G(s_lo) >= t
/// to G(s_hi) <= t.
fn bisect_branch(t: f64, tau: f64, ch: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if g_eval(m, tau, ch)? > t {
            lo = m;
        } else {
            hi = m;
        }
        if hi - lo <= f64::EPSILON * (1.0 + hi.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Critical surfaces and classification
// ---------------------------------------------------------------------------

/// Low-temperature critical surface: the image of the face a = 1/b.
pub fn critical_surface_low(b: f64, c: f64) -> Result<PhasePoint> {
    let p = AbcPoint::new(1.0 / b, b, c)?;
    map_abc(&p)
}

/// High-temperature critical surface: the image of the face a = 1.
pub fn critical_surface_high(b: f64, c: f64) -> Result<PhasePoint> {
    let p = AbcPoint::new(1.0, b, c)?;
    map_abc(&p)
}

/// The curve gamma_b = {a = b = 1} where the two critical surfaces meet.
pub fn critical_curve_b(c: f64) -> Result<PhasePoint> {
    let p = AbcPoint::new(1.0, 1.0, c)?;
    map_abc(&p)
}

/// tau-coordinate of gamma_b at given H: solves q_gamma(c) = e^{-|H|}.
fn gamma_b_tau(h: f64) -> Result<f64> {
    let q_target = (-h.abs()).exp();
    // q_gamma(c) = c (c^2 + 3) / (3 c^2 + 1) is increasing on (0, 1] with range (0, 1].
    let qg = |c: f64| c * (c * c + 3.0) / (3.0 * c * c + 1.0);
    let mut lo = 1e-300f64;
    let mut hi = 1.0f64;
    if q_target >= 1.0 {
        return Ok(0.25);
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if qg(m) < q_target {
            lo = m;
        } else {
            hi = m;
        }
    }
    let c = 0.5 * (lo + hi);
    Ok(1.0 / ((3.0 * c * c + 1.0) * (c * c + 3.0)).sqrt())
}

/// Classifies a parameter point with tolerance `tol` (absolute in t for the
/// surface test, absolute in tau/H near the special sets).
pub fn classify(p: &PhasePoint, tol: f64) -> Result<RegionLabel> {
    let PhasePoint { tau, t, h } = *p;
    if !tau.is_finite() || !t.is_finite() || !h.is_finite() {
        return Err(Error::Domain("classify: non-finite input".into()));
    }
    if h.abs() > 700.0 {
        return Ok(RegionLabel::Boundary(BoundaryKind::QWall));
    }
    if tau.abs() <= tol {
        return Ok(RegionLabel::Boundary(BoundaryKind::TauZero));
    }
    if (tau - 1.0).abs() <= tol {
        return Ok(RegionLabel::Boundary(BoundaryKind::TauOne));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Ok(RegionLabel::Outside);
    }
    if t.abs() <= tol {
        return Ok(RegionLabel::Boundary(BoundaryKind::TZero));
    }
    if t > 0.0 {
        return Ok(RegionLabel::Outside);
    }
    let t_cr = t_critical(tau, h)?;
    let scale = t_cr.abs().max(1e-6);
    if t < t_cr - tol * scale {
        return Ok(RegionLabel::Outside);
    }
    if t > t_cr + tol * scale {
        return Ok(RegionLabel::GenusZeroInterior);
    }
    // On the critical surface: split by the gamma_b curve at this H.
    let tau_g = gamma_b_tau(h)?;
    if (tau - tau_g).abs() <= tol {
        if h.abs() <= tol && (tau - 0.25).abs() <= tol {
            return Ok(RegionLabel::Multicritical);
        }
        return Ok(RegionLabel::GammaB);
    }
    if tau < tau_g {
        Ok(RegionLabel::LowTempSurface)
    } else {
        Ok(RegionLabel::HighTempSurface)
    }
}

// ---------------------------------------------------------------------------
// Discriminant
// ---------------------------------------------------------------------------

/// Discriminant of the spectral-curve sextic, as a polynomial in
/// (t, tau^2, C) with C = cosh H.  Vanishes exactly on the critical surfaces.
pub fn discriminant_j(tau: f64, t: f64, cosh_h: f64) -> f64 {
    let c = cosh_h;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t2 * t2;
    let t5 = t4 * t;
    let t6 = t4 * t2;
    let t7 = t6 * t;
    let t8 = t4 * t4;
    let s2 = tau * tau;
    let s4 = s2 * s2;
    let s6 = s4 * s2;
    let s8 = s4 * s4;
    let s10 = s8 * s2;
    let s12 = s8 * s4;
    let s14 = s12 * s2;
    let s16 = s8 * s8;

    32_400_000.0 * t * s4 * c.powi(5)
        + 1_350_000.0 * s4 * (s4 + 288.0 * t2 - 2.0 * s2 + 1.0) * c.powi(4)
        + 36_000.0
            * t
            * s2
            * (3160.0 * s6 + 28026.0 * t2 * s2 - 2745.0 * s4 + 4374.0 * t2 - 1215.0 * s2)
            * c.powi(3)
        + (3_840_000.0 * s12 - 423_014_400.0 * t2 * s8 - 10_560_000.0 * s10
            - 1_700_611_200.0 * t4 * s4
            - 235_612_800.0 * t2 * s6
            + 7_440_000.0 * s8
            - 306_110_016.0 * t6
            + 2_173_003_200.0 * t4 * s2
            - 666_646_200.0 * t2 * s4
            + 1_440_000.0 * s6
            + 25_223_400.0 * t2 * s2
            - 2_160_000.0 * s4)
            * c
            * c
        + (-10_174_464.0 * t * s12 + 403_107_840.0 * t3 * s8 + 60_549_120.0 * t * s10
            - 3_809_369_088.0 * t5 * s4
            + 2_205_895_680.0 * t3 * s6
            - 197_475_840.0 * t * s8
            - 3_673_320_192.0 * t7
            + 8_865_853_056.0 * t5 * s2
            - 2_979_218_880.0 * t3 * s4
            + 147_277_440.0 * t * s6
            - 25_509_168.0 * t5
            + 249_930_360.0 * t3 * s2
            - 1_451_520.0 * t * s4
            + 1_275_264.0 * t * s2)
            * c
        - 65536.0 * s16
        + 5_308_416.0 * t2 * s12
        + 1_277_952.0 * s14
        - 161_243_136.0 * t4 * s8
        - 29_859_840.0 * t2 * s10
        - 7_827_456.0 * s12
        + 2_176_782_336.0 * t6 * s4
        - 362_797_056.0 * t4 * s6
        - 21_772_800.0 * t2 * s8
        + 15_861_760.0 * s10
        - 11_019_960_576.0 * t8
        + 8_979_227_136.0 * t6 * s2
        - 5_048_925_696.0 * t4 * s4
        + 806_993_280.0 * t2 * s6
        - 12_437_760.0 * s8
        - 153_055_008.0 * t6
        + 583_036_704.0 * t4 * s2
        + 42_729_120.0 * t2 * s4
        + 2_624_256.0 * s6
        - 531_441.0 * t4
        + 6_601_824.0 * t2 * s2
        + 546_048.0 * s4
        + 20736.0 * s2
}

/// Positive magnitude scale for [`discriminant_j`], for relative residuals.
pub fn discriminant_scale(tau: f64, t: f64, cosh_h: f64) -> f64 {
    let c = cosh_h;
    let t2 = t * t;
    let s2 = tau * tau;
    let s4 = s2 * s2;
    [
        (32_400_000.0 * t * s4 * c.powi(5)).abs(),
        (1_350_000.0 * s4 * (s4 + 288.0 * t2 + 2.0 * s2 + 1.0) * c.powi(4)).abs(),
        (11_019_960_576.0 * t2.powi(4)).abs(),
        (2_176_782_336.0 * t2.powi(3) * s4).abs(),
        (65536.0 * s4.powi(4)).abs(),
        1.0,
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Inverse map
// ---------------------------------------------------------------------------

/// Inverts (tau, t, q) back to (a, b, c) by coarse search plus damped Newton
/// with a finite-difference Jacobian.  The identity sigma = a^2 b c of the
/// analytic branch is verified on the result as a consistency check.
pub fn invert_phase_point(p: &PhasePoint) -> Result<AbcPoint> {
    let target = [p.tau.ln(), p.t, p.h];
    let residual = |x: &[f64; 3]| -> [f64; 3] {
        let pt = AbcPoint {
            a: x[0],
            b: x[1],
            c: x[2],
        };
        let img = map_abc_unchecked(&pt);
        [img.tau.ln() - target[0], img.t - target[1], img.h - target[2]]
    };
    let norm = |r: &[f64; 3]| r[0] * r[0] + r[1] * r[1] * 1e4 + r[2] * r[2];

    // Coarse seed over the interior of R.
    let n = 24;
    let mut best = [1.05, 0.8, 0.4];
    let mut best_n = f64::INFINITY;
    for ib in 1..n {
        let b = ib as f64 / n as f64;
        for ia in 1..n {
            let a = 1.0 + (ia as f64 / n as f64) * (1.0 / b - 1.0) * 0.999;
            for ic in 1..n {
                let c = (ic as f64 / n as f64) * b;
                let r = residual(&[a, b, c]);
                let rn = norm(&r);
                if rn < best_n {
                    best_n = rn;
                    best = [a, b, c];
                }
            }
        }
    }

    // Damped Newton.
    let mut x = best;
    let mut rn;
    for _ in 0..60 {
        let r = residual(&x);
        rn = norm(&r);
        if rn < 1e-28 {
            break;
        }
        // Finite-difference Jacobian.
        let mut jac = [[0.0f64; 3]; 3];
        for j in 0..3 {
            let hstep = 1e-7 * (1.0 + x[j].abs());
            let mut xp = x;
            let mut xm = x;
            xp[j] += hstep;
            xm[j] -= hstep;
            let rp = residual(&xp);
            let rm = residual(&xm);
            for i in 0..3 {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * hstep);
            }
        }
        let delta = solve3(&jac, &r).ok_or_else(|| Error::NoConvergence {
            context: "invert_phase_point: singular Jacobian".into(),
            residual: rn.sqrt(),
        })?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = [x[0] - lambda * delta[0], x[1] - lambda * delta[1], x[2] - lambda * delta[2]];
            let pt = AbcPoint {
                a: cand[0],
                b: cand[1],
                c: cand[2],
            };
            if pt.in_region(1e-9) {
                let rc = residual(&cand);
                if norm(&rc) < rn {
                    x = cand;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    let r = residual(&x);
    if norm(&r).sqrt() > 1e-9 {
        return Err(Error::NoConvergence {
            context: "invert_phase_point".into(),
            residual: norm(&r).sqrt(),
        });
    }
    Ok(AbcPoint {
        a: x[0],
        b: x[1],
        c: x[2],
    })
}

/// Solves a 3x3 linear system by Gaussian elimination with partial pivoting.
fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = [
        [a[0][0], a[0][1], a[0][2], b[0]],
        [a[1][0], a[1][1], a[1][2], b[1]],
        [a[2][0], a[2][1], a[2][2], b[2]],
    ];
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut s = m[i][3];
        for k in (i + 1)..3 {
            s -= m[i][k] * x[k];
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}
