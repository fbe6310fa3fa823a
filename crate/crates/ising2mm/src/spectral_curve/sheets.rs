//! Inversion of z = X(u) on a chosen sheet by root tracking.
//!
//! X(u) = A (u + (a^2+b^2)/u - a^2 b^2/(3u^3)) is four-to-one: clearing
//! denominators gives the quartic
//!
//!   3 A u^4 - 3 z u^3 + 3 A (a^2+b^2) u^2 - A a^2 b^2 = 0,
//!
//! whose four roots are the preimages of z on the four sheets.  Sheets are
//! labelled by their behaviour as |z| -> infinity:
//!
//!   sheet 1:  u ~ z / A                      (cut [-alpha, alpha])
//!   sheet 3:  u ~ -(a^2 b^2 A / (3 z))^(1/3) (cut (-inf, -beta])
//!   sheets 2, 4: the remaining cube-root branches
//!             (cuts [-alpha, alpha] u {|z| >= beta} and [beta, inf)).
//!
//! A point is inverted by starting at a far reference point, matching the
//! quartic roots to those asymptotic targets, and continuing the full root
//! quadruple along a path that stays off the real axis until the endpoint:
//! a fixed-argument modulus descent when Im z != 0, and a dog-leg (descent
//! along the imaginary axis, then an arc at fixed modulus) when z is real,
//! so boundary values on the cuts are reached from a definite side.

use num_complex::Complex64;

use super::CurveData;
use crate::error::{Error, Result};

/// Side from which a real z on a cut is approached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Limit from the upper half plane (Im z -> 0+).
    Above,
    /// Limit from the lower half plane (Im z -> 0-).
    Below,
}

const PERMS: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

/// Inverts z = X(u) on the given sheet (1..=4).
///
/// For real z the boundary value from above (Im z -> 0+) is returned; use
/// [`invert_sheet_side`] to choose the side explicitly.
pub fn invert_sheet(cd: &CurveData, sheet: usize, z: Complex64) -> Result<Complex64> {
    invert_sheet_side(cd, sheet, z, Side::Above)
}

/// Inverts z = X(u) on the given sheet, approaching real z from `side`.
///
/// `side` only matters when z is exactly real (boundary values on the cuts);
/// for Im z != 0 it is ignored.
pub fn invert_sheet_side(cd: &CurveData, sheet: usize, z: Complex64, side: Side) -> Result<Complex64> {
    if !(1..=4).contains(&sheet) {
        return Err(Error::Domain(format!(
            "invert_sheet: sheet index {sheet} outside 1..=4"
        )));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain("invert_sheet: non-finite z".into()));
    }
    if z.norm() == 0.0 {
        return Err(Error::Domain(
            "invert_sheet: z = 0 is not supported; perturb the evaluation point".into(),
        ));
    }

    let r_far = (40.0 * cd.alpha.max(cd.beta).max(cd.a_scale).max(1.0)).max(4.0 * z.norm());
    let path = build_path(z, side, r_far);

    // Roots and sheet labels at the far starting point.
    let start = path[0];
    let targets = far_targets(cd, start);
    let mut roots = targets;
    dk_iterate(cd, start, &mut roots)?;
    let perm = best_match(&targets, &roots);
    // Uniqueness of the labelling: every matched root must sit well inside
    // the separation scale of the asymptotic targets.
    let minsep_t = min_pairwise(&targets);
    for i in 0..4 {
        if (roots[perm[i]] - targets[i]).norm() > 0.3 * minsep_t {
            return Err(Error::AmbiguousSheet { z_re: z.re, z_im: z.im });
        }
    }
    let mut labelled = [Complex64::default(); 4];
    for i in 0..4 {
        labelled[i] = roots[perm[i]];
    }
    let mut roots = labelled;

    // Continue the quadruple along the path.
    let mut cur = start;
    for &zt in &path[1..] {
        advance(cd, &mut roots, &mut cur, zt, 0)?;
    }

    let u_scale = roots.iter().map(|u| u.norm()).fold(1.0f64, f64::max);
    let sep = min_pairwise(&roots);
    let z_scale = cd.alpha.max(cd.beta).max(1.0);
    let d_bp = [cd.alpha, -cd.alpha, cd.beta, -cd.beta]
        .iter()
        .map(|bp| (z - bp).norm())
        .fold(f64::INFINITY, f64::min);
    if sep < 1e-8 * u_scale || d_bp < 1e-12 * z_scale {
        return Err(Error::BranchPointProximity {
            z_re: z.re,
            z_im: z.im,
            separation: sep,
        });
    }

    // Final polish on X(u) - z itself, then verify.
    let mut u = roots[sheet - 1];
    for _ in 0..4 {
        let f = cd.x(u) - z;
        let d = cd.x_prime(u);
        if d.norm() == 0.0 {
            break;
        }
        u -= f / d;
    }
    let res = (cd.x(u) - z).norm();
    if res > 1e-10 * z.norm().max(1.0) {
        return Err(Error::NoConvergence {
            context: format!("sheet {sheet} inversion at z = {z}"),
            residual: res,
        });
    }
    Ok(u)
}

/// Asymptotic root positions at a far point z0, indexed by sheet - 1.
fn far_targets(cd: &CurveData, z0: Complex64) -> [Complex64; 4] {
    let (a, b) = (cd.abc.a, cd.abc.b);
    let t1 = z0 / cd.a_scale;
    let w = Complex64::new(a * a * b * b * cd.a_scale / 3.0, 0.0) / z0;
    let t3 = -w.powf(1.0 / 3.0);
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let (t2, t4) = if z0.im > 0.0 {
        (omega * t3, omega * omega * t3)
    } else {
        (omega * omega * t3, omega * t3)
    };
    [t1, t2, t3, t4]
}

/// Path from a far reference point down to z, avoiding the real axis except
/// possibly at the final point.
fn build_path(z: Complex64, side: Side, r_far: f64) -> Vec<Complex64> {
    let mut path = Vec::new();
    let ratio = 1.25f64;
    if z.im != 0.0 {
        let arg = z.arg();
        let n = ((r_far / z.norm()).ln() / ratio.ln()).ceil().max(1.0) as usize;
        for k in 0..=n {
            let m = r_far * (z.norm() / r_far).powf(k as f64 / n as f64);
            path.push(Complex64::from_polar(m, arg));
        }
        // Land exactly on z.
        *path.last_mut().unwrap() = z;
    } else {
        let leg_arg = match side {
            Side::Above => std::f64::consts::FRAC_PI_2,
            Side::Below => -std::f64::consts::FRAC_PI_2,
        };
        let n = ((r_far / z.norm()).ln() / ratio.ln()).ceil().max(1.0) as usize;
        for k in 0..=n {
            let m = r_far * (z.norm() / r_far).powf(k as f64 / n as f64);
            path.push(Complex64::from_polar(m, leg_arg));
        }
        let end_arg = z.arg(); // 0 or pi
        let total = end_arg - leg_arg;
        let steps = (total.abs() / 0.1).ceil().max(1.0) as usize;
        for k in 1..=steps {
            let ang = leg_arg + total * (k as f64 / steps as f64);
            path.push(Complex64::from_polar(z.norm(), ang));
        }
        *path.last_mut().unwrap() = z;
    }
    path
}

/// One continuation step cur -> zt with adaptive bisection of the segment.
fn advance(
    cd: &CurveData,
    roots: &mut [Complex64; 4],
    cur: &mut Complex64,
    zt: Complex64,
    depth: usize,
) -> Result<()> {
    let old = *roots;
    let minsep = min_pairwise(&old);
    let mut trial = old;
    dk_iterate(cd, zt, &mut trial)?;
    let perm = best_match(&old, &trial);
    let mut moved = 0.0f64;
    for i in 0..4 {
        moved = moved.max((trial[perm[i]] - old[i]).norm());
    }
    if moved <= 0.45 * minsep {
        for i in 0..4 {
            roots[i] = trial[perm[i]];
        }
        *cur = zt;
        return Ok(());
    }
    if depth >= 48 {
        return Err(Error::NoConvergence {
            context: format!("sheet tracking stalled near z = {zt}"),
            residual: moved,
        });
    }
    let mid = (*cur + zt) * 0.5;
    advance(cd, roots, cur, mid, depth + 1)?;
    advance(cd, roots, cur, zt, depth + 1)
}

/// Durand-Kerner iteration for the monic quartic
/// u^4 - (z/A) u^3 + (a^2+b^2) u^2 - a^2 b^2 / 3, seeded from `roots`.
fn dk_iterate(cd: &CurveData, z: Complex64, roots: &mut [Complex64; 4]) -> Result<()> {
    let (a, b) = (cd.abc.a, cd.abc.b);
    let c3 = -z / cd.a_scale;
    let c2 = Complex64::new(a * a + b * b, 0.0);
    let c0 = Complex64::new(-a * a * b * b / 3.0, 0.0);
    let p = |u: Complex64| ((u + c3) * u + c2) * u * u + c0;

    // Nudge exactly coincident seeds apart so the correction is defined.
    for i in 0..4 {
        for j in 0..i {
            if roots[i] == roots[j] {
                roots[i] += Complex64::new(1e-6, 1e-6) * (1.0 + roots[i].norm());
            }
        }
    }
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        let mut scale = 1.0f64;
        for i in 0..4 {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if j != i {
                    den *= roots[i] - roots[j];
                }
            }
            if den.norm() == 0.0 {
                return Err(Error::NoConvergence {
                    context: format!("root finder degenerate at z = {z}"),
                    residual: f64::INFINITY,
                });
            }
            let step = p(roots[i]) / den;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
            scale = scale.max(roots[i].norm());
        }
        if max_step < 1e-14 * scale {
            return Ok(());
        }
    }
    // Accept a slightly loose quadruple; the endpoint polish and the residual
    // check in the caller are the real gatekeepers.
    Ok(())
}

fn best_match(old: &[Complex64; 4], new: &[Complex64; 4]) -> [usize; 4] {
    let mut best = PERMS[0];
    let mut best_cost = f64::INFINITY;
    for perm in PERMS {
        let mut cost = 0.0;
        for i in 0..4 {
            cost += (new[perm[i]] - old[i]).norm();
        }
        if cost < best_cost {
            best_cost = cost;
            best = perm;
        }
    }
    best
}

fn min_pairwise(pts: &[Complex64; 4]) -> f64 {
    let mut sep = f64::INFINITY;
    for i in 0..4 {
        for j in 0..i {
            sep = sep.min((pts[i] - pts[j]).norm());
        }
    }
    sep
}
