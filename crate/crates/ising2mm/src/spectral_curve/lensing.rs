//! Lensing inequalities: the nested-support geometry of the u-plane curves.
//!
//! For admissible (a, b, c) the outer radius dominates a, the inner radius
//! is dominated by b, and both radii are monotone in the second parameter,
//! so the (a, c) curves nest inside the (a, b) ones.  Two reduced margins
//! certify that the curves stay clear of the unit circle where required,
//! and the product identity (r+ r-)^2 = a^2 b^2 (1 - (4/3) sin^2 theta)
//! ties the two radii together.  `check_lensing` verifies all of this on a
//! grid and returns summary statistics; any violation is reported as a
//! certificate failure with its witness angle.

use super::measures::{r_minus, r_plus};
use super::CurveData;
use crate::error::{Error, Result};
use crate::phase_space::{den_a, AbcPoint};

/// Margin tolerance: inequalities that are equalities on the region boundary
/// may dip below zero by rounding, never by more than this.
const MARGIN_TOL: f64 = 1e-13;
/// Base tolerance for the exact product identity in double precision.  The
/// residual of (r+ r-)^2 - a^2 b^2 (1 - 4/3 sin^2 theta) inherits the
/// rounding error of r-^2 (about eps * (a^2 + b^2) / 2) amplified by r+^2,
/// so the check scales the tolerance by r+^2 (a^2 + b^2).
const PRODUCT_TOL_BASE: f64 = 1e-15;

/// Summary of a successful lensing check.
#[derive(Clone, Copy, Debug)]
pub struct LensingCertificate {
    /// Number of (a, b, c) triples checked.
    pub points: usize,
    /// Total number of inequality evaluations.
    pub evaluations: usize,
    /// Worst inequality margin encountered (allowed down to -1e-13).
    pub min_margin: f64,
    /// Worst absolute residual of the product identity.
    pub max_product_residual: f64,
    /// Smallest certificate constant q1 over the grid.
    pub min_q1: f64,
    /// Smallest certificate constant q1-tilde over the grid.
    pub min_q1_tilde: f64,
}

/// The two families of local constants at the branch points.
///
/// The certificate constants are the combinations whose positivity is
/// certified together with the grid inequalities; the Taylor coefficients
/// are the actual 3/2-power coefficients of tau * Omega at alpha and beta,
/// i.e. the limits of (tau Omega(u(z)) - tau Omega(bp) - tau Y(bp)(z - bp))
/// / (z - bp)^(3/2).  The two differ by an explicit positive factor, so
/// positivity of one family is equivalent to positivity of the other.
#[derive(Clone, Copy, Debug)]
pub struct LensingCoefficients {
    pub q1_certificate: f64,
    pub q1_tilde_certificate: f64,
    pub q1_taylor: f64,
    pub q1_tilde_taylor: f64,
}

/// Certificate constants and true 3/2-Taylor coefficients at the curve.
pub fn lensing_coefficients(cd: &CurveData) -> LensingCoefficients {
    let (a, b, c) = (cd.abc.a, cd.abc.b, cd.abc.c);
    let aa = cd.a_scale;
    let a2 = a * a;
    let b2 = b * b;
    let a4 = a2 * a2;
    let b4 = b2 * b2;
    let q1_certificate = 2.0 * (a4 - b4) * (a4 - 1.0) * (1.0 - a4 * b4)
        / (a.sqrt() * aa.powf(1.5) * (a2 - b2).powf(1.5));
    let q1_tilde_certificate = 2.0 * (a4 - b4) * (1.0 - b4) * (1.0 - a4 * b4)
        / (b.sqrt() * aa.powf(1.5) * (a2 - b2).powf(1.5));
    let d = den_a(a, b, c);
    let q1_taylor = 2.0 * (a4 - 1.0) * (1.0 - a2 * c * c)
        / (a.sqrt() * aa.powf(1.5) * (a2 - b2).sqrt() * d);
    let q1_tilde_taylor = 2.0 * (1.0 - a2 * b2) * (1.0 - b2 * c * c)
        / (b.sqrt() * aa.powf(1.5) * (a2 - b2).sqrt() * d);
    LensingCoefficients {
        q1_certificate,
        q1_tilde_certificate,
        q1_taylor,
        q1_tilde_taylor,
    }
}

struct PointStats {
    evaluations: usize,
    min_margin: f64,
    max_product_residual: f64,
}

fn check_point(a: f64, b: f64, c: f64, n_theta: usize) -> Result<PointStats> {
    let mut stats = PointStats {
        evaluations: 0,
        min_margin: f64::INFINITY,
        max_product_residual: 0.0,
    };
    let pi = std::f64::consts::PI;
    let fail = |check: &str, theta: f64, margin: f64| -> Error {
        Error::CertificateFailure {
            check: format!("{check} at (a,b,c)=({a},{b},{c})"),
            theta,
            margin,
        }
    };
    // Outer curve: theta in (0, pi).
    for k in 1..n_theta {
        let th = pi * k as f64 / n_theta as f64;
        let rp_b = r_plus(th, a, b);
        let rp_c = r_plus(th, a, c);
        let m1 = rp_b - a;
        let m3 = rp_b - rp_c;
        let s2 = th.sin() * th.sin();
        let red1 = s2 - 0.75 * (1.0 - 1.0 / (b * b) - 1.0 / (a * a) + 1.0 / (a * a * b * b));
        stats.evaluations += 3;
        stats.min_margin = stats.min_margin.min(m1).min(m3).min(red1);
        if m1 < -MARGIN_TOL {
            return Err(fail("r_plus >= a", th, m1));
        }
        if m3 < -MARGIN_TOL {
            return Err(fail("r_plus(b) >= r_plus(c)", th, m3));
        }
        if red1 <= 0.0 {
            return Err(fail("outer reduced margin", th, red1));
        }
    }
    // Inner curve: theta in (0, pi/3) and (2pi/3, pi).
    for half in 0..2 {
        for k in 1..n_theta {
            let th = if half == 0 {
                pi / 3.0 * k as f64 / n_theta as f64
            } else {
                2.0 * pi / 3.0 + pi / 3.0 * k as f64 / n_theta as f64
            };
            let rm_b = r_minus(th, a, b)?;
            let rm_c = r_minus(th, a, c)?;
            let m2 = b - rm_b;
            let m4 = rm_b - rm_c;
            let s2 = th.sin() * th.sin();
            let red2 = s2 - 0.75 * (1.0 - 1.0 / (a * a * b * b));
            let rp_b = r_plus(th, a, b);
            let prod = (rp_b * rm_b).powi(2) - a * a * b * b * (1.0 - 4.0 / 3.0 * s2);
            let prod_tol = PRODUCT_TOL_BASE * (1.0 + rp_b * rp_b * (a * a + b * b));
            stats.evaluations += 4;
            stats.min_margin = stats.min_margin.min(m2).min(m4).min(red2);
            stats.max_product_residual = stats.max_product_residual.max(prod.abs());
            if m2 < -MARGIN_TOL {
                return Err(fail("r_minus <= b", th, m2));
            }
            if m4 < -MARGIN_TOL {
                return Err(fail("r_minus(b) >= r_minus(c)", th, m4));
            }
            if red2 <= 0.0 {
                return Err(fail("inner reduced margin", th, red2));
            }
            if prod.abs() > prod_tol {
                return Err(fail("product identity", th, prod.abs()));
            }
        }
    }
    Ok(stats)
}

/// Runs the lensing certificate at a single admissible point.
pub fn check_lensing_point(p: &AbcPoint, n_theta: usize) -> Result<LensingCertificate> {
    let (a, b, c) = (p.a, p.b, p.c);
    let stats = check_point(a, b, c, n_theta)?;
    let cd = super::curve_from_abc(p)?;
    let co = lensing_coefficients(&cd);
    if co.q1_certificate <= 0.0 || co.q1_tilde_certificate <= 0.0 {
        return Err(Error::CertificateFailure {
            check: format!("q1 positivity at (a,b,c)=({a},{b},{c})"),
            theta: 0.0,
            margin: co.q1_certificate.min(co.q1_tilde_certificate),
        });
    }
    Ok(LensingCertificate {
        points: 1,
        evaluations: stats.evaluations,
        min_margin: stats.min_margin,
        max_product_residual: stats.max_product_residual,
        min_q1: co.q1_certificate,
        min_q1_tilde: co.q1_tilde_certificate,
    })
}

/// Runs the full lensing certificate over an nb x na x nc grid of (b, a, c)
/// with `n_theta`-point angle grids per curve family.  The b grid spans
/// [3/16, 15/16]; a and c range over the interior of their admissible
/// intervals (1, 1/b) and (0, b).
pub fn check_lensing(
    nb: usize,
    na: usize,
    nc: usize,
    n_theta: usize,
) -> Result<LensingCertificate> {
    if nb < 2 || na == 0 || nc == 0 || n_theta < 2 {
        return Err(Error::Domain(
            "check_lensing: need nb >= 2, na, nc >= 1 and n_theta >= 2".into(),
        ));
    }
    let mut cert = LensingCertificate {
        points: 0,
        evaluations: 0,
        min_margin: f64::INFINITY,
        max_product_residual: 0.0,
        min_q1: f64::INFINITY,
        min_q1_tilde: f64::INFINITY,
    };
    for jb in 0..nb {
        let b = 3.0 / 16.0 + jb as f64 / (nb - 1) as f64 * (15.0 / 16.0 - 3.0 / 16.0);
        for ja in 1..=na {
            let a = 1.0 + ja as f64 / (na + 1) as f64 * (1.0 / b - 1.0);
            for jc in 1..=nc {
                let c = jc as f64 / (nc + 1) as f64 * b;
                let point = check_lensing_point(&AbcPoint::new(a, b, c)?, n_theta)?;
                cert.points += 1;
                cert.evaluations += point.evaluations;
                cert.min_margin = cert.min_margin.min(point.min_margin);
                cert.max_product_residual =
                    cert.max_product_residual.max(point.max_product_residual);
                cert.min_q1 = cert.min_q1.min(point.min_q1);
                cert.min_q1_tilde = cert.min_q1_tilde.min(point.min_q1_tilde);
            }
        }
    }
    Ok(cert)
}
