//! Double-double arithmetic.
//!
//! A `Dd` value is an unevaluated sum `hi + lo` of two doubles with
//! `|lo| <= ulp(hi)/2`, giving roughly 31 significant decimal digits.  The
//! crate uses it where plain `f64` pipelines lose too much to cancellation:
//! high-order series coefficients and the Maclaurin evaluation of the Airy
//! function.  Only the operations actually needed are implemented.
//!
//! The error-free transformations below are classical (Dekker's two-sum and
//! the FMA-based two-product); `f64::mul_add` compiles to a fused multiply-add
//! or falls back to a correctly rounded software implementation, so the
//! product splitting is exact either way.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// Builds a normalized value from two components.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_i64(n: i64) -> Dd {
        // i64 up to 2^53 converts exactly; split larger values.
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Dd::new(hi, lo)
    }

    pub fn from_ratio(num: i64, den: i64) -> Dd {
        Dd::from_i64(num) / Dd::from_i64(den)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }

    /// ln 2 split across two doubles.
    pub const LN2: Dd = Dd {
        hi: 0.693_147_180_559_945_3,
        lo: 2.319_046_813_846_299_6e-17,
    };

    /// Exponential to full double-double width: reduction by multiples of
    /// ln 2, Taylor series on the reduced argument, exact rescaling by 2^m.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let m = (self.hi / std::f64::consts::LN_2).round();
        let r = self - Dd::LN2 * Dd::from_f64(m);
        // |r| <= ln2 / 2, so the terms drop below 1e-40 within ~35 steps.
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for k in 1..40 {
            term = term * r / Dd::from_i64(k);
            sum = sum + term;
            if term.hi.abs() < 1e-40 {
                break;
            }
        }
        let scale = 2.0f64.powi(m as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }

    /// Natural logarithm for positive values: one Newton step with a
    /// quadratic correction on top of the double-precision logarithm, with the
    /// residual evaluated by the double-double exponential.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0, "Dd::ln of non-positive value");
        let y0 = Dd::from_f64(self.hi.ln());
        let d = self * (-y0).exp() - Dd::ONE;
        y0 + d - d * d * Dd::from_f64(0.5)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        // Long division with three quotient refinements.
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e) + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_tracks_small_residuals() {
        let one = Dd::ONE;
        let eps = Dd::from_f64(1e-25);
        let x = one + eps;
        let y = x - one;
        assert!((y.to_f64() - 1e-25).abs() < 1e-40);
    }

    #[test]
    fn ratio_is_accurate() {
        // 1/3 in double-double: hi is the rounded double, lo the correction.
        let third = Dd::from_ratio(1, 3);
        let back = third * Dd::from_i64(3);
        assert!((back - Dd::ONE).abs().to_f64() < 1e-31);
    }

    #[test]
    fn ln_matches_known_value() {
        let two = Dd::from_i64(2);
        let l = two.ln();
        // ln 2 = 0.6931471805599453094172321214581766...; the second line is
        // the exact residual of the nearest double.
        assert!((l.hi - 0.6931471805599453).abs() < 1e-16);
        let residual = (l + Dd::from_f64(-0.6931471805599453)).to_f64();
        assert!((residual - 2.3190468138462996e-17).abs() < 1e-26);
    }
}
