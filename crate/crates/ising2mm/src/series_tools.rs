//! Truncated power-series engine: ring arithmetic, logarithm, composition,
//! reversion, and Lagrange-inversion coefficient extraction.
//!
//! Series are dense coefficient vectors `c0..cN` over a scalar type that can be
//! `f64`, double-double (`Dd`), or exact rationals (`BigRational`).  The same
//! generic routines therefore serve the default float pipeline, the extended
//! precision mode used for deep coefficient extraction, and the exact mode used
//! when the model couplings are rational.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Scalar ring/field interface shared by `f64`, `Dd` and `BigRational`.
pub trait Scalar:
    Clone
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Natural logarithm when it exists in the scalar domain.
    ///
    /// Float types return `None` for non-positive arguments; rationals only
    /// admit `ln(1) = 0` exactly and return `None` otherwise.
    fn ln(&self) -> Option<Self>;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn ln(&self) -> Option<Self> {
        if *self > 0.0 {
            Some(f64::ln(*self))
        } else {
            None
        }
    }
}

impl Scalar for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }
    fn one() -> Self {
        Dd::ONE
    }
    fn from_i64(n: i64) -> Self {
        Dd::from_i64(n)
    }
    fn is_zero(&self) -> bool {
        Dd::is_zero(*self)
    }
    fn to_f64(&self) -> f64 {
        Dd::to_f64(*self)
    }
    fn ln(&self) -> Option<Self> {
        if self.hi > 0.0 {
            Some(Dd::ln(*self))
        } else {
            None
        }
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_positive() {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        })
    }
    fn ln(&self) -> Option<Self> {
        if num_traits::One::is_one(self) {
            Some(<Self as Scalar>::zero())
        } else {
            None
        }
    }
}

/// Dense truncated power series `c0 + c1 t + ... + cN t^N`.
///
/// All arithmetic is closed at the retained order; operations never read
/// coefficients beyond it.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<S: Scalar> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Wraps a non-empty coefficient vector `c0..cN`.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        TruncatedSeries { coeffs }
    }

    /// The zero series kept to the given order.
    pub fn zero_series(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![S::zero(); order + 1],
        }
    }

    /// Highest retained power `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`, zero beyond the retained order.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Copy truncated (or zero-padded) to the given order.
    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        for k in 0..=order {
            coeffs.push(self.coeff(k));
        }
        TruncatedSeries { coeffs }
    }

    /// Coefficient-wise sum at the smaller of the two orders.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        TruncatedSeries { coeffs }
    }

    /// Coefficient-wise difference at the smaller of the two orders.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        TruncatedSeries { coeffs }
    }

    /// Multiplies every coefficient by a scalar.
    pub fn scale(&self, s: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * s.clone()).collect();
        TruncatedSeries { coeffs }
    }

    /// Formal derivative, one order lower (constant input stays constant zero).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return TruncatedSeries {
                coeffs: vec![S::zero()],
            };
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| S::from_i64(k as i64) * self.coeff(k))
            .collect();
        TruncatedSeries { coeffs }
    }

    /// Formal antiderivative with zero constant term, one order higher.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(S::zero());
        for k in 0..self.coeffs.len() {
            coeffs.push(self.coeff(k) / S::from_i64((k + 1) as i64));
        }
        TruncatedSeries { coeffs }
    }

    /// Horner evaluation of the truncated polynomial at `x`.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }
}

/// Convolution of raw coefficient slices truncated at order `n`.
fn mul_trunc<S: Scalar>(a: &[S], b: &[S], n: usize) -> Vec<S> {
    let mut out = vec![S::zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
            }
        }
    }
    out
}

/// Reciprocal of raw coefficients truncated at order `n`; requires `a[0] != 0`.
fn recip_trunc<S: Scalar>(a: &[S], n: usize) -> Result<Vec<S>> {
    if a.is_empty() || a[0].is_zero() {
        return Err(Error::Domain(
            "series reciprocal requires a nonzero constant term".into(),
        ));
    }
    let mut out = vec![S::zero(); n + 1];
    out[0] = S::one() / a[0].clone();
    for m in 1..=n {
        let mut acc = S::zero();
        for j in 1..=m {
            let aj = if j < a.len() { a[j].clone() } else { S::zero() };
            if !aj.is_zero() {
                acc = acc + aj * out[m - j].clone();
            }
        }
        out[m] = -(acc / a[0].clone());
    }
    Ok(out)
}

/// Product of two series at the smaller of the two orders.
pub fn series_mul<S: Scalar>(f: &TruncatedSeries<S>, g: &TruncatedSeries<S>) -> TruncatedSeries<S> {
    let n = f.order().min(g.order());
    TruncatedSeries {
        coeffs: mul_trunc(&f.coeffs, &g.coeffs, n),
    }
}

/// Integer power by repeated multiplication; `s^0` is the constant one series.
pub fn series_pow<S: Scalar>(s: &TruncatedSeries<S>, k: u32) -> TruncatedSeries<S> {
    let n = s.order();
    let mut out = TruncatedSeries::zero_series(n);
    out.coeffs[0] = S::one();
    let mut base = s.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            out = series_mul(&out, &base);
        }
        e >>= 1;
        if e > 0 {
            base = series_mul(&base, &base);
        }
    }
    out
}

/// Multiplicative inverse `1/s` at the order of `s`; requires `c0 != 0`.
pub fn series_reciprocal<S: Scalar>(s: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    Ok(TruncatedSeries {
        coeffs: recip_trunc(&s.coeffs, s.order())?,
    })
}

/// Exponential of a series with zero constant term.
pub fn series_exp<S: Scalar>(s: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    if !s.coeff(0).is_zero() {
        return Err(Error::Domain(
            "series exponential requires a zero constant term".into(),
        ));
    }
    let n = s.order();
    let mut out = vec![S::zero(); n + 1];
    out[0] = S::one();
    // e_m = (1/m) sum_{j=1..m} j u_j e_{m-j}, from E' = u' E.
    for m in 1..=n {
        let mut acc = S::zero();
        for j in 1..=m {
            let uj = s.coeff(j);
            if !uj.is_zero() {
                acc = acc + S::from_i64(j as i64) * uj * out[m - j].clone();
            }
        }
        out[m] = acc / S::from_i64(m as i64);
    }
    Ok(TruncatedSeries { coeffs: out })
}

/// Logarithm of a series whose constant term has a scalar logarithm.
///
/// Computed as `ln c0 + integral(s'/s)`; floats require `c0 > 0`, rationals
/// require `c0 = 1` exactly.
pub fn series_log<S: Scalar>(s: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    let c0 = s.coeff(0);
    let lead = c0.ln().ok_or_else(|| {
        Error::Domain("series logarithm requires a positive (or exactly one) constant term".into())
    })?;
    let n = s.order();
    if n == 0 {
        return Ok(TruncatedSeries { coeffs: vec![lead] });
    }
    let inv = recip_trunc(&s.coeffs, n - 1)?;
    let ds = s.derivative();
    let dlog = mul_trunc(&ds.coeffs, &inv, n - 1);
    let mut out = vec![S::zero(); n + 1];
    out[0] = lead;
    for (m, item) in out.iter_mut().enumerate().take(n + 1).skip(1) {
        *item = dlog[m - 1].clone() / S::from_i64(m as i64);
    }
    Ok(TruncatedSeries { coeffs: out })
}

/// Composition `f(g(t))`; requires `g` to have zero constant term.
pub fn series_compose<S: Scalar>(
    f: &TruncatedSeries<S>,
    g: &TruncatedSeries<S>,
) -> Result<TruncatedSeries<S>> {
    if !g.coeff(0).is_zero() {
        return Err(Error::Domain(
            "series composition requires the inner series to vanish at 0".into(),
        ));
    }
    let n = f.order().min(g.order());
    let mut out = vec![S::zero(); n + 1];
    out[0] = f.coeff(f.order().min(n));
    // Horner in g, truncating every product at order n.
    let top = f.order().min(n);
    for k in (0..top).rev() {
        out = mul_trunc(&out, &g.coeffs, n);
        out[0] = out[0].clone() + f.coeff(k);
    }
    Ok(TruncatedSeries { coeffs: out })
}

/// Compositional inverse of `s` at the same order.
///
/// Requires `c0 = 0` and `c1 != 0`; coefficients are produced by triangular
/// matching: the order-`n` coefficient of `s(revert)(t) - t` is linear in the
/// unknown `c_n` with slope `s.c1`.
pub fn series_revert<S: Scalar>(s: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    if !s.coeff(0).is_zero() {
        return Err(Error::Domain(
            "series reversion requires a zero constant term".into(),
        ));
    }
    if s.order() < 1 || s.coeff(1).is_zero() {
        return Err(Error::SingularReversion);
    }
    Ok(TruncatedSeries {
        coeffs: revert_raw(&s.coeffs, s.order()),
    })
}

/// Reversion of raw coefficients `g[0..]` (with `g[0]=0`, `g[1]!=0`) to order `n`.
fn revert_raw<S: Scalar>(g: &[S], n: usize) -> Vec<S> {
    let mut c = vec![S::zero(); n + 1];
    if n >= 1 {
        c[1] = S::one() / g[1].clone();
    }
    for m in 2..=n {
        // Accumulate [t^m] of sum_{k>=2} g_k sigma_<m(t)^k by incremental powers.
        let mut acc = S::zero();
        let mut powk = vec![S::zero(); m + 1];
        powk[0] = S::one();
        let kmax = (g.len() - 1).min(m);
        for (k, gk) in g.iter().enumerate().take(kmax + 1).skip(1) {
            powk = mul_trunc(&powk, &c, m);
            if k >= 2 && !gk.is_zero() {
                acc = acc + gk.clone() * powk[m].clone();
            }
        }
        c[m] = -(acc / g[1].clone());
    }
    c
}

/// Taylor coefficients `g_0..g_order` of the coupling function `G(s)` about
/// `s = 0`, with the pole terms expanded geometrically.
///
/// Closed form: `g1 = (tau^2-1)/3`, `g2 = 2 cosh(H)/3`, `g3 = -1 - tau^2/9`,
/// and for `k >= 4`: `k cosh(H)/3` at even `k`, `-k/3` at odd `k`.
pub fn g_taylor<S: Scalar>(tau: &S, cosh_h: &S, order: usize) -> TruncatedSeries<S> {
    let three = S::from_i64(3);
    let nine = S::from_i64(9);
    let tau_sq = tau.clone() * tau.clone();
    let mut g = vec![S::zero(); order + 1];
    for (k, gk) in g.iter_mut().enumerate().skip(1) {
        let kf = S::from_i64(k as i64);
        *gk = if k % 2 == 1 {
            -(kf / three.clone())
        } else {
            kf * cosh_h.clone() / three.clone()
        };
    }
    if order >= 1 {
        g[1] = g[1].clone() + tau_sq.clone() / three;
    }
    if order >= 3 {
        g[3] = g[3].clone() - tau_sq / nine;
    }
    TruncatedSeries { coeffs: g }
}

/// Genus-zero free-energy expansion `F(t) = sum_V F_V t^V` together with the
/// sigma reversion coefficients it is built from.
pub struct FreeEnergySeries<S: Scalar> {
    /// `f[V]` is the coefficient of `t^V`; `f[0]` is zero by construction.
    pub f: Vec<S>,
    /// Reversion coefficients `c_V` of `sigma(t)`, indices `0..=order+2`.
    pub sigma: Vec<S>,
    /// Residual of the exact constant cancellation `3/4 - P_1 + Q_2/2`;
    /// vanishes identically in exact arithmetic.
    pub constant_residual: S,
}

/// Computes `F_1..F_order` from the closed-form `G`-coefficients by series
/// reversion:
///
/// `F(t) = (1/2) ln(sigma(t)/(c1 t)) + 3/4 - P(sigma(t))/t + Q(sigma(t))/(2 t^2)`
///
/// with `P(s) = sum_k g_k s^k / k` and `Q(s) = sum_m (G^2)_m s^m / m`, where
/// the constant parts cancel exactly and every remaining term is polynomial in
/// the reversion coefficients.
pub fn free_energy_series<S: Scalar>(
    tau: &S,
    cosh_h: &S,
    order: usize,
) -> Result<FreeEnergySeries<S>> {
    let nn = order + 1;
    let g = g_taylor(tau, cosh_h, nn + 2);
    if g.coeff(1).is_zero() {
        return Err(Error::SingularReversion);
    }
    let c = revert_raw(&g.coeffs, nn + 1);

    // h[j] = c_{j+1}/c_1 so that sigma/(c1 t) = 1 + h_1 t + ...; its formal
    // logarithm L carries the (1/2) ln(...) contribution.
    let c1 = c[1].clone();
    let h: Vec<S> = (0..nn).map(|j| c[j + 1].clone() / c1.clone()).collect();
    let hinv = recip_trunc(&h, nn - 1)?;
    let hp: Vec<S> = (0..nn - 1)
        .map(|j| S::from_i64((j + 1) as i64) * h[j + 1].clone())
        .collect();
    let dlog = if nn >= 2 {
        mul_trunc(&hp, &hinv, nn - 2)
    } else {
        Vec::new()
    };
    let mut logh = vec![S::zero(); nn];
    for (m, item) in logh.iter_mut().enumerate().take(nn).skip(1) {
        *item = dlog[m - 1].clone() / S::from_i64(m as i64);
    }

    // P(sigma(t)) truncated at t^{nn+1}: incremental powers of sigma.
    let sig = &c;
    let mut powk = vec![S::zero(); nn + 2];
    powk[0] = S::one();
    let mut p_of_s = vec![S::zero(); nn + 2];
    let m_top = g.order();
    for k in 1..=m_top {
        powk = mul_trunc(&powk, sig, nn + 1);
        let gk = g.coeff(k);
        if !gk.is_zero() {
            let w = gk / S::from_i64(k as i64);
            for i in 0..=nn + 1 {
                p_of_s[i] = p_of_s[i].clone() + w.clone() * powk[i].clone();
            }
        }
    }

    // Q(sigma(t)) truncated at t^{nn+2}, with Q built on (G^2)_m.
    let g2 = mul_trunc(&g.coeffs, &g.coeffs, nn + 3);
    let mut cur = mul_trunc(sig, sig, nn + 2); // sigma^2
    let mut q_of_s = vec![S::zero(); nn + 3];
    for (m, g2m) in g2.iter().enumerate().take(nn + 3).skip(2) {
        if !g2m.is_zero() {
            let w = g2m.clone() / S::from_i64(m as i64);
            for i in 0..=nn + 2 {
                q_of_s[i] = q_of_s[i].clone() + w.clone() * cur[i].clone();
            }
        }
        cur = mul_trunc(&cur, sig, nn + 2);
    }

    let half = S::one() / S::from_i64(2);
    let mut f = vec![S::zero(); order + 1];
    for (v, item) in f.iter_mut().enumerate().take(order + 1).skip(1) {
        *item = logh[v].clone() * half.clone() - p_of_s[v + 1].clone()
            + q_of_s[v + 2].clone() * half.clone();
    }
    let three_quarters = S::from_i64(3) / S::from_i64(4);
    let constant_residual = three_quarters - p_of_s[1].clone() + q_of_s[2].clone() * half;

    Ok(FreeEnergySeries {
        f,
        sigma: c,
        constant_residual,
    })
}

/// Both routes to the scaled coefficients `sigma_V = V [t^V] sigma(t)`:
/// reversion of `t = G(sigma)` and Lagrange extraction `[s^{V-1}] (s/G(s))^V`.
///
/// Returns `(reversion_route, lagrange_route)`, each indexed by `V` with the
/// `V = 0` slot zero.
pub fn sigma_coeffs_dual<S: Scalar>(
    tau: &S,
    cosh_h: &S,
    order: usize,
) -> Result<(Vec<S>, Vec<S>)> {
    let g = g_taylor(tau, cosh_h, order + 1);
    if g.coeff(1).is_zero() {
        return Err(Error::SingularReversion);
    }
    let c = revert_raw(&g.coeffs, order);
    let mut by_reversion = vec![S::zero(); order + 1];
    for (v, item) in by_reversion.iter_mut().enumerate().skip(1) {
        *item = S::from_i64(v as i64) * c[v].clone();
    }

    // phi = s/G(s) = 1/(g1 + g2 s + ...); sigma_V = [s^{V-1}] phi^V.
    let n = if order >= 1 { order - 1 } else { 0 };
    let g_over_s: Vec<S> = (1..g.coeffs.len()).map(|k| g.coeff(k)).collect();
    let phi = recip_trunc(&g_over_s, n)?;
    let mut by_lagrange = vec![S::zero(); order + 1];
    let mut cur = phi.clone();
    for (v, item) in by_lagrange.iter_mut().enumerate().take(order + 1).skip(1) {
        *item = cur[v - 1].clone();
        if v < order {
            cur = mul_trunc(&cur, &phi, n);
        }
    }
    Ok((by_reversion, by_lagrange))
}

/// Scalar-precision selector for coefficient extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// Native `f64`; reliable to roughly order 30.
    Float64,
    /// Double-double arithmetic for deep extraction.
    Extended,
}

/// Scaled sigma coefficients `sigma_V = V [t^V] sigma(t)` for `V = 1..order`,
/// cross-validated between the reversion and Lagrange routes.
///
/// # Arguments
/// * `tau`, `h` - model couplings, `0 < tau < 1`.
/// * `order` - highest coefficient index `V`.
/// * `precision` - scalar mode; extraction that loses the 1e-9 inter-route
///   agreement fails with `PrecisionLoss` rather than returning bad values.
pub fn lagrange_sigma_coeffs(
    tau: f64,
    h: f64,
    order: usize,
    precision: Precision,
) -> Result<Vec<f64>> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!(
            "lagrange_sigma_coeffs requires 0 < tau < 1, got {tau}"
        )));
    }
    let (rev, lag): (Vec<f64>, Vec<f64>) = match precision {
        Precision::Float64 => {
            let (a, b) = sigma_coeffs_dual(&tau, &h.cosh(), order)?;
            (a, b)
        }
        Precision::Extended => {
            let tau_dd = Dd::from_f64(tau);
            let ch = Dd::from_f64(h.cosh());
            let (a, b) = sigma_coeffs_dual(&tau_dd, &ch, order)?;
            (
                a.iter().map(|x| x.to_f64()).collect(),
                b.iter().map(|x| x.to_f64()).collect(),
            )
        }
    };
    for v in 1..=order {
        let scale = rev[v].abs().max(lag[v].abs()).max(f64::MIN_POSITIVE);
        let rel = (rev[v] - lag[v]).abs() / scale;
        if rel > 1e-9 {
            return Err(Error::PrecisionLoss { order: v, rel });
        }
    }
    Ok(rev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn revert_linear_and_catalan() {
        // revert(c t) = t/c.
        let s = TruncatedSeries::new(vec![0.0, 2.5, 0.0, 0.0]);
        let r = series_revert(&s).unwrap();
        assert_eq!(r.coeffs, vec![0.0, 0.4, 0.0, 0.0]);
        // revert(t + t^2) has signed Catalan coefficients.
        let s = TruncatedSeries::new(vec![0.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        let r = series_revert(&s).unwrap();
        let catalan = [0.0, 1.0, -1.0, 2.0, -5.0, 14.0];
        for (k, c) in catalan.iter().enumerate() {
            assert!((r.coeff(k) - c).abs() < 1e-12, "k={k}: {}", r.coeff(k));
        }
    }

    #[test]
    fn log_of_one_plus_t() {
        let mut coeffs = vec![0.0; 9];
        coeffs[0] = 1.0;
        coeffs[1] = 1.0;
        let l = series_log(&TruncatedSeries::new(coeffs)).unwrap();
        for k in 1..=8 {
            let expect = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            assert!((l.coeff(k) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        let u = TruncatedSeries::new(vec![0.0, 0.3, -0.2, 0.11, 0.07, -0.05]);
        let e = series_exp(&u).unwrap();
        let back = series_log(&e).unwrap();
        for k in 0..=5 {
            assert!((back.coeff(k) - u.coeff(k)).abs() < 1e-13);
        }
    }

    #[test]
    fn g_taylor_closed_form_matches_direct_expansion() {
        // Compare against a finite-difference-free direct expansion of the three
        // G(s) pieces using exact geometric series.
        let (tau, ch): (f64, f64) = (0.37, 1.21);
        let n = 12;
        let g = g_taylor(&tau, &ch, n);
        // -(tau^2/9) s (s^2 - 3) = (tau^2/3) s - (tau^2/9) s^3.
        let mut direct = vec![0.0; n + 1];
        direct[1] += tau * tau / 3.0;
        direct[3] -= tau * tau / 9.0;
        // -s/(3 (1+s)^2): 1/(1+s)^2 = sum (-1)^j (j+1) s^j.
        for j in 0..n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            direct[j + 1] += -(sign * (j + 1) as f64) / 3.0;
        }
        // (2/3)(cosh H - 1) s^2 / (1-s^2)^2: 1/(1-x)^2 = sum (k+1) x^k, x=s^2.
        for k in 0..=(n.saturating_sub(2)) / 2 {
            direct[2 + 2 * k] += 2.0 / 3.0 * (ch - 1.0) * (k + 1) as f64;
        }
        for k in 0..=n {
            assert!(
                (g.coeff(k) - direct[k]).abs() < 1e-13,
                "k={k}: {} vs {}",
                g.coeff(k),
                direct[k]
            );
        }
    }

    #[test]
    fn free_energy_series_constant_cancels() {
        let fs = free_energy_series(&0.3, &1.0, 6).unwrap();
        assert!(fs.constant_residual.abs() < 1e-13);
    }

    #[test]
    fn reversion_rejects_bad_input() {
        let s = TruncatedSeries::new(vec![1.0, 1.0]);
        assert!(matches!(series_revert(&s), Err(Error::Domain(_))));
        let s = TruncatedSeries::new(vec![0.0, 0.0, 1.0]);
        assert!(matches!(
            series_revert(&s),
            Err(Error::SingularReversion)
        ));
    }
}
