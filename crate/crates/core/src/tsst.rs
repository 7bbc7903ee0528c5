//! The integrals
//!
//! ```text
//! T(v,w)  = ∫₀¹ atan(vx) atan(wx) / x dx
//! S(v,w)  = ∫₀¹ asin(vx) asin(wx) / x dx
//! TS(v,w) = ∫₀¹ atan(vx) asin(wx) / x dx
//! ```
//!
//! Each has a reference quadrature (`*_quad`) and one or more polylogarithmic
//! closed forms. The closed forms are implemented only on the domain where
//! they were derived; `t_value`, `s_value` and `ts_value` do the symmetry
//! bookkeeping.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipolylog::f_jk;
use crate::polylog::{f_odd_raw, li2_raw, li3_raw, ZETA3};
use crate::quadrature::{integrate_1d, integrate_1d_with_offsets, QuadResult, Tolerance};
use crate::trig_integrals::{asin_int_raw, ti_raw};

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// A point `(v, w)` with the auxiliary quantities of the TS reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TsstPoint {
    pub v: f64,
    pub w: f64,
}

impl TsstPoint {
    pub fn new(v: f64, w: f64) -> Self {
        TsstPoint { v, w }
    }

    /// `R = t/(1+√(1+t²))` with `t = v/w`.
    pub fn r(&self) -> f64 {
        r_of(self.v / self.w)
    }

    /// `S = iw + √(1-w²)`, on the unit circle for `|w| <= 1`.
    pub fn s(&self) -> C {
        C::new((1.0 - self.w * self.w).max(0.0).sqrt(), self.w)
    }

    /// `θ = asin(w) - asin(v)`.
    pub fn theta(&self) -> f64 {
        self.w.asin() - self.v.asin()
    }
}

/// `t/(1+√(1+t²))`, written to stay accurate for large `|t|`.
pub(crate) fn r_of(t: f64) -> f64 {
    if t.abs() <= 1.0 {
        t / (1.0 + (1.0 + t * t).sqrt())
    } else {
        let u = 1.0 / t.abs();
        t.signum() / (u + (u * u + 1.0).sqrt())
    }
}

fn finite2(v: f64, w: f64, func: &'static str) -> Result<()> {
    if v.is_finite() && w.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(func))
    }
}

/// Drop the imaginary part of a closed form after checking it is noise.
fn real_part(z: C, func: &'static str) -> Result<f64> {
    if z.im.abs() > 1e-10 * (1.0 + z.re.abs()) {
        return Err(Error::domain(func, format!("imaginary residue {:e} in a real closed form", z.im)));
    }
    Ok(z.re)
}

/// `asin(w x)` given `1 - x` exactly; near `w x = ±1` it goes through
/// `acos(1-d) = 2 asin(√(d/2))`.
fn asin_scaled(w: f64, x: f64, one_minus_x: f64) -> f64 {
    if w.abs() == 1.0 && one_minus_x < 0.5 {
        w * (FRAC_PI_2 - 2.0 * (0.5 * one_minus_x).sqrt().asin())
    } else {
        (w * x).asin()
    }
}

fn quad_tol() -> Tolerance {
    Tolerance::new(1e-14, 1e-14, 400_000).expect("valid tolerance")
}

pub fn ts_quad(v: f64, w: f64) -> Result<QuadResult> {
    finite2(v, w, "ts_quad")?;
    if w.abs() > 1.0 {
        return Err(Error::domain("ts_quad", format!("asin(wx) needs |w| <= 1, got {w}")));
    }
    integrate_1d_with_offsets(
        |x, _, omx| if x == 0.0 { 0.0 } else { (v * x).atan() * asin_scaled(w, x, omx) / x },
        0.0,
        1.0,
        quad_tol(),
    )
}

pub fn s_quad(v: f64, w: f64) -> Result<QuadResult> {
    finite2(v, w, "s_quad")?;
    if v.abs() > 1.0 || w.abs() > 1.0 {
        return Err(Error::domain("s_quad", "need |v|, |w| <= 1"));
    }
    integrate_1d_with_offsets(
        |x, _, omx| if x == 0.0 { 0.0 } else { asin_scaled(v, x, omx) * asin_scaled(w, x, omx) / x },
        0.0,
        1.0,
        quad_tol(),
    )
}

pub fn t_quad(v: f64, w: f64) -> Result<QuadResult> {
    finite2(v, w, "t_quad")?;
    integrate_1d(|x| (v * x).atan() * (w * x).atan() / x, 0.0, 1.0, quad_tol())
}

/// `TS(v,1)` for real `v`. Odd in `v`.
pub fn ts_v1_closed(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite("ts_v1_closed"));
    }
    if v < 0.0 {
        return Ok(-ts_v1_closed(-v)?);
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let r = r_of(v);
    let lp = (1.0 + r).ln();
    let lm = (1.0 - r).ln();
    let val = FRAC_PI_2 * ti_raw(v) - li3_raw(c(r * r)).re / 4.0 - 2.0 * li3_raw(c(1.0 - r)).re
        - 2.0 * li3_raw(c(r / (1.0 + r))).re
        + 2.0 * ZETA3
        + 0.5 * (lp - lm) * li2_raw(c(r * r)).re
        + PI * PI / 3.0 * lm
        + lp * lp * lp / 3.0
        - r.ln() * lm * lm;
    Ok(val)
}

/// `TS(v,w)` for `w ∈ [-1, 1]` through odd multiple polylogarithms of
/// `R` and the unimodular `S`.
pub fn ts_closed(v: f64, w: f64) -> Result<f64> {
    const F: &str = "ts_closed";
    finite2(v, w, F)?;
    if w.abs() > 1.0 {
        return Err(Error::domain(F, format!("need w in [-1, 1], got {w}")));
    }
    if v == 0.0 || w == 0.0 {
        return Ok(0.0);
    }
    let p = TsstPoint::new(v, w);
    let r = p.r();
    if r.abs() >= 1.0 - 1e-12 {
        return Err(Error::domain(F, "|R| = 1, the reduction does not apply"));
    }
    let s = p.s();
    let rc = c(r);
    let (rs, ros) = (rc * s, rc / s);
    let one = c(1.0);
    let val = 2.0 * f_odd_raw(3, rc) - f_odd_raw(3, rs) - f_odd_raw(3, ros)
        - 4.0 * f_jk(1, 2, rc, one)?
        + 2.0 * f_jk(1, 2, rc, s)?
        + 2.0 * f_jk(1, 2, rc, one / s)?
        + C::new(0.0, w.asin())
            * (f_odd_raw(2, rs) - f_odd_raw(2, ros) - 2.0 * f_jk(1, 1, rc, s)? + 2.0 * f_jk(1, 1, rc, one / s)?);
    real_part(val, F)
}

/// `TS(v,w)` for `|w| <= 1`, via `ts_v1_closed` at `w = ±1` and the
/// multiple-polylog reduction otherwise.
pub fn ts_value(v: f64, w: f64) -> Result<f64> {
    if w.abs() == 1.0 {
        return Ok(w * ts_v1_closed(v)?);
    }
    ts_closed(v, w)
}

/// `S(v,1)` for `0 <= v <= 1`.
pub fn s_v1_closed(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite("s_v1_closed"));
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::domain("s_v1_closed", format!("need 0 <= v <= 1, got {v}")));
    }
    Ok(FRAC_PI_2 * asin_int_raw(v) - f_odd_raw(3, c(v)).re)
}

/// `S(v,v)` for `0 <= v <= 1`.
pub fn s_vv_closed(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite("s_vv_closed"));
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::domain("s_vv_closed", format!("need 0 <= v <= 1, got {v}")));
    }
    Ok(s_vv_raw(v))
}

fn s_vv_raw(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let a = v.asin();
    let e = C::from_polar(1.0, 2.0 * a);
    0.5 * li3_raw(e).re - 0.5 * ZETA3 + a * li2_raw(e).im + a * a * (2.0 * v).ln()
}

/// `S(v,w)` for `0 <= v < w <= 1`.
pub fn s_closed(v: f64, w: f64) -> Result<f64> {
    const F: &str = "s_closed";
    finite2(v, w, F)?;
    if !(0.0 <= v && v < w && w <= 1.0) {
        return Err(Error::domain(F, format!("need 0 <= v < w <= 1, got ({v}, {w})")));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let th = TsstPoint::new(v, w).theta();
    let q = v / w;
    let e = C::from_polar(1.0, th);
    let qe = q * e;
    let qc = q * e.conj();
    let ith = C::new(0.0, th);
    let val = s_vv_raw(v) + s_vv_raw(w) - s_vv_raw(th.sin()) - 2.0 * li3_raw(c(q)) + li3_raw(qe) + li3_raw(qc)
        - ith * li2_raw(qe)
        + ith * li2_raw(qc)
        + th * th / 2.0 * (1.0 + q * q - 2.0 * q * th.cos()).ln();
    real_part(0.5 * val, F)
}

/// `S(v,w)` for `|v|, |w| <= 1`, odd in each argument and symmetric.
pub fn s_value(v: f64, w: f64) -> Result<f64> {
    finite2(v, w, "s_value")?;
    if v.abs() > 1.0 || w.abs() > 1.0 {
        return Err(Error::domain("s_value", "need |v|, |w| <= 1"));
    }
    let sign = v.signum() * w.signum();
    let (a, b) = (v.abs().min(w.abs()), v.abs().max(w.abs()));
    if a == 0.0 {
        return Ok(0.0);
    }
    let val = if a == b {
        s_vv_raw(a)
    } else if b == 1.0 {
        s_v1_closed(a)?
    } else {
        s_closed(a, b)?
    };
    Ok(sign * val)
}

/// `T(v,w)` for real `v, w > 0` with `w/v <= 1`.
pub fn t_closed(v: f64, w: f64) -> Result<f64> {
    const F: &str = "t_closed";
    finite2(v, w, F)?;
    if !(v > 0.0 && w > 0.0) {
        return Err(Error::domain(F, format!("need v, w > 0, got ({v}, {w})")));
    }
    if w > v {
        return Err(Error::domain(F, "need w/v <= 1; swap the arguments"));
    }
    let q = w / v;
    let vi = C::new(0.0, v);
    let wi = C::new(0.0, w);
    let one = c(1.0);
    let (a1, a2) = ((one - vi) / (one - wi), (one + vi) / (one + wi));
    let (b1, b2) = ((one + vi) / (one - wi), (one - vi) / (one + wi));
    let lrat = ((1.0 + v * v) / (1.0 + w * w)).ln();
    let (atv, atw) = (v.atan(), w.atan());
    let tot = 2.0 * li3_raw(c(q)) - 2.0 * li3_raw(c(-q)) + li3_raw(a1) + li3_raw(a2) - li3_raw(b1) - li3_raw(b2)
        - li3_raw(q * a1)
        - li3_raw(q * a2)
        + li3_raw(-q * b1)
        + li3_raw(-q * b2)
        + lrat * (li2_raw(c(q)) - li2_raw(c(-q)))
        - 4.0 * atv * li2_raw(wi).im
        - 4.0 * atw * li2_raw(vi).im
        - PI * lrat * atw
        + 4.0 * v.ln() * atv * atw;
    real_part(-0.25 * tot, F)
}

/// `T(v,w)` for any real arguments; odd in each and symmetric.
pub fn t_value(v: f64, w: f64) -> Result<f64> {
    finite2(v, w, "t_value")?;
    let sign = v.signum() * w.signum();
    let (a, b) = (v.abs().max(w.abs()), v.abs().min(w.abs()));
    if b == 0.0 {
        return Ok(0.0);
    }
    Ok(sign * t_closed(a, b)?)
}

/// `T(v,1/v)`, for `v > 0`. Above 1 this uses `T(v,1/v) = T(1/v,v)`.
pub fn t_v_invv_closed(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite("t_v_invv_closed"));
    }
    if v <= 0.0 {
        return Err(Error::domain("t_v_invv_closed", format!("need v > 0, got {v}")));
    }
    let v = if v > 1.0 { 1.0 / v } else { v };
    let v2 = v * v;
    Ok(FRAC_PI_2 * li2_raw(C::new(0.0, v)).im - 0.5 * (li3_raw(c(v2)).re - li3_raw(c(-v2)).re)
        + 0.5 * v.ln() * (li2_raw(c(v2)).re - li2_raw(c(-v2)).re))
}

/// `T(v,v)` for `v > 0`.
pub fn t_vv_closed(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite("t_vv_closed"));
    }
    if v <= 0.0 {
        return Err(Error::domain("t_vv_closed", format!("need v > 0, got {v}")));
    }
    let z = C::new(1.0, v) / C::new(1.0, -v);
    let at = v.atan();
    Ok(0.5 * (li3_raw(z) - li3_raw(-z)).re - 7.0 / 8.0 * ZETA3 + 2.0 * at * li2_raw(C::new(0.0, v)).im
        - v.ln() * at * at)
}

/// Left minus right side of the eight-term functional equation for `T`,
/// every term by quadrature.
pub fn t_functional_residual(v: f64, w: f64) -> Result<f64> {
    finite2(v, w, "t_functional_residual")?;
    if !(v > 0.0 && w > 0.0) {
        return Err(Error::domain("t_functional_residual", "need v, w > 0"));
    }
    let t = |a: f64, b: f64| t_quad(a, b).map(|q| q.value);
    let ti = |x: f64| integrate_1d(|u| u.atan() / u, 0.0, x, quad_tol()).map(|q| q.value);
    let lhs = t(v, w)? + t(1.0 / v, 1.0 / w)? - t(w / v, 1.0)? - t(v / w, 1.0)?;
    let rhs = FRAC_PI_2 * (ti(v)? + ti(1.0 / w)? - ti(v / w)? - ti(1.0)?);
    Ok(lhs - rhs)
}

fn open_disk(func: &'static str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(func));
    }
    if xs.iter().any(|x| x.abs() >= 1.0) {
        return Err(Error::domain(func, "arguments must lie in (-1, 1)"));
    }
    Ok(())
}

/// Double series for `T(v,w)`, `|v|, |w| < 1`, first `terms` terms.
///
/// Uses `B_n = w^{2n+2} Σ_{m≤n} (v/w)^{2m+1}/(2m+1)`, which satisfies
/// `B_n = w² B_{n-1} + w v^{2n+1}/(2n+1)` and needs no division by `w`.
pub fn t_series(v: f64, w: f64, terms: usize) -> Result<f64> {
    open_disk("t_series", &[v, w])?;
    let (v2, w2) = (v * v, w * w);
    let (mut b, mut d) = (0.0, 0.0);
    let (mut vp, mut wp) = (v, w);
    let mut s = 0.0;
    for n in 0..terms {
        let o = (2 * n + 1) as f64;
        b = w2 * b + w * vp / o;
        d = v2 * d + v * wp / o;
        let e = (2 * n + 2) as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * (b + d) / (e * e);
        vp *= v2;
        wp *= w2;
    }
    Ok(s)
}

/// Taylor series of `TS(v,1)`, `|v| < 1`.
pub fn ts_taylor(v: f64, terms: usize) -> Result<f64> {
    open_disk("ts_taylor", &[v])?;
    let v2 = v * v;
    let mut vp = v;
    // (2v)^{2k+1} / C(2k,k)
    let mut cb = 2.0 * v;
    let mut s = 0.0;
    for k in 0..terms {
        let o = (2 * k + 1) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * (FRAC_PI_2 * vp / (o * o) - 0.5 * cb / (o * o * o));
        vp *= v2;
        cb *= 2.0 * v2 * (k + 1) as f64 / o;
    }
    Ok(s)
}

/// Series for `T(v,1)`, `|v| < 1`, built on alternating harmonic numbers.
pub fn t_v1_series(v: f64, terms: usize) -> Result<f64> {
    open_disk("t_v1_series", &[v])?;
    let v2 = v * v;
    let mut vp = v;
    let mut h = 0.0;
    let mut s = 0.0;
    for n in 0..terms {
        if n >= 1 {
            h += if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
        }
        let o = (2 * n + 1) as f64;
        s += vp / (o * o) * h;
        vp *= v2;
    }
    Ok(0.5 * s + FRAC_PI_4 * ti_raw(v) - LN_2 / 4.0 * (li2_raw(c(v)).re - li2_raw(c(-v)).re))
}

/// `∫₀¹ atan(vx) atan(wx) / √(1-x²) dx = π F₂(ab)` with
/// `a = v/(1+√(1+v²))`, `b` likewise.
pub fn weighted_arctan_integral(v: f64, w: f64) -> Result<f64> {
    finite2(v, w, "weighted_arctan_integral")?;
    Ok(PI * f_odd_raw(2, c(r_of(v) * r_of(w))).re)
}

/// Left minus right side of the central-binomial identity for `TS(1,w)`.
/// The left side is summed directly; the right side is all quadrature.
pub fn ts_binomial_residual(w: f64) -> Result<f64> {
    const F: &str = "ts_binomial_residual";
    if !w.is_finite() {
        return Err(Error::NonFinite(F));
    }
    if !(w > 0.0 && w <= 1.0) {
        return Err(Error::domain(F, format!("need 0 < w <= 1, got {w}")));
    }
    Ok(binomial_lhs(w) - binomial_rhs(w)?)
}

/// `Σ_{n≥1} (-1)^n/(2n+1)² C(2n,n) (w/2)^{2n+1} Σ_{k≤n} (-1)^{k+1}/k`.
///
/// Alternating; the last two partial sums are averaged.
fn binomial_lhs(w: f64) -> f64 {
    const MAX_N: usize = 400_000;
    let w2 = w * w;
    let mut b = w / 2.0;
    let mut h = 0.0;
    let (mut s, mut prev) = (0.0, 0.0);
    for n in 1..=MAX_N {
        let nf = n as f64;
        b *= (2.0 * nf - 1.0) / (2.0 * nf) * w2;
        h += if n % 2 == 1 { 1.0 } else { -1.0 } / nf;
        let o = 2.0 * nf + 1.0;
        let term = if n % 2 == 0 { 1.0 } else { -1.0 } * b * h / (o * o);
        prev = s;
        s += term;
        if term.abs() < 1e-18 {
            return s;
        }
    }
    0.5 * (s + prev)
}

fn binomial_rhs(w: f64) -> Result<f64> {
    let tol = quad_tol();
    let ts = ts_quad(1.0, w)?.value;
    let asin_i = integrate_1d_with_offsets(
        |t, _, wmt| {
            let omt = if w == 1.0 { wmt } else { 1.0 - t };
            if t == 0.0 {
                1.0
            } else {
                asin_scaled(1.0, t, omt) / t
            }
        },
        0.0,
        w,
        tol,
    )?
    .value;
    let asinh_i = integrate_1d(|t| t.asinh() / t, 0.0, w, tol)?.value;
    Ok(ts - FRAC_PI_4 * asin_i + LN_2 / 2.0 * asinh_i)
}
