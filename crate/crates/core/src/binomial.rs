//! Central binomial sums
//!
//! `h_n(v) = Σ_{k≥0} (-1)^k/(2k+1)^n · (2v)^{2k+1}/C(2k,k)`
//!
//! converges for `|v| < 1`. The closed forms for `n <= 3` (and the
//! multiple-polylog form for `n = 4`) are written in `r = v/(1+√(1+v²))`,
//! which stays inside `(-1, 1)` for every real `v`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multipolylog::{f21_closed, f_211, f_jk};
use crate::polylog::{atanh_raw, f_odd_raw, f_odd_series_real, li2_raw, li3_raw, ZETA3};
use crate::tsst::r_of;

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// A truncated `h_n` sum with a bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HnPartial {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `n` together with `v` and `r(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HnArg {
    pub n: u32,
    pub v: f64,
    pub r: f64,
}

impl HnArg {
    pub fn new(n: u32, v: f64) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::domain("HnArg", format!("n = {n} not in 1..4")));
        }
        if !v.is_finite() {
            return Err(Error::NonFinite("HnArg"));
        }
        Ok(HnArg { n, v, r: r_of(v) })
    }

    /// Closed form for `n <= 3`, multiple polylogarithms for `n = 4`.
    pub fn closed(&self) -> Result<f64> {
        match self.n {
            1 => h1_closed(self.v),
            2 => h2_closed(self.v),
            3 => h3_closed(self.v),
            _ => h4_multipolylog(self.v),
        }
    }
}

const H_TAIL_TARGET: f64 = 1e-13;

/// First `terms` terms of `h_n(v)`; the tail bound comes from the term
/// ratio, which decreases monotonically in `k`.
pub fn h_partial_sum(n: u32, v: f64, terms: usize) -> Result<HnPartial> {
    if !(1..=4).contains(&n) {
        return Err(Error::domain("h_series", format!("n = {n} not in 1..4")));
    }
    if !v.is_finite() {
        return Err(Error::NonFinite("h_series"));
    }
    if v.abs() >= 1.0 {
        return Err(Error::domain("h_series", format!("series needs |v| < 1, got {v}")));
    }
    let v2 = v * v;
    // (2v)^{2k+1}/C(2k,k), updated by its ratio.
    let mut b = 2.0 * v;
    let mut s = 0.0;
    for k in 0..terms {
        let o = (2 * k + 1) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * b / o.powi(n as i32);
        b *= 2.0 * v2 * (k + 1) as f64 / o;
    }
    // b now holds the factor of term `terms`.
    let o = (2 * terms + 1) as f64;
    let next = b.abs() / o.powi(n as i32);
    let ratio = 2.0 * v2 * (terms + 1) as f64 / o;
    let tail_bound = if ratio < 1.0 { next / (1.0 - ratio) } else { f64::INFINITY };
    Ok(HnPartial { value: s, tail_bound, terms })
}

/// `h_n(v)` by its series; fails unless the tail bound is below `1e-13`.
pub fn h_series(n: u32, v: f64, terms: usize) -> Result<f64> {
    let p = h_partial_sum(n, v, terms)?;
    if p.tail_bound > H_TAIL_TARGET {
        return Err(Error::SeriesDivergence { func: "h_series", terms });
    }
    Ok(p.value)
}

fn finite(v: f64, func: &'static str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(func))
    }
}

pub fn h1_closed(v: f64) -> Result<f64> {
    finite(v, "h1_closed")?;
    Ok(2.0 / (1.0 + v * v).sqrt() * v.asinh())
}

pub fn h2_closed(v: f64) -> Result<f64> {
    finite(v, "h2_closed")?;
    let r = r_of(v);
    Ok(2.0 * (li2_raw(c(r)).re - li2_raw(c(-r)).re))
}

/// `h_3(v)` in trilogarithms. Odd; the `log r` term is only ever
/// evaluated at `r > 0`.
pub fn h3_closed(v: f64) -> Result<f64> {
    finite(v, "h3_closed")?;
    if v == 0.0 {
        return Ok(0.0);
    }
    if v < 0.0 {
        return Ok(-h3_closed(-v)?);
    }
    let r = r_of(v);
    let lp = (1.0 + r).ln();
    let lm = (1.0 - r).ln();
    let r2 = c(r * r);
    Ok(0.5 * li3_raw(r2).re + 4.0 * li3_raw(c(1.0 - r)).re + 4.0 * li3_raw(c(r / (1.0 + r))).re - 4.0 * ZETA3
        - (lp - lm) * li2_raw(r2).re
        - 2.0 * PI * PI / 3.0 * lm
        - 2.0 / 3.0 * lp * lp * lp
        + 2.0 * r.ln() * lm * lm)
}

/// `h_3(v)` through `F_{2,1}(1,r)`.
pub fn h3_batir(v: f64) -> Result<f64> {
    finite(v, "h3_batir")?;
    if v == 0.0 {
        return Ok(0.0);
    }
    let r = r_of(v);
    let rc = c(r);
    let val = PI * PI / 2.0 * ((1.0 + r) / (1.0 - r)).ln() + 4.0 * li3_raw(rc).re - 0.5 * li3_raw(rc * rc).re
        - 8.0 * f21_closed(rc)?.re;
    Ok(val)
}

/// `h_4(v)` through odd multiple polylogarithms of `r`:
///
/// ```text
/// h_4 = (π²/4)[log(1-r²) log((1-r)/(1+r)) + 2Li2((1-r)/2) - 2Li2((1+r)/2)]
///       - π² log 2 · F_1(r) + π² F_2(r) + 4 F_4(r)
///       - 8 F_{3,1}(1,r) - 8 F_{2,2}(1,r) + 16 F_{2,1,1}(1,1,r)
/// ```
///
/// This is the result of integrating `h_3(u)/u` term by term. The `F_4`
/// weight and the `F_1` term matter: with `F_3` in place of `F_4` and no
/// `F_1` term the sum is off from the series at every `v != 0`.
pub fn h4_multipolylog(v: f64) -> Result<f64> {
    finite(v, "h4_multipolylog")?;
    if v == 0.0 {
        return Ok(0.0);
    }
    let r = r_of(v);
    let rc = c(r);
    let one = c(1.0);
    let head = PI * PI / 4.0
        * ((1.0 - r * r).ln() * ((1.0 - r) / (1.0 + r)).ln() + 2.0 * li2_raw(c((1.0 - r) / 2.0)).re
            - 2.0 * li2_raw(c((1.0 + r) / 2.0)).re);
    let singles = -PI * PI * LN_2 * atanh_raw(rc).re + PI * PI * f_odd_raw(2, rc).re + 4.0 * f_odd_series_real(4, r);
    let multis = -8.0 * f_jk(3, 1, one, rc)?.re - 8.0 * f_jk(2, 2, one, rc)?.re + 16.0 * f_211(one, one, rc)?.re;
    Ok(head + singles + multis)
}

/// `∫₀^v r(u)^{2j+1} du/u` in closed form.
pub fn root_integral(j: u32, v: f64) -> Result<f64> {
    finite(v, "root_integral")?;
    if v < 0.0 {
        return Err(Error::domain("root_integral", format!("need v >= 0, got {v}")));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let r = r_of(v);
    let r2 = r * r;
    let mut p = r;
    let mut partial = 0.0;
    for k in 0..=j {
        partial += p / (2 * k + 1) as f64;
        if k < j {
            p *= r2;
        }
    }
    Ok(((1.0 + r) / (1.0 - r)).ln() + p / (2 * j + 1) as f64 - 2.0 * partial)
}

/// The hypergeometric value `4F3(1,1,½,½; 3/2,3/2,3/2; -4) = h_3(2)/4`.
/// Its defining series diverges at `-4`, so the left side is the
/// continuation through `h3_closed`.
pub fn hyper_4f3_value() -> f64 {
    h3_closed(2.0).expect("finite argument") / 4.0
}

/// `|4F3(...; -4) - (7/10) ζ(3)|`.
pub fn hyper_4f3_check() -> f64 {
    (hyper_4f3_value() - 0.7 * ZETA3).abs()
}

/// `Σ_{n≥1} 1/(n³ C(2n,n))`.
pub fn central_binom_sum() -> f64 {
    central_binom_partial(60)
}

pub(crate) fn central_binom_partial(terms: usize) -> f64 {
    let mut binom = 1.0;
    let mut s = 0.0;
    for n in 1..=terms {
        let nf = n as f64;
        binom *= 2.0 * (2.0 * nf - 1.0) / nf;
        s += 1.0 / (nf * nf * nf * binom);
    }
    s
}

/// `½ Re Li3(e^{iπ/3}) - ζ(3)/2 + (π/6) Im Li2(e^{iπ/3})`, the Clausen-type
/// form of `S(½,½)`.
pub fn clausen_combination() -> f64 {
    let e = C::from_polar(1.0, PI / 3.0);
    0.5 * li3_raw(e).re - 0.5 * ZETA3 + PI / 6.0 * li2_raw(e).im
}
