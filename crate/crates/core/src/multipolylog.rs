//! Odd multiple polylogarithms
//!
//! `F_{j,k}(x,y) = Σ_{n≥0} x^{2n+1}/(2n+1)^j Σ_{m≤n} y^{2m+1}/(2m+1)^k`
//!
//! and the weight (2,1,1) triple sum at `x1 = x2 = 1`, together with the
//! closed forms that reduce them to `Li2`/`Li3`, and Lewin's formula for
//! `∫₀ˣ log(1-z) log(1-cz) dz/z`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polylog::{atanh_raw, f_odd_raw, li2_raw, li3_raw, log_real, ZETA3};

type C = Complex64;

const SERIES_TOL: f64 = 1e-14;
const MAX_TERMS: usize = 20_000_000;
const UNIT_EPS: f64 = 1e-14;

/// A truncated series value together with a bound on the dropped tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: C,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Arguments of a double or triple odd polylogarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPolyArgs {
    pub j: u32,
    pub k: u32,
    pub l: Option<u32>,
    pub x: C,
    pub y: C,
    pub z: Option<C>,
}

impl MultiPolyArgs {
    pub fn double(j: u32, k: u32, x: C, y: C) -> Self {
        MultiPolyArgs { j, k, l: None, x, y, z: None }
    }

    pub fn validate(&self) -> Result<()> {
        let ws = [Some(self.j), Some(self.k), self.l];
        if ws.iter().flatten().any(|w| !(1..=3).contains(w)) {
            return Err(Error::domain("MultiPolyArgs", "weights must lie in 1..3"));
        }
        if (self.x * self.y).norm() > 1.0 + UNIT_EPS {
            return Err(Error::domain("MultiPolyArgs", "need |x y| <= 1"));
        }
        Ok(())
    }

    /// `F_{j,k}(x,y)`, or `F_{j,k,l}(x,y,z)` when the third slot is filled.
    pub fn evaluate(&self) -> Result<C> {
        self.validate()?;
        match (self.l, self.z) {
            (None, None) => f_jk(self.j, self.k, self.x, self.y),
            (Some(1), Some(z)) if self.j == 2 && self.k == 1 => f_211(self.x, self.y, z),
            _ => Err(Error::domain("MultiPolyArgs", "triple sums take weights (2,1,1)")),
        }
    }
}

fn check_finite(zs: &[C], func: &'static str) -> Result<()> {
    if zs.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(func))
    }
}

pub fn f_jk(j: u32, k: u32, x: C, y: C) -> Result<C> {
    Ok(f_jk_series(j, k, x, y)?.value)
}

/// `F_{j,k}(x,y)` with its tail bound.
///
/// Inside the disk the double sum is summed directly. With `|x| = 1` and
/// `|y| < 1` the order of summation is swapped,
/// `F_{j,k} = F_j(x) F_k(y) - Σ_n x^{2n+1}/(2n+1)^j (F_k(y) - P_n(y))`,
/// which converges geometrically.
pub fn f_jk_series(j: u32, k: u32, x: C, y: C) -> Result<SeriesValue> {
    const F: &str = "f_jk";
    check_finite(&[x, y], F)?;
    if !(1..=3).contains(&j) || !(1..=3).contains(&k) {
        return Err(Error::domain(F, format!("weights ({j},{k}) not in 1..3")));
    }
    let (ax, ay) = (x.norm(), y.norm());
    if ax > 1.0 + UNIT_EPS || ay > 1.0 + UNIT_EPS {
        return Err(Error::domain(F, "need |x| <= 1 and |y| <= 1"));
    }
    let unit_x = ax > 1.0 - UNIT_EPS;
    let unit_y = ay > 1.0 - UNIT_EPS;
    if unit_x && unit_y {
        return Err(Error::domain(F, "x and y both on the unit circle"));
    }
    if unit_x {
        if j < 2 {
            return Err(Error::domain(F, "outer weight 1 diverges at |x| = 1"));
        }
        return Ok(swapped(j, k, x, y));
    }
    direct(j, k, x, y, unit_y)
}

fn powi(d: f64, w: u32) -> f64 {
    d.powi(w as i32)
}

fn direct(j: u32, k: u32, x: C, y: C, unit_y: bool) -> Result<SeriesValue> {
    let ax = x.norm();
    let ay = y.norm();
    if x == C::new(0.0, 0.0) || y == C::new(0.0, 0.0) {
        return Ok(SeriesValue { value: C::new(0.0, 0.0), tail_bound: 0.0, terms: 0 });
    }
    let (x2, y2) = (x * x, y * y);
    let geo = 1.0 / (1.0 - ax * ax);
    // Majorant for |P_m(y)| over the tail.
    let p_bound_fixed = if !unit_y {
        Some(crate::polylog::f_odd_series_real(k as i32, ay))
    } else if k >= 2 {
        Some(if k == 2 { PI * PI / 8.0 } else { 7.0 * ZETA3 / 8.0 })
    } else {
        None
    };
    let (mut xp, mut yp) = (x, y);
    let mut p = C::new(0.0, 0.0);
    let mut s = C::new(0.0, 0.0);
    let mut n = 0usize;
    loop {
        let d = (2 * n + 1) as f64;
        p += yp / powi(d, k);
        let term = xp / powi(d, j) * p;
        s += term;
        let dn = d + 2.0;
        let pb = p_bound_fixed.unwrap_or_else(|| 1.0 + 0.5 * (dn + 2.0 * geo).ln());
        let tail = ax.powf(dn) / powi(dn, j) * pb * geo;
        let scale = SERIES_TOL * (1.0 + s.norm());
        if term.norm() < scale && tail < scale {
            return Ok(SeriesValue { value: s, tail_bound: tail, terms: n + 1 });
        }
        n += 1;
        if n >= MAX_TERMS {
            return Err(Error::SeriesDivergence { func: "f_jk", terms: n });
        }
        xp *= x2;
        yp *= y2;
    }
}

fn swapped(j: u32, k: u32, x: C, y: C) -> SeriesValue {
    let ay = y.norm();
    if y == C::new(0.0, 0.0) {
        return SeriesValue { value: C::new(0.0, 0.0), tail_bound: 0.0, terms: 0 };
    }
    let fk = f_odd_raw(k, y);
    let fj = f_odd_raw(j, x);
    let (x2, y2) = (x * x, y * y);
    let geo = 1.0 / (1.0 - ay * ay);
    let (mut xp, mut yp) = (x, y);
    let mut tau = fk;
    let mut s = C::new(0.0, 0.0);
    let mut n = 0usize;
    loop {
        let d = (2 * n + 1) as f64;
        tau -= yp / powi(d, k);
        s += xp / powi(d, j) * tau;
        let dn = d + 2.0;
        let tail = ay.powf(dn) / powi(dn, k) * geo * geo;
        let value = fj * fk - s;
        if tail < SERIES_TOL * (1.0 + value.norm()) || n + 1 >= MAX_TERMS {
            return SeriesValue { value, tail_bound: tail, terms: n + 1 };
        }
        n += 1;
        xp *= x2;
        yp *= y2;
    }
}

/// `F_{2,1}(1,1) = Σ_n O_n/(2n+1)²` with `O_n` the odd harmonic numbers.
const F21_ONE_ONE: f64 = 7.0 / 16.0 * ZETA3 + PI * PI / 8.0 * LN_2;

pub fn f_211(x1: C, x2: C, y: C) -> Result<C> {
    Ok(f_211_series(x1, x2, y)?.value)
}

/// `F_{2,1,1}(1,1,y)` for `|y| < 1`.
///
/// Writing the innermost partial sum as `F_1(y) - τ_m` splits off
/// `F_1(y) F_{2,1}(1,1)`; the rest is
/// `Σ_n W_n/(2n+1)² = C π²/8 - Σ_n (C - W_n)/(2n+1)²` with
/// `W_n = Σ_{m≤n} τ_m/(2m+1)` and `C = W_∞`. The remainders are accumulated
/// backwards so none of them is formed by cancellation.
pub fn f_211_series(x1: C, x2: C, y: C) -> Result<SeriesValue> {
    const F: &str = "f_211";
    check_finite(&[x1, x2, y], F)?;
    let one = C::new(1.0, 0.0);
    if x1 != one || x2 != one {
        return Err(Error::domain(F, "only x1 = x2 = 1 is supported"));
    }
    let ay = y.norm();
    if ay >= 1.0 - UNIT_EPS {
        return Err(Error::domain(F, "need |y| < 1"));
    }
    if ay == 0.0 {
        return Ok(SeriesValue { value: C::new(0.0, 0.0), tail_bound: 0.0, terms: 0 });
    }
    // Terms y^{2l+1}/(2l+1) until they are far below the target.
    let geo = 1.0 / (1.0 - ay * ay);
    let mut len = 1usize;
    while ay.powf((2 * len + 1) as f64) * geo > 1e-18 {
        len += 1;
        if len >= MAX_TERMS {
            return Err(Error::SeriesDivergence { func: F, terms: len });
        }
    }
    let y2 = y * y;
    let mut a = Vec::with_capacity(len);
    let mut yp = y;
    for l in 0..len {
        a.push(yp / (2 * l + 1) as f64);
        yp *= y2;
    }
    // tau[m] = Σ_{l>m} a[l]
    let mut tau = vec![C::new(0.0, 0.0); len];
    for m in (0..len - 1).rev() {
        tau[m] = tau[m + 1] + a[m + 1];
    }
    // rem[n] = C - W_n = Σ_{m>n} tau[m]/(2m+1)
    let mut rem = vec![C::new(0.0, 0.0); len];
    for n in (0..len - 1).rev() {
        rem[n] = rem[n + 1] + tau[n + 1] / (2 * n + 3) as f64;
    }
    let c_total = rem[0] + tau[0];
    let mut corr = C::new(0.0, 0.0);
    for (n, r) in rem.iter().enumerate() {
        let d = (2 * n + 1) as f64;
        corr += r / (d * d);
    }
    let f1 = atanh_raw(y);
    let value = f1 * F21_ONE_ONE - (c_total * (PI * PI / 8.0) - corr);
    let tail_bound = ay.powf((2 * len + 1) as f64) * geo * geo * (1.0 + f1.norm());
    Ok(SeriesValue { value, tail_bound, terms: len })
}

fn on_li_cut(z: C) -> bool {
    z.re > 1.0 && z.im.abs() <= 1e-15 * z.re
}

fn li2_checked(z: C, func: &'static str) -> Result<C> {
    if on_li_cut(z) {
        return Err(Error::domain(func, format!("Li2 argument {z} lies on the cut [1, inf)")));
    }
    Ok(li2_raw(z))
}

/// `4 F_{1,1}(x,y)` as four dilogarithms.
pub fn f11_closed(x: C, y: C) -> Result<C> {
    const F: &str = "f11_closed";
    check_finite(&[x, y], F)?;
    let one = C::new(1.0, 0.0);
    if x == C::new(0.0, 0.0) {
        return Ok(C::new(0.0, 0.0));
    }
    if (one + x).norm() == 0.0 || (one - x).norm() == 0.0 {
        return Err(Error::domain(F, "x = ±1"));
    }
    let p = x / (one + x);
    let m = -x / (one - x);
    let t1 = li2_checked(p * (one + y), F)?;
    let t2 = li2_checked(p * (one - y), F)?;
    let t3 = li2_checked(m * (one + y), F)?;
    let t4 = li2_checked(m * (one - y), F)?;
    Ok(0.25 * (t1 - t2 - t3 + t4))
}

/// `F_{2,1}(1,x)` through trilogarithms, for `|x| < 1`. The left half
/// plane is handled by oddness in `x`.
pub fn f21_closed(x: C) -> Result<C> {
    const F: &str = "f21_closed";
    check_finite(&[x], F)?;
    if x.norm() >= 1.0 {
        return Err(Error::domain(F, format!("need |x| < 1, got |x| = {}", x.norm())));
    }
    if x == C::new(0.0, 0.0) {
        return Ok(x);
    }
    if x.re < 0.0 {
        return Ok(-f21_right(-x));
    }
    Ok(f21_right(x))
}

fn f21_right(x: C) -> C {
    let one = C::new(1.0, 0.0);
    let pi2 = PI * PI;
    let lp = (one + x).ln();
    let lm = (one - x).ln();
    let x2 = x * x;
    let s = 4.0 * li3_raw(x) - li3_raw(x2) - 4.0 * li3_raw(one - x) - 4.0 * li3_raw(x / (one + x))
        + 4.0 * ZETA3
        + (lp - lm) * li2_raw(x2)
        + pi2 / 2.0 * lp
        + pi2 / 6.0 * lm
        + 2.0 / 3.0 * lp * lp * lp
        - 2.0 * x.ln() * lm * lm;
    s / 8.0
}

/// `F_{1,2}(x,y)` for real `|x| < 1`, `|y| <= 1`, via
/// `F_3(xy) - ½ log(1-x²) F_2(xy) + ¼ ∫₀ˣ log(1-u²) log((1+yu)/(1-yu)) du/u`
/// with the integral split into four Lewin integrals.
pub fn f12_closed(x: f64, y: f64) -> Result<C> {
    const F: &str = "f12_closed";
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite(F));
    }
    if x.abs() >= 1.0 || y.abs() > 1.0 {
        return Err(Error::domain(F, "need |x| < 1 and |y| <= 1"));
    }
    if x == 0.0 || y == 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let xy = C::new(x * y, 0.0);
    let head = f_odd_raw(3, xy) - 0.5 * (1.0 - x * x).ln() * f_odd_raw(2, xy);
    let lew = lewin_integral(x, -y)? - lewin_integral(x, y)? + lewin_integral(-x, y)?
        - lewin_integral(-x, -y)?;
    Ok(head + 0.25 * lew)
}

/// Lewin's closed form for `∫₀ˣ log(1-z) log(1-cz) dz/z`, real arguments.
///
/// The formula itself needs `0 < x < 1` and `cx < 1`. Negative `x` is
/// mapped back: with `c < 0` through `L(x,c) = L(cx, 1/c)`, with `c > 0`
/// through `L(-a,c) = ½L(a²,c²) - L(a,c) - L(ac,-1/c) - L(a,-c)`, which
/// needs `ac < 1`. Polylogarithms landing on `(1, ∞)` are taken from below.
pub fn lewin_integral(x: f64, c: f64) -> Result<C> {
    const F: &str = "lewin_integral";
    if !x.is_finite() || !c.is_finite() {
        return Err(Error::NonFinite(F));
    }
    if x == 0.0 || c == 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    if x >= 1.0 || x <= -1.0 {
        return Err(Error::domain(F, format!("log(1-z) meets its cut: x = {x}")));
    }
    if c * x >= 1.0 {
        return Err(Error::domain(F, format!("log(1-cz) meets its cut: c x = {}", c * x)));
    }
    if x > 0.0 {
        return Ok(lewin_direct(x, c));
    }
    let a = -x;
    if c < 0.0 {
        return Ok(lewin_direct(c * x, 1.0 / c));
    }
    if a * c >= 1.0 {
        return Err(Error::domain(F, format!("x < 0 with -cx = {} >= 1 is outside the implemented routing", a * c)));
    }
    Ok(0.5 * lewin_direct(a * a, c * c)
        - lewin_direct(a, c)
        - lewin_direct(a * c, -1.0 / c)
        - lewin_direct(a, -c))
}

fn lewin_direct(x: f64, c: f64) -> C {
    let r = |t: f64| C::new(t, 0.0);
    let l2 = |t: f64| li2_raw(r(t));
    let l3 = |t: f64| li3_raw(r(t));
    let ci = 1.0 / c;
    let u = 1.0 - c * x;
    let v = 1.0 - x;
    let lu = u.ln();
    let lv = v.ln();
    l3(u / v) + l3(ci) + ZETA3 - l3(u) - l3(v) - l3(u / (c * v))
        + lu * (l2(ci) - l2(x))
        + lv * (l2(u) - l2(ci) + PI * PI / 6.0)
        + 0.5 * log_real(c) * lv * lv
}
