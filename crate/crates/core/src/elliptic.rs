//! Jacobian elliptic functions for real modulus `0 < k < 1` on the
//! quarter period `[0, K]`, the nome and its inversion, and the table of
//! integrals `∫₀^K am(u) g(u) du`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polylog::{li2_raw, CATALAN};
use crate::quadrature::{integrate_1d, integrate_1d_with_offsets, QuadResult, Tolerance};
use crate::trig_integrals::ti_raw;

/// Everything derived from the modulus `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticCtx {
    pub k: f64,
    pub k_prime: f64,
    pub big_k: f64,
    pub big_k_prime: f64,
    /// `exp(-π K'/K)`
    pub q: f64,
    /// `√((1-k)/(1+k))`
    pub p: f64,
    /// `k/(1+k')`
    pub r: f64,
    /// `k/k'`
    pub s: f64,
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 4.0 * f64::EPSILON * an {
            return 0.5 * (an + bn);
        }
        a = an;
        b = bn;
    }
    a
}

/// `K(k) = π / (2 agm(1, k'))`.
pub fn complete_k(k: f64) -> Result<f64> {
    if !(k.is_finite() && k.abs() < 1.0) {
        return Err(Error::domain("complete_k", format!("need |k| < 1, got {k}")));
    }
    Ok(FRAC_PI_2 / agm(1.0, ((1.0 - k) * (1.0 + k)).sqrt()))
}

pub fn make_ctx(k: f64) -> Result<EllipticCtx> {
    if !k.is_finite() {
        return Err(Error::NonFinite("make_ctx"));
    }
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::domain("make_ctx", format!("need 0 < k < 1, got {k}")));
    }
    let k_prime = ((1.0 - k) * (1.0 + k)).sqrt();
    let big_k = FRAC_PI_2 / agm(1.0, k_prime);
    let big_k_prime = FRAC_PI_2 / agm(1.0, k);
    Ok(EllipticCtx {
        k,
        k_prime,
        big_k,
        big_k_prime,
        q: (-PI * big_k_prime / big_k).exp(),
        p: ((1.0 - k) / (1.0 + k)).sqrt(),
        r: k / (1.0 + k_prime),
        s: k / k_prime,
    })
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let mu = (x + y + z) / 3.0;
        let (dx, dy, dz) = (1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu);
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-3 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt();
        }
    }
}

/// Incomplete integral `F(φ) = ∫₀^φ dθ/√(1-k² sin²θ)` for `0 <= φ <= π/2`.
pub fn incomplete_f(phi: f64, k: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    s * carlson_rf(c * c, (1.0 - k * s) * (1.0 + k * s), 1.0)
}

impl EllipticCtx {
    fn check_u(&self, u: f64, func: &'static str) -> Result<f64> {
        if !u.is_finite() {
            return Err(Error::NonFinite(func));
        }
        let slack = 1e-14 * self.big_k;
        if u < -slack || u > self.big_k + slack {
            return Err(Error::domain(func, format!("need 0 <= u <= K = {}, got {u}", self.big_k)));
        }
        Ok(u.clamp(0.0, self.big_k))
    }

    /// `am(u)` by Newton on `F(φ) = u`, kept inside a bisection bracket.
    pub fn am(&self, u: f64) -> Result<f64> {
        let u = self.check_u(u, "jacobi_am")?;
        if u == 0.0 {
            return Ok(0.0);
        }
        if u == self.big_k {
            return Ok(FRAC_PI_2);
        }
        let k = self.k;
        let (mut lo, mut hi) = (0.0, FRAC_PI_2);
        let mut phi = FRAC_PI_2 * u / self.big_k;
        for _ in 0..100 {
            let g = incomplete_f(phi, k) - u;
            if g > 0.0 {
                hi = phi;
            } else {
                lo = phi;
            }
            let s = phi.sin();
            let dn = ((1.0 - k * s) * (1.0 + k * s)).sqrt();
            let mut next = phi - g * dn;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - phi).abs() <= 2.0 * f64::EPSILON * phi.max(1.0) || hi - lo <= 4.0 * f64::EPSILON {
                return Ok(next);
            }
            phi = next;
        }
        Ok(phi)
    }

    pub fn sn(&self, u: f64) -> Result<f64> {
        Ok(self.am(u)?.sin())
    }

    pub fn cn(&self, u: f64) -> Result<f64> {
        Ok(self.am(u)?.cos())
    }

    pub fn dn(&self, u: f64) -> Result<f64> {
        let s = self.sn(u)?;
        Ok(((1.0 - self.k * s) * (1.0 + self.k * s)).sqrt())
    }

    /// Fourier series of `cn` in the nome.
    pub fn fourier_cn(&self, u: f64) -> Result<f64> {
        let u = self.check_u(u, "fourier_cn")?;
        let q = self.q;
        let mut s = 0.0;
        let mut n = 0usize;
        loop {
            let qe = q.powf(n as f64 + 0.5);
            let o = (2 * n + 1) as f64;
            s += qe / (1.0 + q.powi(2 * n as i32 + 1)) * (PI * o * u / (2.0 * self.big_k)).cos();
            if q.powi(n as i32) < 1e-16 || n > 10_000 {
                break;
            }
            n += 1;
        }
        Ok(2.0 * PI / (self.k * self.big_k) * s)
    }

    /// Fourier series of `am`.
    pub fn fourier_am(&self, u: f64) -> Result<f64> {
        let u = self.check_u(u, "fourier_am")?;
        let q = self.q;
        let mut s = 0.0;
        let mut n = 1usize;
        loop {
            let qn = q.powi(n as i32);
            s += qn / (n as f64 * (1.0 + qn * qn)) * (PI * n as f64 * u / self.big_k).sin();
            if qn < 1e-16 || n > 10_000 {
                break;
            }
            n += 1;
        }
        Ok(FRAC_PI_2 * u / self.big_k + 2.0 * s)
    }
}

pub fn jacobi_am(u: f64, ctx: &EllipticCtx) -> Result<f64> {
    ctx.am(u)
}

pub fn fourier_cn(ctx: &EllipticCtx, u: f64) -> Result<f64> {
    ctx.fourier_cn(u)
}

pub fn fourier_am(ctx: &EllipticCtx, u: f64) -> Result<f64> {
    ctx.fourier_am(u)
}

fn check_q(q: f64, func: &'static str) -> Result<()> {
    if !q.is_finite() {
        return Err(Error::NonFinite(func));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(func, format!("need 0 < q < 1, got {q}")));
    }
    Ok(())
}

/// `k = sin(4 Σ (-1)^n/(2n+1) · q^{n+½}/(1+q^{2n+1}))`.
pub fn nome_invert_sin(q: f64) -> Result<f64> {
    check_q(q, "nome_invert_sin")?;
    let mut s = 0.0;
    let mut n = 0usize;
    loop {
        let qe = q.powf(n as f64 + 0.5);
        if qe < 1e-17 {
            break;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        s += sign / (2 * n + 1) as f64 * qe / (1.0 + q.powi(2 * n as i32 + 1));
        n += 1;
    }
    Ok((4.0 * s).sin())
}

/// `k = tanh(4 Σ 1/(2n+1) · q^{n+½}/(1-q^{2n+1}))`.
pub fn nome_invert_tanh(q: f64) -> Result<f64> {
    check_q(q, "nome_invert_tanh")?;
    let mut s = 0.0;
    let mut n = 0usize;
    loop {
        let qe = q.powf(n as f64 + 0.5);
        if qe < 1e-17 {
            break;
        }
        s += qe / ((2 * n + 1) as f64 * (1.0 - q.powi(2 * n as i32 + 1)));
        n += 1;
    }
    Ok((4.0 * s).tanh())
}

/// The factor `g(u)` in `∫₀^K am(u) g(u) du`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntegrandKind {
    Sn,
    Cn,
    Dn,
    InvSn,
    InvCn,
    InvDn,
    SnCn,
    SnDn,
    CnSn,
    CnDn,
    DnSn,
    DnCn,
}

impl IntegrandKind {
    pub const ALL: [IntegrandKind; 12] = [
        IntegrandKind::Sn,
        IntegrandKind::Cn,
        IntegrandKind::Dn,
        IntegrandKind::InvSn,
        IntegrandKind::InvCn,
        IntegrandKind::InvDn,
        IntegrandKind::SnCn,
        IntegrandKind::SnDn,
        IntegrandKind::CnSn,
        IntegrandKind::CnDn,
        IntegrandKind::DnSn,
        IntegrandKind::DnCn,
    ];

    /// The three rows with `cn` in the denominator blow up at `u = K`.
    pub fn is_divergent(self) -> bool {
        matches!(self, IntegrandKind::InvCn | IntegrandKind::SnCn | IntegrandKind::DnCn)
    }

    pub fn label(self) -> &'static str {
        match self {
            IntegrandKind::Sn => "sn",
            IntegrandKind::Cn => "cn",
            IntegrandKind::Dn => "dn",
            IntegrandKind::InvSn => "1/sn",
            IntegrandKind::InvCn => "1/cn",
            IntegrandKind::InvDn => "1/dn",
            IntegrandKind::SnCn => "sn/cn",
            IntegrandKind::SnDn => "sn/dn",
            IntegrandKind::CnSn => "cn/sn",
            IntegrandKind::CnDn => "cn/dn",
            IntegrandKind::DnSn => "dn/sn",
            IntegrandKind::DnCn => "dn/cn",
        }
    }

    /// `(sn, cn, dn) ↦ g`
    fn eval(self, s: f64, c: f64, d: f64) -> f64 {
        match self {
            IntegrandKind::Sn => s,
            IntegrandKind::Cn => c,
            IntegrandKind::Dn => d,
            IntegrandKind::InvSn => 1.0 / s,
            IntegrandKind::InvCn => 1.0 / c,
            IntegrandKind::InvDn => 1.0 / d,
            IntegrandKind::SnCn => s / c,
            IntegrandKind::SnDn => s / d,
            IntegrandKind::CnSn => c / s,
            IntegrandKind::CnDn => c / d,
            IntegrandKind::DnSn => d / s,
            IntegrandKind::DnCn => d / c,
        }
    }
}

impl std::str::FromStr for IntegrandKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IntegrandKind::ALL
            .iter()
            .copied()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::Usage(format!("unknown integrand kind '{s}'")))
    }
}

fn am_tol() -> Tolerance {
    Tolerance::new(1e-14, 1e-14, 400_000).expect("valid tolerance")
}

/// `∫₀^K am(u) g(u) du` by quadrature in `φ = am(u)`, where
/// `du = dφ/√(1-k² sin²φ)`.
pub fn am_integral_quad(kind: IntegrandKind, ctx: &EllipticCtx) -> Result<QuadResult> {
    if kind.is_divergent() {
        return Err(Error::Divergent);
    }
    let k = ctx.k;
    integrate_1d_with_offsets(
        move |phi, _, to_end| {
            let s = phi.sin();
            // cos φ = sin(π/2 - φ) keeps its relative accuracy near π/2.
            let c = to_end.sin();
            let d = ((1.0 - k * s) * (1.0 + k * s)).sqrt();
            phi * kind.eval(s, c, d) / d
        },
        0.0,
        FRAC_PI_2,
        am_tol(),
    )
}

/// `∫₀¹ asin(x)/(x √(1-k²x²)) dx`, the `cn/sn` row after `x = sn(u)`.
pub fn cn_sn_x_integral(ctx: &EllipticCtx) -> Result<QuadResult> {
    let k = ctx.k;
    integrate_1d_with_offsets(
        move |x, _, omx| {
            let a = if omx < 0.5 { FRAC_PI_2 - 2.0 * (0.5 * omx).sqrt().asin() } else { x.asin() };
            a / (x * ((1.0 - k * x) * (1.0 + k * x)).sqrt())
        },
        0.0,
        1.0,
        am_tol(),
    )
}

/// Closed forms of the table. The `cn/sn` row equals
/// `(π/2) log r + (π/2) m(4/k + x + 1/x + y + 1/y)`; that Mahler measure
/// lives in the `mahler` module, so here the row returns its defining
/// `x`-integral.
pub fn am_integral_closed(kind: IntegrandKind, ctx: &EllipticCtx) -> Result<f64> {
    let EllipticCtx { k, k_prime, p, r, s, .. } = *ctx;
    let pi2_8 = PI * PI / 8.0;
    let odd_li2 = |x: f64| li2_raw(Complex64::new(x, 0.0)).re - li2_raw(Complex64::new(-x, 0.0)).re;
    let v = match kind {
        _ if kind.is_divergent() => return Err(Error::Divergent),
        IntegrandKind::Sn => ti_raw(s) / k,
        IntegrandKind::Cn => FRAC_PI_2 * k.asin() / k - odd_li2(k) / (2.0 * k),
        IntegrandKind::Dn => pi2_8,
        IntegrandKind::InvSn => -FRAC_PI_2 * p.ln() + 2.0 * ti_raw(p),
        IntegrandKind::InvDn => (pi2_8 + 0.5 * odd_li2(r * r)) / k_prime,
        IntegrandKind::SnDn => odd_li2(r) / (k * k_prime),
        IntegrandKind::CnDn => -PI / (2.0 * k) * p.ln() - 2.0 * ti_raw(r) / k,
        IntegrandKind::DnSn => 2.0 * CATALAN,
        IntegrandKind::CnSn => cn_sn_x_integral(ctx)?.value,
        IntegrandKind::InvCn | IntegrandKind::SnCn | IntegrandKind::DnCn => unreachable!(),
    };
    Ok(v)
}

/// `∫₀^K cn(u) du` by quadrature in `u`, calling `cn` directly.
pub fn cn_integral_in_u(ctx: &EllipticCtx) -> Result<QuadResult> {
    let c = *ctx;
    integrate_1d(move |u| c.cn(u).unwrap_or(f64::NAN), 0.0, ctx.big_k, am_tol())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ctx_basics() {
        let c = make_ctx(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((c.big_k - c.big_k_prime).abs() < 1e-14);
        assert!((c.q - (-PI).exp()).abs() < 1e-15);
        let c = make_ctx(1e-9).unwrap();
        assert!((c.big_k - FRAC_PI_2).abs() < 1e-15);
        assert!(make_ctx(0.0).is_err());
        assert!(make_ctx(1.0).is_err());
        // K(0.6): frozen reference value.
        let c = make_ctx(0.6).unwrap();
        assert!((c.big_k - 1.750_753_802_915_752_5).abs() < 1e-14);
    }

    #[test]
    fn quarter_period_values() {
        let c = make_ctx(0.6).unwrap();
        assert_eq!(c.am(0.0).unwrap(), 0.0);
        assert_eq!(c.cn(0.0).unwrap(), 1.0);
        assert_eq!(c.dn(0.0).unwrap(), 1.0);
        assert!((c.sn(c.big_k).unwrap() - 1.0).abs() < 1e-15);
        assert!(c.cn(c.big_k).unwrap().abs() < 1e-15);
        assert!((c.dn(c.big_k).unwrap() - c.k_prime).abs() < 1e-15);
        assert!(c.am(c.big_k * 1.01).is_err());
    }

    #[test]
    fn am_inverts_quadrature_integral() {
        let c = make_ctx(0.6).unwrap();
        let u = c.big_k / 2.0;
        let phi = c.am(u).unwrap();
        let back = integrate_1d(|t| 1.0 / (1.0 - 0.36 * t.sin().powi(2)).sqrt(), 0.0, phi, Tolerance::default())
            .unwrap()
            .value;
        assert!((back - u).abs() < 1e-13);
    }

    #[test]
    fn nome_inversion() {
        for &k in &[0.3, 0.6, 0.95] {
            let q = make_ctx(k).unwrap().q;
            assert!((nome_invert_sin(q).unwrap() - k).abs() < 1e-12);
            assert!((nome_invert_tanh(q).unwrap() - k).abs() < 1e-12);
        }
        for &q in &[0.01, 0.05, 0.1, 0.2] {
            assert!((nome_invert_sin(q).unwrap() - nome_invert_tanh(q).unwrap()).abs() < 1e-13);
        }
        assert!(nome_invert_sin(1e-300).unwrap() < 1e-140);
        assert!(nome_invert_tanh(1.0).is_err());
    }

    #[test]
    fn fourier_series() {
        let c = make_ctx(0.6).unwrap();
        assert!((c.fourier_cn(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(c.fourier_am(0.0).unwrap(), 0.0);
        let u = c.big_k / 3.0;
        assert!((c.fourier_cn(u).unwrap() - c.cn(u).unwrap()).abs() < 1e-12);
        assert!((c.fourier_am(u).unwrap() - c.am(u).unwrap()).abs() < 1e-12);
        // Small modulus. Two terms leave an error of the size of the third,
        // (2π/kK) q^{5/2} ≈ 2.4e-8 at k = 0.05; four terms are below 1e-12.
        let c = make_ctx(0.05).unwrap();
        let u = 0.4 * c.big_k;
        let q = c.q;
        let partial = |terms: usize| {
            2.0 * PI / (c.k * c.big_k)
                * (0..terms)
                    .map(|n| {
                        let o = (2 * n + 1) as f64;
                        q.powf(n as f64 + 0.5) / (1.0 + q.powf(o)) * (o * PI * u / (2.0 * c.big_k)).cos()
                    })
                    .sum::<f64>()
        };
        let exact = c.cn(u).unwrap();
        let third = 2.0 * PI / (c.k * c.big_k) * q.powf(2.5);
        let err2 = (partial(2) - exact).abs();
        assert!(err2 > 1e-12 && err2 <= third * 1.001, "{err2} {third}");
        assert!((partial(4) - exact).abs() < 1e-12);
    }

    #[test]
    fn table_rows() {
        for &k in &[0.3, 0.6, 0.9] {
            let c = make_ctx(k).unwrap();
            for kind in IntegrandKind::ALL {
                if kind.is_divergent() {
                    assert_eq!(am_integral_quad(kind, &c), Err(Error::Divergent));
                    assert_eq!(am_integral_closed(kind, &c), Err(Error::Divergent));
                    continue;
                }
                let q = am_integral_quad(kind, &c).unwrap().value;
                let cf = am_integral_closed(kind, &c).unwrap();
                assert!((q - cf).abs() < 1e-10, "k={k} {}: {q} vs {cf}", kind.label());
            }
            assert!((am_integral_quad(IntegrandKind::Dn, &c).unwrap().value - PI * PI / 8.0).abs() < 1e-12);
            assert!((am_integral_quad(IntegrandKind::DnSn, &c).unwrap().value - 2.0 * CATALAN).abs() < 1e-12);
        }
    }

    #[test]
    fn cn_integral() {
        let c = make_ctx(0.6).unwrap();
        let q = cn_integral_in_u(&c).unwrap().value;
        assert!((q - 0.6f64.asin() / 0.6).abs() < 1e-10);
    }

    #[test]
    fn kinds_parse() {
        for kind in IntegrandKind::ALL {
            assert_eq!(kind.label().parse::<IntegrandKind>().unwrap(), kind);
        }
        assert!("tn".parse::<IntegrandKind>().is_err());
    }
}
