//! Mahler measures with known closed forms, and the arctangent integral read
//! off from numerically evaluated measures.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;

use super::{mahler_nd, parse_poly_with, MahlerConfig};
use crate::elliptic::EllipticCtx;
use crate::error::{Error, Result};
use crate::polylog::bloch_wigner_raw;
use crate::quadrature::{integrate_1d, QuadResult, Tolerance};

/// Angle opposite side `a` of a triangle with sides `a, b, c`.
fn opposite_angle(a: f64, b: f64, c: f64) -> f64 {
    let s = 0.5 * (a + b + c);
    2.0 * (((s - b) * (s - c)) / (s * (s - a))).sqrt().atan()
}

/// `m(a + b x + c y)` for positive `a, b, c`.
pub fn cassaigne_maillot(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::NonFinite("cassaigne_maillot"));
    }
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::domain("cassaigne_maillot", format!("sides must be positive, got ({a}, {b}, {c})")));
    }
    Ok(cm_raw(a, b, c))
}

fn cm_raw(a: f64, b: f64, c: f64) -> f64 {
    if a < b + c && b < a + c && c < a + b {
        let alpha = opposite_angle(a, b, c);
        let beta = opposite_angle(b, a, c);
        let gamma = opposite_angle(c, a, b);
        let d = bloch_wigner_raw(Complex64::from_polar(a / b, gamma));
        (d + alpha * a.ln() + beta * b.ln() + gamma * c.ln()) / PI
    } else {
        a.max(b).max(c).ln()
    }
}

/// `m(1 - x^{1/6} + y + z)`, the average over `u ∈ [0,1]` of
/// `m(|1 - e^{2πiu/6}| + y + z)`.
pub fn fractional_mahler_sixth(tol: Tolerance) -> Result<QuadResult> {
    integrate_1d(
        |u| {
            let a = 2.0 * (PI * u / 6.0).sin();
            if a == 0.0 {
                0.0
            } else {
                cm_raw(a, 1.0, 1.0)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

const ARCTAN_FORMS: [&str; 4] = [
    "1+w^2+(y+w)^2*z",
    "(1+w^2)*(1+y)+w*(1-y)*(z+z^-1)",
    "(y-y^-1)+w*(z+z^-1)",
    "(4*(1+y)^2-(z+z^-1)^2)*(1+w^2)^2+(z-z^-1)^2*(1+y)^2*(1-w^2)^2",
];

/// The polynomial behind representation `form` of the arctangent integral.
pub fn arctan_form_expr(form: u32) -> Result<&'static str> {
    ARCTAN_FORMS
        .get((form as usize).wrapping_sub(1))
        .copied()
        .ok_or_else(|| Error::domain("arctan_mahler", format!("form must be 1..=4, got {form}")))
}

/// `∫₀^w atan(u)/u du` implied by Mahler measure representation `form`.
pub fn arctan_mahler(form: u32, w: f64, cfg: &MahlerConfig) -> Result<f64> {
    let expr = arctan_form_expr(form)?;
    if !w.is_finite() {
        return Err(Error::NonFinite("arctan_mahler"));
    }
    if w < 0.0 {
        return Err(Error::domain("arctan_mahler", format!("need w >= 0, got {w}")));
    }
    let m = mahler_nd(&parse_poly_with(expr, &[("w", w)])?, cfg)?.value;
    Ok(match form {
        1 => FRAC_PI_2 * m - FRAC_PI_4 * (1.0 + w * w).ln(),
        2 => FRAC_PI_4 * m,
        3 => FRAC_PI_2 * m,
        _ => FRAC_PI_4 * m - FRAC_PI_4 * LN_2 - FRAC_PI_2 * (1.0 + w).ln(),
    })
}

/// `m(4/k + x + 1/x + y + 1/y)`.
pub fn boyd_family(k: f64, cfg: &MahlerConfig) -> Result<QuadResult> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::domain("boyd_family", format!("need 0 < k <= 1, got {k}")));
    }
    mahler_nd(&parse_poly_with("4/k+x+x^-1+y+y^-1", &[("k", k)])?, cfg)
}

/// `∫₀^K am(u) cn(u)/sn(u) du` through its Mahler measure form.
pub fn cn_sn_mahler_form(ctx: &EllipticCtx, cfg: &MahlerConfig) -> Result<f64> {
    Ok(FRAC_PI_2 * ctx.r.ln() + FRAC_PI_2 * boyd_family(ctx.k, cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mahler::{mahler_nd, parse_poly};
    use crate::trig_integrals::{asin_int, ti};
    use crate::tsst::s_vv_closed;

    #[test]
    fn triangle_and_degenerate() {
        let jensen = mahler_nd(&parse_poly("1+x+y").unwrap(), &MahlerConfig::jensen(1 << 16)).unwrap().value;
        assert!((cassaigne_maillot(1.0, 1.0, 1.0).unwrap() - jensen).abs() < 1e-6);
        assert!((cassaigne_maillot(1.0, 1.0, 1.0).unwrap() - 0.323_065_947_219_450_5).abs() < 1e-12);
        assert!((cassaigne_maillot(5.0, 1.0, 1.0).unwrap() - 5f64.ln()).abs() < 1e-15);
        for bad in [(0.0, 1.0, 1.0), (1.0, -1.0, 1.0)] {
            assert!(cassaigne_maillot(bad.0, bad.1, bad.2).is_err());
        }
    }

    #[test]
    fn arcsine_representation() {
        for v in [0.1, 0.3, 0.4, 0.77, 1.0] {
            let m = cassaigne_maillot(2.0 * v, 1.0, 1.0).unwrap();
            assert!((m - 2.0 / PI * asin_int(v).unwrap()).abs() < 1e-13, "v={v}");
        }
    }

    #[test]
    fn continuous_at_boundary() {
        for (b, c) in [(1.0, 1.0), (0.4, 2.5), (3.0, 1.2)] {
            let edge = b + c;
            for side in 0..3 {
                let at = |a: f64| match side {
                    0 => cm_raw(a, b, c),
                    1 => cm_raw(b, a, c),
                    _ => cm_raw(b, c, a),
                };
                let lo = at(edge * (1.0 - 1e-9));
                let hi = at(edge * (1.0 + 1e-9));
                assert!((lo - hi).abs() < 1e-7, "{b} {c} side {side}: {lo} {hi}");
            }
        }
    }

    #[test]
    fn sixth_root_average() {
        let r = fractional_mahler_sixth(Tolerance::default()).unwrap();
        let want = 2.0 / PI * asin_int(0.5).unwrap() - 12.0 / (PI * PI) * s_vv_closed(0.5).unwrap();
        assert!((r.value - want).abs() < 1e-12, "{} vs {want}", r.value);
        let loose = fractional_mahler_sixth(Tolerance::abs(1e-9)).unwrap();
        assert!((loose.value - r.value).abs() < 1e-8);
        assert!(cm_raw(1e-300, 1.0, 1.0).abs() < 1e-290);
    }

    #[test]
    fn arctan_forms_at_zero() {
        let cfg = MahlerConfig::jensen(256);
        for form in 1..=3 {
            assert!(arctan_mahler(form, 0.0, &cfg).unwrap().abs() < 1e-9, "form {form}");
        }
        assert!(arctan_mahler(5, 0.5, &cfg).is_err());
        assert!(arctan_mahler(1, -0.5, &cfg).is_err());
    }

    #[test]
    fn arctan_forms() {
        let cfg = MahlerConfig::jensen(1024);
        for form in 1..=4 {
            for w in [0.7, 1.0] {
                let got = arctan_mahler(form, w, &cfg).unwrap();
                let want = ti(w).unwrap();
                assert!((got - want).abs() < 1e-4, "form {form} w={w}: {got} vs {want}");
            }
        }
    }
}
