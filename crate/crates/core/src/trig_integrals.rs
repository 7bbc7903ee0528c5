//! Inverse tangent and inverse sine integrals.
//!
//! `ti(w) = ∫₀^w atan(u)/u du`, `asin_int(v) = ∫₀^v asin(u)/u du`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polylog::li2_raw;

/// Inverse tangent integral. Odd in `w`; for `|w| > 1` the reflection
/// `ti(w) = (π/2) log w + ti(1/w)` keeps the dilogarithm argument in the
/// unit disk.
pub fn ti(w: f64) -> Result<f64> {
    if !w.is_finite() {
        return Err(Error::NonFinite("ti"));
    }
    Ok(ti_raw(w))
}

pub(crate) fn ti_raw(w: f64) -> f64 {
    if w < 0.0 {
        return -ti_raw(-w);
    }
    if w == 0.0 {
        return 0.0;
    }
    if w <= 1.0 {
        li2_raw(Complex64::new(0.0, w)).im
    } else {
        FRAC_PI_2 * w.ln() + li2_raw(Complex64::new(0.0, 1.0 / w)).im
    }
}

/// Inverse sine integral on `[0, 1]`.
pub fn asin_int(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite("asin_int"));
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::domain("asin_int", format!("need 0 <= v <= 1, got {v}")));
    }
    Ok(asin_int_raw(v))
}

/// Odd extension to `[-1, 1]`.
pub(crate) fn asin_int_raw(v: f64) -> f64 {
    if v < 0.0 {
        return -asin_int_raw(-v);
    }
    if v == 0.0 {
        return 0.0;
    }
    if v == 1.0 {
        return FRAC_PI_2 * 2f64.ln();
    }
    let a = v.asin();
    0.5 * li2_raw(Complex64::from_polar(1.0, 2.0 * a)).im + a * (2.0 * v).ln()
}

/// `ti(w) - (π/2) log w - ti(1/w)` for `w > 0`, with the left side taken
/// straight from `Im Li2(iw)` rather than through the reflection.
pub fn ti_functional_residual(w: f64) -> Result<f64> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::domain("ti_functional_residual", format!("need w > 0, got {w}")));
    }
    let direct = if w <= 1.0 { ti_raw(w) } else { li2_raw(Complex64::new(0.0, w)).im };
    Ok(direct - FRAC_PI_2 * w.ln() - ti_raw(1.0 / w))
}
