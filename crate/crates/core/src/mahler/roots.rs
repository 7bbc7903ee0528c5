//! One-variable Mahler measure by Jensen's formula.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64 as C;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 64;

/// `log|a_d| + Σ log⁺|ρ_i|` for `Σ a_j x^j`, coefficients constant first.
///
/// Zero coefficients at either end are stripped first, so a Laurent
/// polynomial may be passed after shifting by any power of `x`.
pub fn mahler_1var_roots(coeffs: &[C]) -> Result<f64> {
    if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::NonFinite("mahler_1var_roots"));
    }
    let Some((lo, hi)) = support(coeffs) else {
        return Err(Error::domain("mahler_1var_roots", "zero polynomial"));
    };
    if hi - lo > MAX_DEGREE {
        return Err(Error::domain("mahler_1var_roots", format!("degree {} exceeds {MAX_DEGREE}", hi - lo)));
    }
    Ok(jensen_trimmed(&coeffs[lo..=hi]))
}

fn support(c: &[C]) -> Option<(usize, usize)> {
    let lo = c.iter().position(|z| *z != C::new(0.0, 0.0))?;
    let hi = c.iter().rposition(|z| *z != C::new(0.0, 0.0))?;
    Some((lo, hi))
}

/// Like [`mahler_1var_roots`] without validation; `None` for the zero
/// polynomial. Degree must not exceed [`MAX_DEGREE`].
pub(crate) fn jensen(coeffs: &[C]) -> Option<f64> {
    let (lo, hi) = support(coeffs)?;
    Some(jensen_trimmed(&coeffs[lo..=hi]))
}

fn log_plus(x: f64) -> f64 {
    x.max(0.0)
}

fn jensen_trimmed(c: &[C]) -> f64 {
    let d = c.len() - 1;
    match d {
        0 => c[0].norm().ln(),
        1 => c[0].norm().ln().max(c[1].norm().ln()),
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let s = (b * b - 4.0 * a * cc).sqrt();
            let s = if (b.conj() * s).re >= 0.0 { s } else { -s };
            // q/a and cc/q are the two roots, computed without cancellation.
            let q = -0.5 * (b + s);
            let lq = q.norm().ln();
            let la = a.norm().ln();
            la.max(lq) + log_plus(cc.norm().ln() - lq)
        }
        _ if c[1..d].iter().all(|z| *z == C::new(0.0, 0.0)) => {
            // a x^d + b: every root has modulus |b/a|^(1/d).
            c[0].norm().ln().max(c[d].norm().ln())
        }
        _ => {
            let lead = c[d];
            let roots = companion_roots(c);
            lead.norm().ln() + roots.iter().map(|r| log_plus(r.norm().ln())).sum::<f64>()
        }
    }
}

fn horner(c: &[C], x: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Iterations allowed per unit of degree before falling back to Aberth.
const SCHUR_ITERS_PER_DEGREE: usize = 40;
const ABERTH_ITERS: usize = 500;

/// Simultaneous Newton iteration, used when the QR iteration on the companion
/// matrix stalls (highly symmetric cases such as `x^n + 1`).
fn aberth(c: &[C]) -> Vec<C> {
    let d = c.len() - 1;
    let radius = (c[0].norm() / c[d].norm()).powf(1.0 / d as f64);
    let mut z: Vec<C> =
        (0..d).map(|k| C::from_polar(radius, (2.0 * std::f64::consts::PI * k as f64 + 0.4) / d as f64)).collect();
    for _ in 0..ABERTH_ITERS {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = horner(c, z[k]);
            if p == C::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulse: C = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (C::new(1.0, 0.0) - ratio * repulse);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Eigenvalues of the companion matrix, each refined by one Newton step
/// when that step reduces the residual.
pub(crate) fn companion_roots(c: &[C]) -> Vec<C> {
    let d = c.len() - 1;
    let lead = c[d];
    let mut m = DMatrix::<C>::zeros(d, d);
    for j in 0..d {
        m[(0, j)] = -c[d - 1 - j] / lead;
    }
    for i in 1..d {
        m[(i, i - 1)] = C::new(1.0, 0.0);
    }
    let eig: Vec<C> = match Schur::try_new(m, f64::EPSILON, SCHUR_ITERS_PER_DEGREE * d.max(8)).and_then(|s| s.eigenvalues()) {
        Some(e) => e.iter().copied().collect(),
        None => aberth(c),
    };
    eig.into_iter()
        .map(|r| {
            let (p, dp) = horner(c, r);
            if dp == C::new(0.0, 0.0) {
                return r;
            }
            let next = r - p / dp;
            if next.re.is_finite() && next.im.is_finite() && horner(c, next).0.norm() <= p.norm() {
                next
            } else {
                r
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_periodic;
    use std::f64::consts::{LN_2, PI};

    fn re(v: &[f64]) -> Vec<C> {
        v.iter().map(|&x| C::new(x, 0.0)).collect()
    }

    #[test]
    fn linear() {
        assert!((mahler_1var_roots(&re(&[1.0, 2.0])).unwrap() - LN_2).abs() < 1e-15);
        assert!(mahler_1var_roots(&re(&[1.0, 1.0])).unwrap().abs() < 1e-15);
        assert!((mahler_1var_roots(&re(&[0.0, 0.0, 3.0, 0.0])).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!(mahler_1var_roots(&re(&[0.0, 0.0])).is_err());
        assert!(mahler_1var_roots(&[]).is_err());
    }

    fn direct(c: &[C]) -> f64 {
        integrate_periodic(
            |t| {
                let x = C::from_polar(1.0, 2.0 * PI * t);
                horner(c, x).0.norm().ln()
            },
            1 << 14,
            0.377,
        )
        .unwrap()
    }

    #[test]
    fn against_periodic_quadrature() {
        // (1+x)^2 - v^4 (1-x)^2 at v = 0.8: zeros off the circle, smooth integrand.
        let v4 = 0.8f64.powi(4);
        let c = re(&[1.0 - v4, 2.0 + 2.0 * v4, 1.0 - v4]);
        assert!((mahler_1var_roots(&c).unwrap() - direct(&c)).abs() < 1e-12);
        let cubic = vec![C::new(0.3, -1.0), C::new(2.0, 0.5), C::new(-0.7, 0.0), C::new(0.2, 0.1)];
        assert!((mahler_1var_roots(&cubic).unwrap() - direct(&cubic)).abs() < 1e-11);
        let quintic = re(&[5.0, -1.0, 0.0, 3.0, 0.5, 2.0]);
        assert!((mahler_1var_roots(&quintic).unwrap() - direct(&quintic)).abs() < 1e-11);
    }

    #[test]
    fn quadratic_matches_companion() {
        for c in [re(&[1.0, 3.0, 2.0]), re(&[1e-8, 1.0, 1e8]), vec![C::new(0.0, 1.0), C::new(1.0, 1.0), C::new(2.0, 0.0)]] {
            let closed = jensen(&c).unwrap();
            let roots = companion_roots(&c);
            let via = c[2].norm().ln() + roots.iter().map(|r| r.norm().ln().max(0.0)).sum::<f64>();
            assert!((closed - via).abs() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn degree_cap() {
        let mut c = vec![C::new(0.0, 0.0); MAX_DEGREE + 2];
        c[0] = C::new(1.0, 0.0);
        c[MAX_DEGREE + 1] = C::new(1.0, 0.0);
        assert!(mahler_1var_roots(&c).is_err());
        c.pop();
        c[MAX_DEGREE] = C::new(1.0, 0.0);
        // x^64 + 1 has all roots on the circle.
        assert!(mahler_1var_roots(&c).unwrap().abs() < 1e-9);
    }
}
