//! Complex dilogarithm and trilogarithm, the Bloch-Wigner function and
//! the odd-part polylogarithms `F_j`.
//!
//! Branch convention: principal logarithm, cut `[1, ∞)` for `Li_k`. A real
//! argument `x > 1` is always evaluated as the limit from below, `x - i0`,
//! regardless of the sign of a zero imaginary part.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

pub const ZETA3: f64 = 1.202_056_903_159_594_285_399_738_161_511_449_99;
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_11;
pub const PI2_6: f64 = PI * PI / 6.0;

/// The constants the identities are written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub zeta3: f64,
    pub catalan: f64,
    pub pi: f64,
}

pub const CONSTANTS: Constants = Constants { zeta3: ZETA3, catalan: CATALAN, pi: PI };

const MAX_COEFFS: usize = 64;

/// `B_n / n!` for n = 0..MAX_COEFFS, with `B_1 = -1/2`.
fn bernoulli_ratios() -> &'static [f64; MAX_COEFFS] {
    static TABLE: OnceLock<[f64; MAX_COEFFS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; MAX_COEFFS];
        t[0] = 1.0;
        t[1] = -0.5;
        // B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}
        let mut k = 1;
        while 2 * k < MAX_COEFFS {
            let s = 2 * k;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            t[s] = sign * 2.0 * zeta_even(s as i32) / (2.0 * PI).powi(s as i32);
            k += 1;
        }
        t
    })
}

/// zeta(s) for integer s >= 2 from a short sum plus Euler-Maclaurin tail.
fn zeta_even(s: i32) -> f64 {
    if s == 2 {
        return PI2_6;
    }
    let n = 64.0_f64;
    let sf = s as f64;
    let mut sum = 0.0;
    for i in (1..64).rev() {
        sum += (i as f64).powi(-s);
    }
    sum + n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powi(-s) + sf * n.powi(-s - 1) / 12.0
        - sf * (sf + 1.0) * (sf + 2.0) * n.powi(-s - 3) / 720.0
}

/// Coefficients `c_m` with `Li3(z) = sum c_m u^{m+1}`, `u = -log(1-z)`.
fn li3_u_coeffs() -> &'static [f64; MAX_COEFFS] {
    static TABLE: OnceLock<[f64; MAX_COEFFS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_ratios();
        // Li2 as a series in u: a_j u^j
        let mut a = [0.0; MAX_COEFFS + 1];
        a[1] = 1.0;
        a[2] = -0.25;
        let mut j = 3;
        while j <= MAX_COEFFS {
            a[j] = b[j - 1] / j as f64;
            j += 2;
        }
        let mut c = [0.0; MAX_COEFFS];
        for (m, cm) in c.iter_mut().enumerate() {
            // dLi3/du = (Li2/u) * u/(e^u - 1)
            let mut d = 0.0;
            for j in 1..=m + 1 {
                d += a[j] * b[m + 1 - j];
            }
            *cm = d / (m + 1) as f64;
        }
        c
    })
}

fn check_finite(z: Complex64, func: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(func))
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re > 1.0
}

/// Principal log of a real number; negative reals get `+iπ`.
pub(crate) fn log_real(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.ln(), 0.0)
    } else {
        Complex64::new((-x).ln(), PI)
    }
}

pub fn li2(z: ComplexValue) -> Result<ComplexValue> {
    check_finite(z, "li2")?;
    Ok(li2_raw(z))
}

pub fn li3(z: ComplexValue) -> Result<ComplexValue> {
    check_finite(z, "li3")?;
    Ok(li3_raw(z))
}

/// `Li2` of a real argument; the real part for `x > 1`.
pub fn li2_re(x: f64) -> f64 {
    li2_raw(Complex64::new(x, 0.0)).re
}

pub fn li3_re(x: f64) -> f64 {
    li3_raw(Complex64::new(x, 0.0)).re
}

pub(crate) fn li2_raw(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.im == 0.0 && z.re == 1.0 {
        return Complex64::new(PI2_6, 0.0);
    }
    if on_cut(z) {
        let x = z.re;
        let l = x.ln();
        let re = 2.0 * PI2_6 - 0.5 * l * l - li2_small_real(1.0 / x);
        return Complex64::new(re, -PI * l);
    }
    let r = z.norm();
    if r <= 0.5 {
        return li2_series(z);
    }
    if r > 1.0 {
        let lz = (-z).ln();
        return -PI2_6 - 0.5 * lz * lz - li2_unit(z.inv());
    }
    li2_unit(z)
}

fn li2_small_real(x: f64) -> f64 {
    li2_unit(Complex64::new(x, 0.0)).re
}

/// `Li2` for `|z| <= 1`.
fn li2_unit(z: Complex64) -> Complex64 {
    if z.norm() <= 0.5 {
        return li2_series(z);
    }
    if z.re > 0.5 {
        let w = Complex64::new(1.0, 0.0) - z;
        if w.norm() == 0.0 {
            return Complex64::new(PI2_6, 0.0);
        }
        return PI2_6 - z.ln() * w.ln() - li2_bernoulli(w);
    }
    li2_bernoulli(z)
}

fn li2_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = z;
    for n in 1..400 {
        let nf = n as f64;
        let term = p / (nf * nf);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        p *= z;
    }
    sum
}

/// Series in `u = -log(1-z)`; valid for `Re z <= 1/2` with `|z| <= 1`.
fn li2_bernoulli(z: Complex64) -> Complex64 {
    let b = bernoulli_ratios();
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut p = u * u2;
    let mut k = 2;
    while k < MAX_COEFFS {
        let term = p * (b[k] / (k + 1) as f64);
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        p *= u2;
        k += 2;
    }
    sum
}

pub(crate) fn li3_raw(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.im == 0.0 && z.re == 1.0 {
        return Complex64::new(ZETA3, 0.0);
    }
    if on_cut(z) {
        let x = z.re;
        let l = x.ln();
        let re = li3_unit(Complex64::new(1.0 / x, 0.0)).re - l * l * l / 6.0 + 2.0 * PI2_6 * l;
        return Complex64::new(re, -0.5 * PI * l * l);
    }
    if z.norm() > 1.0 {
        let lz = (-z).ln();
        return li3_unit(z.inv()) - lz * lz * lz / 6.0 - PI2_6 * lz;
    }
    li3_unit(z)
}

/// `Li3` for `|z| <= 1`, `z != 1`.
fn li3_unit(z: Complex64) -> Complex64 {
    if z.norm() <= 0.5 {
        return li3_series(z);
    }
    let mu = z.ln();
    if mu.norm() < 1.0 {
        return li3_log_series(mu);
    }
    li3_u_series(z)
}

fn li3_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = z;
    for n in 1..400 {
        let nf = n as f64;
        let term = p / (nf * nf * nf);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        p *= z;
    }
    sum
}

/// Expansion about `z = 1` in `mu = log z`, `|mu| < 2π`.
fn li3_log_series(mu: Complex64) -> Complex64 {
    if mu.norm() == 0.0 {
        return Complex64::new(ZETA3, 0.0);
    }
    let b = bernoulli_ratios();
    let mu2 = mu * mu;
    let mut sum = ZETA3 + PI2_6 * mu + mu2 * (0.75 - 0.5 * (-mu).ln()) - mu2 * mu / 12.0;
    let mut p = mu2 * mu2;
    let mut k = 4;
    while k < MAX_COEFFS {
        let kf = k as f64;
        let term = -p * (b[k - 2] / ((kf - 2.0) * (kf - 1.0) * kf));
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        p *= mu2;
        k += 2;
    }
    sum
}

fn li3_u_series(z: Complex64) -> Complex64 {
    let c = li3_u_coeffs();
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = u;
    for (m, &cm) in c.iter().enumerate() {
        let term = p * cm;
        sum += term;
        if m > 2 && term.norm() <= 1e-18 * sum.norm() && cm != 0.0 {
            break;
        }
        p *= u;
    }
    sum
}

/// Bloch-Wigner dilogarithm `D(z) = Im Li2(z) + log|z| arg(1-z)`.
///
/// Returns 0 at `z = 0` and `z = 1`, where D extends continuously.
pub fn bloch_wigner(z: ComplexValue) -> Result<f64> {
    check_finite(z, "bloch_wigner")?;
    Ok(bloch_wigner_raw(z))
}

pub(crate) fn bloch_wigner_raw(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    li2_raw(z).im + z.norm().ln() * (Complex64::new(1.0, 0.0) - z).arg()
}

/// `F_j(x) = (Li_j(x) - Li_j(-x))/2`, with `F_1 = atanh`.
pub fn f_odd(j: u32, x: ComplexValue) -> Result<ComplexValue> {
    check_finite(x, "f_odd")?;
    match j {
        1 => {
            if x.norm() >= 1.0 {
                return Err(Error::domain("f_odd", format!("F_1 needs |x| < 1, got |x| = {}", x.norm())));
            }
            Ok(atanh_raw(x))
        }
        2 | 3 => Ok(f_odd_raw(j, x)),
        _ => Err(Error::domain("f_odd", format!("weight {j} not in 1..3"))),
    }
}

pub(crate) fn atanh_raw(x: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    0.5 * ((one + x).ln() - (one - x).ln())
}

pub(crate) fn f_odd_raw(j: u32, x: Complex64) -> Complex64 {
    match j {
        1 => atanh_raw(x),
        2 => 0.5 * (li2_raw(x) - li2_raw(-x)),
        _ => 0.5 * (li3_raw(x) - li3_raw(-x)),
    }
}

/// Real `F_j(x)` for `|x| < 1` and any weight, by direct summation.
pub(crate) fn f_odd_series_real(j: i32, x: f64) -> f64 {
    let x2 = x * x;
    let mut p = x;
    let mut sum = 0.0;
    let mut n = 0usize;
    loop {
        let d = (2 * n + 1) as f64;
        let term = p / d.powi(j);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(1e-300) || n > 1_000_000 {
            break;
        }
        p *= x2;
        n += 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series(s: i32, z: Complex64, n: usize) -> Complex64 {
        let mut sum = c(0.0, 0.0);
        let mut p = z;
        for k in 1..=n {
            sum += p / (k as f64).powi(s);
            p *= z;
        }
        sum
    }

    #[test]
    fn special_values() {
        assert!((li2_raw(c(1.0, 0.0)).re - PI2_6).abs() < 1e-15);
        assert!((li2_raw(c(-1.0, 0.0)).re + PI * PI / 12.0).abs() < 1e-15);
        assert!((li3_raw(c(1.0, 0.0)).re - ZETA3).abs() < 1e-15);
        assert_eq!(li3_raw(c(0.0, 0.0)), c(0.0, 0.0));
        // Li2(1/2) = pi^2/12 - log^2(2)/2
        let l2 = 2f64.ln();
        assert!((li2_re(0.5) - (PI * PI / 12.0 - 0.5 * l2 * l2)).abs() < 1e-15);
        // Li3(1/2) = 7/8 zeta3 - pi^2/12 log2 + log^3(2)/6
        let v = 7.0 / 8.0 * ZETA3 - PI * PI / 12.0 * l2 + l2.powi(3) / 6.0;
        assert!((li3_re(0.5) - v).abs() < 1e-15);
        // Li3(-1) = -3/4 zeta3
        assert!((li3_re(-1.0) + 0.75 * ZETA3).abs() < 1e-15);
    }

    #[test]
    fn against_series_inside_disk() {
        for &z in &[c(0.3, 0.4), c(-0.8, 0.0), c(0.6, -0.5), c(-0.2, 0.9), c(0.95, 0.1), c(0.0, 0.97)] {
            let n = 6000;
            let s2 = series(2, z, n);
            let s3 = series(3, z, n);
            let tol = if z.norm() > 0.9 { 1e-11 } else { 1e-14 };
            assert!((li2_raw(z) - s2).norm() < tol, "li2 {z}");
            assert!((li3_raw(z) - s3).norm() < tol, "li3 {z}");
        }
    }

    /// Reference values computed at 30 digits with an independent
    /// arbitrary-precision implementation.
    const FROZEN: &[(f64, f64, f64, f64, f64, f64)] = &[
        (0.3, 0.4, 0.266596866742740416, 0.461362891819108994, 0.286151780395889621, 0.430821405924754627),
        (-0.8, 0.0, -0.679781587834681124, 0.0, -0.734371305634442943, 0.0),
        (1.5, 0.2, 1.98951650243205435, 1.38772733674107413, 1.90352373817147321, 0.558647393716606411),
        (-3.0, 0.5, -1.94817179165384767, 0.230504603210785136, -2.3564498737806638, 0.322868293622822488),
        (0.7, 0.7, 0.562719767433781475, 0.970033357331282031, 0.657892670705358724, 0.837969537729163142),
        (0.5, -0.9, 0.256316096525394489, -1.04545421836509379, 0.391417314082531491, -0.99137610757195886),
        (2.0, -0.001, 2.46583055407634027, -2.17758648283596814, 2.76098342150329101, -0.755927409448478145),
        (1.001, 0.002, 1.64798216649700726, 0.0162303504656901377, 1.20368886310503954, 0.0032987499601824352),
        (0.999, -0.001, 1.63658670567752521, -0.00678284982771614988, 1.20041274863286623, -0.0016385104011724712),
        (-0.6, 0.75, -0.598375440140528451, 0.572619747186637086, -0.60547803926144656, 0.653566109243099212),
        (10.0, 3.0, -0.428112656622011138, 6.71435494886382956, 3.61046370047485693, 8.64235499633811289),
        (-50.0, -0.1, -9.27700108819094662, -0.00786364467653008296, -16.4331980196979606, -0.0185539800521404481),
        (0.1, -2.5, -0.745026415620822578, -1.8728742095521845, -0.451188598108034055, -2.23181694593120271),
        (0.55, 0.05, 0.651411592778661115, 0.0725110036601976253, 0.595406608830166155, 0.0593613478077414693),
        (-1.0, 1e-9, -0.822467033424113218, 6.93147180559945353e-10, -0.901542677369695714, 8.22467033424113269e-10),
        (0.0, 1.0, -0.205616758356028305, 0.915965594177219015, -0.112692834671211964, 0.96894614625936938),
        (4.0, 0.0, 2.06130946677731742, -4.35517218060720426, 4.3751541690494117, -3.01877531784099256),
    ];

    #[test]
    fn frozen_reference_values() {
        for &(re, im, l2r, l2i, l3r, l3i) in FROZEN {
            let z = c(re, im);
            let a = li2_raw(z);
            let b = li3_raw(z);
            let s = 1e-14 * (1.0 + a.norm().max(b.norm()));
            assert!((a - c(l2r, l2i)).norm() < s, "li2({z}) = {a}");
            assert!((b - c(l3r, l3i)).norm() < s, "li3({z}) = {b}");
        }
    }

    #[test]
    fn cut_is_approached_from_below() {
        let x = 3.0;
        let below = li2_raw(c(x, -1e-13));
        assert!((li2_raw(c(x, 0.0)) - below).norm() < 1e-11);
        assert!((li2_raw(c(x, -0.0)) - below).norm() < 1e-11);
        let below3 = li3_raw(c(x, -1e-13));
        assert!((li3_raw(c(x, 0.0)) - below3).norm() < 1e-11);
    }

    #[test]
    fn bloch_wigner_maximum_on_unit_circle() {
        let z = Complex64::from_polar(1.0, PI / 3.0);
        // Im Li2(e^{i pi/3}) summed as sum sin(n pi/3)/n^2 with the log factor 0
        let mut s = 0.0;
        for n in 1..200_000 {
            let nf = n as f64;
            s += (nf * PI / 3.0).sin() / (nf * nf);
        }
        assert!((bloch_wigner_raw(z) - s).abs() < 1e-5);
        assert!((bloch_wigner_raw(z) - 1.014_941_606_409_653_6).abs() < 1e-14);
    }

    #[test]
    fn f_odd_values() {
        let v = f_odd(3, c(1.0, 0.0)).unwrap();
        assert!((v.re - 7.0 / 8.0 * ZETA3).abs() < 1e-15);
        assert_eq!(f_odd(2, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let s = f_odd_series_real(3, 0.7);
        assert!((f_odd(3, c(0.7, 0.0)).unwrap().re - s).abs() < 1e-15);
        assert!(f_odd(1, c(1.0, 0.0)).is_err());
        assert!(f_odd(1, c(0.0, 1.5)).is_err());
        assert!(f_odd(4, c(0.1, 0.0)).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(li2(c(f64::NAN, 0.0)), Err(Error::NonFinite(_))));
        assert!(matches!(li3(c(0.0, f64::INFINITY)), Err(Error::NonFinite(_))));
    }
}
