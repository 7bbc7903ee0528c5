//! Double q-series for odd dilogarithms in the elliptic nome.
//!
//! Every double sum here has the shape
//! `Σ_{n≥0} Σ_{m≥1} ± q^{e(n,m)} / (((2n+1)² - (2m)²) · D(n,m))` with
//! `|D| >= 1 - q^2` and `e` increasing by at least one in each index. The
//! denominator `(2n+1)² - (2m)²` is odd, so it never vanishes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elliptic::EllipticCtx;
use crate::polylog::{li2_raw, CATALAN};
use crate::trig_integrals::ti_raw;

use num_complex::Complex64;

const TAIL_TARGET: f64 = 1e-17;
const HARD_CAP: usize = 100_000;

/// How far each sum was carried and what was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QSeriesTruncation {
    pub n_max: usize,
    pub m_max: usize,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QSeriesValue {
    pub value: f64,
    pub truncation: QSeriesTruncation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QSeriesKind {
    /// `(Li2(k) - Li2(-k))/8`
    Dilog1,
    /// `(Li2(r) - Li2(-r))/4`
    Dilog2,
    /// `(Li2(ip) - Li2(-ip))/(8i)`
    Dilog3,
    /// Right side of the auxiliary identity that comes from the `dn/sn` row.
    Auxiliary,
}

fn sgn(i: usize) -> f64 {
    if i % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn odd_even(n: usize, m: usize) -> f64 {
    let a = (2 * n + 1) as f64;
    let b = (2 * m) as f64;
    let d = a * a - b * b;
    debug_assert!(d != 0.0);
    d
}

struct Shape {
    /// Exponent of `q` in the single sum.
    single_exp: fn(usize) -> f64,
    single: fn(f64, usize) -> f64,
    double_exp: fn(usize, usize) -> f64,
    double: fn(f64, usize, usize) -> f64,
    offset: fn(&EllipticCtx) -> f64,
}

fn shape(kind: QSeriesKind) -> Shape {
    match kind {
        QSeriesKind::Dilog1 => Shape {
            single_exp: |n| n as f64 + 0.5,
            single: |q, n| {
                let o = (2 * n + 1) as f64;
                q.powf(n as f64 + 0.5) / (o * o * (1.0 + q.powf(o)))
            },
            double_exp: |n, m| (n + m) as f64 + 0.5,
            double: |q, n, m| {
                let o = (2 * n + 1) as f64;
                q.powf((n + m) as f64 + 0.5) / (odd_even(n, m) * (1.0 + q.powi(2 * m as i32)) * (1.0 + q.powf(o)))
            },
            offset: |_| 0.0,
        },
        QSeriesKind::Dilog2 => Shape {
            single_exp: |n| n as f64 + 0.5,
            single: |q, n| {
                let o = (2 * n + 1) as f64;
                q.powf(n as f64 + 0.5) / (o * o * (1.0 + q.powf(o)))
            },
            double_exp: |n, m| (n + m) as f64 + 0.5,
            double: |q, n, m| {
                let o = (2 * n + 1) as f64;
                sgn(m) * q.powf((n + m) as f64 + 0.5)
                    / (odd_even(n, m) * (1.0 + q.powi(2 * m as i32)) * (1.0 + q.powf(o)))
            },
            offset: |_| 0.0,
        },
        QSeriesKind::Dilog3 => Shape {
            single_exp: |n| (2 * n + 1) as f64,
            single: |q, n| {
                let o = (2 * n + 1) as f64;
                sgn(n) * q.powf(o) / (o * o * (1.0 - q.powf(2.0 * o)))
            },
            double_exp: |n, m| (m + 2 * n + 1) as f64,
            double: |q, n, m| {
                let o = (2 * n + 1) as f64;
                sgn(n + m) * q.powi((m + 2 * n + 1) as i32)
                    / (odd_even(n, m) * (1.0 + q.powi(2 * m as i32)) * (1.0 - q.powf(2.0 * o)))
            },
            offset: |c| CATALAN / 4.0 + PI / 16.0 * c.p.ln(),
        },
        QSeriesKind::Auxiliary => Shape {
            single_exp: |n| (2 * n + 1) as f64,
            single: |q, n| {
                let o = (2 * n + 1) as f64;
                sgn(n) * q.powf(o) / (o * o * (1.0 + q.powf(o)))
            },
            double_exp: |n, m| (m + 2 * n + 1) as f64,
            double: |q, n, m| {
                let o = (2 * n + 1) as f64;
                sgn(n + m) * q.powi((m + 2 * n + 1) as i32)
                    / (odd_even(n, m) * (1.0 + q.powi(2 * m as i32)) * (1.0 + q.powf(o)))
            },
            offset: |_| 0.0,
        },
    }
}

/// Right side with fixed truncation `n < n_max`, `1 <= m <= m_max`.
pub fn qseries_fixed(kind: QSeriesKind, ctx: &EllipticCtx, n_max: usize, m_max: usize) -> f64 {
    let sh = shape(kind);
    let q = ctx.q;
    let mut single = 0.0;
    let mut double = 0.0;
    for n in 0..n_max {
        single += (sh.single)(q, n);
        for m in 1..=m_max {
            double += (sh.double)(q, n, m);
        }
    }
    (sh.offset)(ctx) + single + 4.0 * double
}

/// Right side, truncated row by row once the geometric majorants fall
/// below `1e-17`.
pub fn qseries_rhs(kind: QSeriesKind, ctx: &EllipticCtx) -> QSeriesValue {
    let sh = shape(kind);
    let q = ctx.q;
    // |D| >= 1 - q² in every denominator.
    let geo = 1.0 / ((1.0 - q) * (1.0 - q * q));
    let mut single = 0.0;
    let mut double = 0.0;
    let mut tail = 0.0;
    let mut m_max = 0usize;
    let mut n = 0usize;
    loop {
        single += (sh.single)(q, n);
        let mut m = 1usize;
        loop {
            double += (sh.double)(q, n, m);
            let row_tail = q.powf((sh.double_exp)(n, m + 1)) * geo;
            if row_tail < TAIL_TARGET || m >= HARD_CAP {
                tail += 4.0 * row_tail;
                break;
            }
            m += 1;
        }
        m_max = m_max.max(m);
        let rest = q.powf((sh.single_exp)(n + 1)) * geo + 4.0 * q.powf((sh.double_exp)(n + 1, 1)) * geo * geo;
        if rest < TAIL_TARGET || n >= HARD_CAP {
            tail += rest;
            break;
        }
        n += 1;
    }
    QSeriesValue {
        value: (sh.offset)(ctx) + single + 4.0 * double,
        truncation: QSeriesTruncation { n_max: n + 1, m_max, tail_bound: tail },
    }
}

/// The closed-form side of each dilogarithm identity.
pub fn qseries_lhs(kind: QSeriesKind, ctx: &EllipticCtx) -> f64 {
    let odd = |x: f64| li2_raw(Complex64::new(x, 0.0)).re - li2_raw(Complex64::new(-x, 0.0)).re;
    match kind {
        QSeriesKind::Dilog1 => odd(ctx.k) / 8.0,
        QSeriesKind::Dilog2 => odd(ctx.r) / 4.0,
        QSeriesKind::Dilog3 => ti_raw(ctx.p) / 4.0,
        QSeriesKind::Auxiliary => auxiliary_lhs(ctx.q),
    }
}

/// `Σ_{n≥1} q^n/(n(1+q^{2n})) Σ_{j<n} (-1)^j/(2j+1)`.
fn auxiliary_lhs(q: f64) -> f64 {
    let mut inner = 0.0;
    let mut s = 0.0;
    for n in 1..HARD_CAP {
        inner += sgn(n - 1) / (2 * n - 1) as f64;
        let qn = q.powi(n as i32);
        s += qn / (n as f64 * (1.0 + qn * qn)) * inner;
        if qn * q / (1.0 - q) < TAIL_TARGET {
            break;
        }
    }
    s
}

pub fn dilog_qseries_1(ctx: &EllipticCtx) -> f64 {
    qseries_rhs(QSeriesKind::Dilog1, ctx).value
}

pub fn dilog_qseries_2(ctx: &EllipticCtx) -> f64 {
    qseries_rhs(QSeriesKind::Dilog2, ctx).value
}

pub fn dilog_qseries_3(ctx: &EllipticCtx) -> f64 {
    qseries_rhs(QSeriesKind::Dilog3, ctx).value
}

pub fn auxiliary_qseries_residual(ctx: &EllipticCtx) -> f64 {
    auxiliary_lhs(ctx.q) - qseries_rhs(QSeriesKind::Auxiliary, ctx).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::make_ctx;

    const KINDS: [QSeriesKind; 3] = [QSeriesKind::Dilog1, QSeriesKind::Dilog2, QSeriesKind::Dilog3];

    #[test]
    fn dilog_identities() {
        for &(k, tol) in &[(0.2, 1e-11), (0.5, 1e-11), (0.8, 1e-10), (0.9, 1e-10), (0.999, 1e-10)] {
            let c = make_ctx(k).unwrap();
            for kind in KINDS {
                let v = qseries_rhs(kind, &c);
                assert!(v.truncation.tail_bound < 1e-13);
                let want = qseries_lhs(kind, &c);
                assert!((v.value - want).abs() < tol, "k={k} {kind:?}: {} vs {want}", v.value);
            }
        }
    }

    #[test]
    fn small_q_limit() {
        let c = make_ctx(1e-6).unwrap();
        assert!(dilog_qseries_1(&c).abs() < 1e-6);
        assert!(dilog_qseries_2(&c).abs() < 1e-6);
        assert!(auxiliary_qseries_residual(&c).abs() < 1e-15);
    }

    #[test]
    fn auxiliary() {
        for &(k, tol) in &[(0.5, 1e-11), (0.85, 1e-10)] {
            let c = make_ctx(k).unwrap();
            assert!(auxiliary_qseries_residual(&c).abs() < tol);
        }
    }

    #[test]
    fn doubling_truncation() {
        for &k in &[0.3, 0.9] {
            let c = make_ctx(k).unwrap();
            for kind in [QSeriesKind::Dilog1, QSeriesKind::Dilog2, QSeriesKind::Dilog3, QSeriesKind::Auxiliary] {
                let t = qseries_rhs(kind, &c).truncation;
                let a = qseries_fixed(kind, &c, t.n_max, t.m_max);
                let b = qseries_fixed(kind, &c, 2 * t.n_max, 2 * t.m_max);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn denominators_never_vanish() {
        for n in 0..200 {
            for m in 1..200 {
                assert!(odd_even(n, m) != 0.0);
            }
        }
    }

    #[test]
    fn nome_duality() {
        for &k in &[0.3, 0.6] {
            let c = make_ctx(k).unwrap();
            let d = make_ctx(c.r * c.r).unwrap();
            assert!((d.q - c.q * c.q).abs() < 1e-12);
        }
    }
}
