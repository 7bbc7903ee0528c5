//! Mahler measures of Laurent polynomials on the unit torus.
//!
//! `jensen_reduce` resolves one variable exactly by roots and integrates the
//! remaining (at most two) with a random-phase periodic trapezoid rule;
//! `monte_carlo` samples the whole torus.

mod closed;
mod poly;
mod roots;

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{mc_torus, QuadResult};

pub use closed::{
    arctan_form_expr, arctan_mahler, boyd_family, cassaigne_maillot, cn_sn_mahler_form, fractional_mahler_sixth,
};
pub use poly::{parse_poly, parse_poly_with, LaurentPoly};
pub use roots::{mahler_1var_roots, MAX_DEGREE};

const CLAMP: f64 = -300.0;
const MAX_OUTER: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MahlerMethod {
    Auto,
    JensenReduce,
    MonteCarlo,
}

impl FromStr for MahlerMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MahlerMethod::Auto),
            "jensen" | "jensen_reduce" => Ok(MahlerMethod::JensenReduce),
            "mc" | "monte_carlo" => Ok(MahlerMethod::MonteCarlo),
            _ => Err(Error::Usage(format!("unknown method {s:?}; expected auto, jensen or mc"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MahlerConfig {
    pub method: MahlerMethod,
    /// Trapezoid nodes per outer dimension.
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for MahlerConfig {
    fn default() -> Self {
        MahlerConfig { method: MahlerMethod::Auto, grid: 1024, samples: 1_000_000, seed: 20_060_403, tolerance: 1e-5 }
    }
}

impl MahlerConfig {
    pub fn jensen(grid: usize) -> Self {
        MahlerConfig { method: MahlerMethod::JensenReduce, grid, ..Default::default() }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        MahlerConfig { method: MahlerMethod::MonteCarlo, samples, seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid < 64 || !self.grid.is_power_of_two() {
            return Err(Error::domain("MahlerConfig", format!("grid must be a power of two >= 64, got {}", self.grid)));
        }
        if self.samples < 10_000 {
            return Err(Error::domain("MahlerConfig", format!("samples must be >= 10000, got {}", self.samples)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("MahlerConfig", "tolerance must be positive"));
        }
        Ok(())
    }
}

/// Everything `mahler_nd` learned along the way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MahlerReport {
    pub result: QuadResult,
    pub method: MahlerMethod,
    /// Variable resolved by roots (jensen only).
    pub inner: Option<String>,
    /// Variables actually integrated over.
    pub outer: Vec<String>,
    /// Nodes where `log|P|` fell below `-300` and was clamped.
    pub clamps: usize,
}

pub fn mahler_nd(p: &LaurentPoly, cfg: &MahlerConfig) -> Result<QuadResult> {
    mahler_nd_report(p, cfg).map(|r| r.result)
}

pub fn mahler_nd_report(p: &LaurentPoly, cfg: &MahlerConfig) -> Result<MahlerReport> {
    cfg.validate()?;
    let active: Vec<usize> = (0..p.vars().len())
        .filter(|&i| {
            let (lo, hi) = p.degree_range(i);
            hi > lo
        })
        .collect();
    if active.is_empty() {
        // A single monomial.
        let c = p.terms().next().map(|t| t.1).unwrap();
        return Ok(MahlerReport {
            result: QuadResult { value: c.norm().ln(), err_estimate: 0.0, evals: 1, converged: true },
            method: cfg.method,
            inner: None,
            outer: vec![],
            clamps: 0,
        });
    }
    let inner = *active
        .iter()
        .min_by_key(|&&i| {
            let (lo, hi) = p.degree_range(i);
            hi - lo
        })
        .unwrap();
    let (lo, hi) = p.degree_range(inner);
    let jensen_ok = active.len() <= MAX_OUTER + 1 && (hi - lo) as usize <= MAX_DEGREE;
    let method = match cfg.method {
        MahlerMethod::Auto if jensen_ok => MahlerMethod::JensenReduce,
        MahlerMethod::Auto => MahlerMethod::MonteCarlo,
        MahlerMethod::JensenReduce if !jensen_ok => {
            return Err(Error::domain(
                "mahler_nd",
                format!("jensen_reduce needs at most 3 variables and inner degree <= {MAX_DEGREE}"),
            ))
        }
        m => m,
    };
    let names = |ix: &[usize]| ix.iter().map(|&i| p.vars()[i].clone()).collect::<Vec<_>>();
    if method == MahlerMethod::MonteCarlo {
        let result = monte_carlo(p, &active, cfg)?;
        return Ok(MahlerReport { result, method, inner: None, outer: names(&active), clamps: 0 });
    }
    let outer: Vec<usize> = active.iter().copied().filter(|&i| i != inner).collect();
    if let [o] = outer[..] {
        if let Some((m_content, rest)) = split_content(p, inner, o)? {
            let mut r = mahler_nd_report(&rest, cfg)?;
            r.result.value += m_content;
            return Ok(r);
        }
    }
    let (result, clamps) = jensen_reduce(p, inner, &outer, cfg);
    Ok(MahlerReport { result, method, inner: Some(p.vars()[inner].clone()), outer: names(&outer), clamps })
}

fn monte_carlo(p: &LaurentPoly, active: &[usize], cfg: &MahlerConfig) -> Result<QuadResult> {
    let terms: Vec<(Vec<f64>, C)> =
        p.terms().map(|(e, c)| (active.iter().map(|&i| e[i] as f64).collect(), c)).collect();
    let mut r = mc_torus(
        |th| {
            let mut s = C::new(0.0, 0.0);
            for (e, c) in &terms {
                let phase: f64 = e.iter().zip(th).map(|(k, t)| k * t).sum();
                s += c * C::from_polar(1.0, 2.0 * PI * phase.rem_euclid(1.0));
            }
            s.norm().ln()
        },
        active.len(),
        cfg.samples,
        cfg.seed,
    )?;
    r.converged = r.err_estimate <= cfg.tolerance;
    Ok(r)
}

fn eval_dense(c: &[C], y: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, a| acc * y + a)
}

/// Divides `c` by `y - r`, dropping the remainder.
fn deflate(c: &[C], r: C) -> Vec<C> {
    let d = c.len() - 1;
    let mut q = vec![C::new(0.0, 0.0); d];
    let mut carry = C::new(0.0, 0.0);
    for k in (1..=d).rev() {
        carry = c[k] + carry * r;
        q[k - 1] = carry;
    }
    q
}

/// Factors of `P` that depend on the outer variable alone and vanish on the
/// circle turn the outer integrand into `log|y - ρ|`, on which the periodic
/// trapezoid converges only like `1/n`. Such a factor is split off exactly:
/// returns `m(content)` and `P / content`, or `None` if there is nothing to do.
fn split_content(p: &LaurentPoly, inner: usize, outer: usize) -> Result<Option<(f64, LaurentPoly)>> {
    let (ilo, ihi) = p.degree_range(inner);
    let (olo, ohi) = p.degree_range(outer);
    let zero = C::new(0.0, 0.0);
    // Row k holds the coefficient of x^(ilo+k) as a dense polynomial in y.
    let mut rows = vec![vec![zero; (ohi - olo + 1) as usize]; (ihi - ilo + 1) as usize];
    for (e, c) in p.terms() {
        rows[(e[inner] - ilo) as usize][(e[outer] - olo) as usize] += c;
    }
    let trim = |r: &[C]| -> Option<(usize, usize)> {
        let a = r.iter().position(|z| *z != zero)?;
        let b = r.iter().rposition(|z| *z != zero)?;
        Some((a, b))
    };
    let mut found = false;
    let mut m_content = 0.0;
    loop {
        let spans: Vec<(usize, usize, usize)> =
            rows.iter().enumerate().filter_map(|(i, r)| trim(r).map(|(a, b)| (i, a, b))).collect();
        let lo = spans.iter().map(|s| s.1).min().unwrap();
        if lo > 0 {
            // A common power of y is a monomial factor with measure zero.
            for r in rows.iter_mut() {
                r.drain(..lo);
            }
            continue;
        }
        let &(i, a, b) = spans.iter().min_by_key(|s| s.2 - s.1).unwrap();
        if b == a || b - a > MAX_DEGREE {
            break;
        }
        let cand = roots::companion_roots(&rows[i][a..=b]);
        let common = cand.into_iter().find(|&r| {
            (r.norm() - 1.0).abs() < 1e-3
                && rows.iter().all(|row| {
                    let scale: f64 = row.iter().map(|z| z.norm()).sum::<f64>() * r.norm().max(1.0).powi(row.len() as i32);
                    eval_dense(row, r).norm() <= 1e-9 * scale
                })
        });
        let Some(r) = common else { break };
        for row in rows.iter_mut() {
            *row = deflate(row, r);
        }
        m_content += r.norm().ln().max(0.0);
        found = true;
    }
    if !found {
        return Ok(None);
    }
    let big = rows.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let mut terms = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c.norm() > 1e-14 * big {
                terms.push((vec![ilo + k as i32, j as i32], c));
            }
        }
    }
    // Every other variable is inactive and can be dropped.
    let vars = vec![p.vars()[inner].clone(), p.vars()[outer].clone()];
    let rest = LaurentPoly::new(vars, terms)?;
    Ok(Some((m_content, rest)))
}

/// Table of `exp(2πi e t_j)` for the trapezoid nodes `t_j = (j + phase)/n`.
struct Powers {
    lo: i32,
    width: usize,
    table: Vec<C>,
}

impl Powers {
    fn new(lo: i32, hi: i32, n: usize, phase: f64) -> Self {
        let width = (hi - lo + 1) as usize;
        let mut table = Vec::with_capacity(n * width);
        for j in 0..n {
            let t = (j as f64 + phase) / n as f64;
            for e in lo..=hi {
                table.push(C::from_polar(1.0, 2.0 * PI * (e as f64 * t).rem_euclid(1.0)));
            }
        }
        Powers { lo, width, table }
    }

    fn get(&self, j: usize, e: i32) -> C {
        self.table[j * self.width + (e - self.lo) as usize]
    }
}

struct Term {
    deg: usize,
    outer: [i32; MAX_OUTER],
    coef: C,
}

fn jensen_reduce(p: &LaurentPoly, inner: usize, outer: &[usize], cfg: &MahlerConfig) -> (QuadResult, usize) {
    let (lo, hi) = p.degree_range(inner);
    let deg = (hi - lo) as usize;
    let terms: Vec<Term> = p
        .terms()
        .map(|(e, coef)| {
            let mut o = [0; MAX_OUTER];
            for (k, &i) in outer.iter().enumerate() {
                o[k] = e[i];
            }
            Term { deg: (e[inner] - lo) as usize, outer: o, coef }
        })
        .collect();
    let coeffs_at = |pw: &[Powers], idx: [usize; MAX_OUTER], buf: &mut Vec<C>| {
        buf.clear();
        buf.resize(deg + 1, C::new(0.0, 0.0));
        for t in &terms {
            let mut v = t.coef;
            for (k, table) in pw.iter().enumerate() {
                v *= table.get(idx[k], t.outer[k]);
            }
            buf[t.deg] += v;
        }
    };
    if outer.is_empty() {
        let mut buf = Vec::new();
        coeffs_at(&[], [0; MAX_OUTER], &mut buf);
        let v = roots::jensen(&buf).unwrap_or(f64::NEG_INFINITY).max(CLAMP);
        let clamps = usize::from(v == CLAMP);
        return (QuadResult { value: v, err_estimate: 0.0, evals: 1, converged: clamps == 0 }, clamps);
    }

    let n = cfg.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pw: Vec<Powers> = outer
        .iter()
        .map(|&i| {
            let (a, b) = p.degree_range(i);
            Powers::new(a, b, n, rng.gen::<f64>())
        })
        .collect();
    let cols = if outer.len() == 2 { n } else { 1 };

    // Each row is summed sequentially and rows are combined in index order,
    // so the result does not depend on the thread count.
    let rows: Vec<(f64, f64, usize)> = (0..n)
        .into_par_iter()
        .map_init(Vec::new, |buf, i| {
            let mut all = 0.0;
            let mut even = 0.0;
            let mut clamps = 0;
            for j in 0..cols {
                coeffs_at(&pw, [i, j], buf);
                let mut v = roots::jensen(buf).unwrap_or(f64::NEG_INFINITY);
                if !(v >= CLAMP) {
                    v = CLAMP;
                    clamps += 1;
                }
                all += v;
                if i % 2 == 0 && j % 2 == 0 {
                    even += v;
                }
            }
            (all, even, clamps)
        })
        .collect();
    let mut all = 0.0;
    let mut even = 0.0;
    let mut clamps = 0;
    for (a, e, c) in rows {
        all += a;
        even += e;
        clamps += c;
    }
    let nodes = n * cols;
    let full = all / nodes as f64;
    let half = even / (nodes / if cols == 1 { 2 } else { 4 }) as f64;
    let err = (full - half).abs();
    let converged = err <= cfg.tolerance && clamps * 1000 < nodes;
    (QuadResult { value: full, err_estimate: err, evals: nodes, converged }, clamps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polylog::ZETA3;
    use std::f64::consts::LN_2;

    #[test]
    fn smyth() {
        let p = parse_poly("1+x+y+z").unwrap();
        let r = mahler_nd_report(&p, &MahlerConfig::jensen(1024)).unwrap();
        let want = 7.0 / (2.0 * PI * PI) * ZETA3;
        assert!((r.result.value - want).abs() < 1e-5, "{}", r.result.value - want);
        assert!(r.result.err_estimate >= (r.result.value - want).abs());
        assert_eq!(r.inner.as_deref(), Some("x"));
        assert!(r.result.converged);
    }

    #[test]
    fn dummy_variable() {
        let p = parse_poly("1+x").unwrap().embed(&["x", "y"]).unwrap();
        let r = mahler_nd_report(&p, &MahlerConfig::jensen(64)).unwrap();
        assert!(r.result.value.abs() < 1e-15);
        assert!(r.outer.is_empty());
        let m = parse_poly("-3*x^2*y^-1").unwrap();
        assert!((mahler_nd(&m, &MahlerConfig::default()).unwrap().value - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn deterministic() {
        let p = parse_poly("1+x+(1-x)*(y+z)").unwrap();
        let cfg = MahlerConfig::jensen(128);
        assert_eq!(mahler_nd(&p, &cfg).unwrap(), mahler_nd(&p, &cfg).unwrap());
        let mc = MahlerConfig::monte_carlo(20_000, 7);
        assert_eq!(mahler_nd(&p, &mc).unwrap(), mahler_nd(&p, &mc).unwrap());
    }

    #[test]
    fn config_checks() {
        let p = parse_poly("1+x").unwrap();
        for cfg in [MahlerConfig::jensen(100), MahlerConfig::jensen(32), MahlerConfig::monte_carlo(10, 1)] {
            assert!(mahler_nd(&p, &cfg).is_err());
        }
        let four = parse_poly("1+x+y+z+x1").unwrap();
        assert!(mahler_nd(&four, &MahlerConfig::jensen(64)).is_err());
        let r = mahler_nd_report(&four, &MahlerConfig { samples: 10_000, ..Default::default() }).unwrap();
        assert_eq!(r.method, MahlerMethod::MonteCarlo);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let p = parse_poly("x+(1+x)^2+(1+x+y)^2*z").unwrap();
        let cfg = MahlerConfig { tolerance: 1e-12, ..MahlerConfig::jensen(64) };
        let r = mahler_nd(&p, &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.value.is_finite() && r.err_estimate > 1e-12);
    }

    #[test]
    fn outer_content_is_split_exactly() {
        let cfg = MahlerConfig::jensen(64);
        let base = mahler_nd(&parse_poly("1+x+y").unwrap(), &MahlerConfig::jensen(1 << 12)).unwrap().value;
        // Without the split the trapezoid error on log|1-y| is of order 1/n.
        assert!(mahler_nd(&parse_poly("(1+x)*(1-y)").unwrap(), &cfg).unwrap().value.abs() < 1e-12);
        let v = mahler_nd(&parse_poly("(1+x)*(y-3)^2").unwrap(), &cfg).unwrap().value;
        assert!((v - 2.0 * 3f64.ln()).abs() < 1e-12);
        let big = MahlerConfig::jensen(1 << 12);
        // Content off the circle is smooth and left to the grid.
        for (e, shift, tol) in [("(1+x+y)*(1-y)^2", 0.0, 1e-12), ("(1+x+y)*(1+y*y)", 0.0, 1e-12), ("(1+x+y)*(2-y)", LN_2, 1e-7)] {
            let v = mahler_nd(&parse_poly(e).unwrap(), &big).unwrap().value;
            assert!((v - base - shift).abs() < tol, "{e}: {v}");
        }
    }
}
