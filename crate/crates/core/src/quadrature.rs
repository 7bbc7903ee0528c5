//! Numerical integration oracles: tanh-sinh on finite intervals, random-phase
//! trapezoid on the unit circle, and seeded Monte Carlo on the torus.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_tol: 1e-13, rel_tol: 1e-13, max_evals: 400_000 }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evals: usize) -> Result<Self> {
        let t = Tolerance { abs_tol, rel_tol, max_evals };
        t.validate()?;
        Ok(t)
    }

    pub fn abs(abs_tol: f64) -> Self {
        Tolerance { abs_tol, rel_tol: 0.0, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 1e-15) || !(self.rel_tol >= 0.0) || self.max_evals == 0 {
            return Err(Error::domain(
                "Tolerance",
                format!("need abs_tol >= 1e-15, rel_tol >= 0, max_evals > 0; got {self:?}"),
            ));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

const T_MAX: f64 = 4.5;
const MAX_LEVEL: u32 = 8;
const MAX_DEPTH: u32 = 12;

/// Integrate `f` over `[a, b]`.
///
/// Integrable endpoint singularities of log and inverse-square-root type are
/// handled by the double-exponential change of variables; nodes never touch
/// the endpoints.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    run(&|x, _, _| f(x), a, b, tol, true)
}

/// Like [`integrate_1d`], but `f(x, x - a, b - x)` also receives the distances
/// to both endpoints, computed without cancellation. Integrands such as
/// `asin(u)/sqrt(1-u^2)` keep full accuracy when written with `1-u = b - x`.
/// Nodes closer to an endpoint than `x` can resolve are still evaluated, with
/// `x` equal to the endpoint and the true offset passed alongside.
pub fn integrate_1d_with_offsets<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    run(&f, a, b, tol, false)
}

fn run<F>(f: &F, a: f64, b: f64, tol: Tolerance, skip_ends: bool) -> Result<QuadResult>
where
    F: Fn(f64, f64, f64) -> f64,
{
    tol.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite("integrate_1d"));
    }
    if !(a < b) {
        if a == b {
            return Ok(QuadResult { value: 0.0, err_estimate: 0.0, evals: 0, converged: true });
        }
        return Err(Error::domain("integrate_1d", format!("need a < b, got [{a}, {b}]")));
    }
    let mut evals = 0usize;
    let span = Span { a, b, off_a: 0.0, off_b: 0.0, skip_ends };
    let (value, err, converged) = adapt(f, span, tol.target(0.0), &tol, &mut evals, 0)?;
    Ok(QuadResult { value, err_estimate: err, evals, converged })
}

#[derive(Clone, Copy)]
struct Span {
    a: f64,
    b: f64,
    // distance from a to the original left endpoint, b to the original right
    off_a: f64,
    off_b: f64,
    skip_ends: bool,
}

fn adapt<F>(f: &F, s: Span, abs_goal: f64, tol: &Tolerance, evals: &mut usize, depth: u32) -> Result<(f64, f64, bool)>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let (v, e, ok) = tanh_sinh(f, s, abs_goal, tol, evals)?;
    if ok || depth >= MAX_DEPTH || *evals >= tol.max_evals {
        return Ok((v, e, ok));
    }
    let m = 0.5 * (s.a + s.b);
    let half = 0.5 * (s.b - s.a);
    let left = Span { b: m, off_b: s.off_b + half, ..s };
    let right = Span { a: m, off_a: s.off_a + half, ..s };
    let (v1, e1, ok1) = adapt(f, left, 0.5 * abs_goal, tol, evals, depth + 1)?;
    let (v2, e2, ok2) = adapt(f, right, 0.5 * abs_goal, tol, evals, depth + 1)?;
    let v = v1 + v2;
    let e = e1 + e2;
    let ok = (ok1 && ok2) || e <= tol.target(v);
    Ok((v, e, ok))
}

fn eval<F>(f: &F, x: f64, da: f64, db: f64) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let y = f(x, da, db);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NanIntegrand(x))
    }
}

fn tanh_sinh<F>(f: &F, s: Span, abs_goal: f64, tol: &Tolerance, evals: &mut usize) -> Result<(f64, f64, bool)>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let hw = 0.5 * (s.b - s.a);
    let c = s.a + hw;
    let width = 2.0 * hw;
    let mut sum = FRAC_PI_2 * hw * eval(f, c, s.off_a + hw, s.off_b + hw)?;
    let mut abs_sum = sum.abs();
    *evals += 1;

    let add_node = |t: f64, sum: &mut f64, abs_sum: &mut f64, evals: &mut usize| -> Result<()> {
        let sh = FRAC_PI_2 * t.sinh();
        let ch = sh.cosh();
        let w = hw * FRAC_PI_2 * t.cosh() / (ch * ch);
        let d = hw * (-sh).exp() / ch;
        if w == 0.0 || d == 0.0 {
            return Ok(());
        }
        let xr = s.b - d;
        let xl = s.a + d;
        if !s.skip_ends || (xr < s.b && xr > s.a) {
            let y = w * eval(f, xr, s.off_a + (width - d), s.off_b + d)?;
            *sum += y;
            *abs_sum += y.abs();
            *evals += 1;
        }
        if !s.skip_ends || (xl > s.a && xl < s.b) {
            let y = w * eval(f, xl, s.off_a + d, s.off_b + (width - d))?;
            *sum += y;
            *abs_sum += y.abs();
            *evals += 1;
        }
        Ok(())
    };

    let mut k = 1;
    while (k as f64) <= T_MAX {
        add_node(k as f64, &mut sum, &mut abs_sum, evals)?;
        k += 1;
    }
    let mut h = 1.0;
    let mut prev = h * sum;
    let mut err = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            add_node(t, &mut sum, &mut abs_sum, evals)?;
            t += 2.0 * h;
        }
        let cur = h * sum;
        err = (cur - prev).abs();
        let floor = 50.0 * f64::EPSILON * h * abs_sum;
        let goal = abs_goal.max(tol.rel_tol * cur.abs());
        if level >= 3 && (err <= goal || err <= floor) {
            return Ok((cur, err, true));
        }
        prev = cur;
        if *evals >= tol.max_evals {
            break;
        }
    }
    Ok((prev, err, false))
}

/// Equal-weight trapezoid rule for a 1-periodic `f` on the nodes
/// `(j + phase)/n`, `j = 0..n`.
pub fn integrate_periodic<F>(f: F, n_points: usize, phase: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if n_points < 4 {
        return Err(Error::domain("integrate_periodic", format!("need at least 4 nodes, got {n_points}")));
    }
    let n = n_points as f64;
    let mut sum = 0.0;
    for j in 0..n_points {
        sum += f((j as f64 + phase) / n);
    }
    Ok(sum / n)
}

/// A phase in `[0, 1)` derived from `seed`.
pub fn random_phase(seed: u64) -> f64 {
    ChaCha8Rng::seed_from_u64(seed).gen::<f64>()
}

const MC_CHUNK: usize = 1 << 14;
const MC_RETRIES: usize = 64;

#[derive(Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Welford) -> Welford {
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford { n, mean: self.mean + d * o.n / n, m2: self.m2 + o.m2 + d * d * self.n * o.n / n }
    }
}

/// Plain Monte Carlo mean of `f` over `[0,1)^dims`.
///
/// Samples are drawn in fixed-size chunks, each from its own ChaCha8 stream,
/// so the result depends only on `(seed, samples)` and not on thread count.
pub fn mc_torus<F>(f: F, dims: usize, samples: usize, seed: u64) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if dims == 0 {
        return Err(Error::domain("mc_torus", "dims must be at least 1"));
    }
    if samples < 1000 {
        return Err(Error::domain("mc_torus", format!("need at least 1000 samples, got {samples}")));
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<(Welford, usize)> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ci as u64);
            let count = MC_CHUNK.min(samples - ci * MC_CHUNK);
            let mut pt = vec![0.0; dims];
            let mut acc = Welford::default();
            let mut evals = 0usize;
            for _ in 0..count {
                let mut tries = 0;
                loop {
                    for p in pt.iter_mut() {
                        *p = rng.gen::<f64>();
                    }
                    let y = f(&pt);
                    evals += 1;
                    if y.is_finite() {
                        acc.push(y);
                        break;
                    }
                    tries += 1;
                    if tries >= MC_RETRIES {
                        return Err(Error::SampleRetries { func: "mc_torus", retries: tries });
                    }
                }
            }
            Ok((acc, evals))
        })
        .collect::<Result<_>>()?;
    let mut total = Welford::default();
    let mut evals = 0;
    for (w, e) in parts {
        total = total.merge(w);
        evals += e;
    }
    let var = if total.n > 1.0 { total.m2 / (total.n - 1.0) } else { 0.0 };
    Ok(QuadResult { value: total.mean, err_estimate: (var / total.n).sqrt(), evals, converged: true })
}
