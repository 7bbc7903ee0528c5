//! Catalog of identities, each checked by evaluating both sides through
//! different code paths.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::binomial::{central_binom_sum, h1_closed, h2_closed, h3_closed, h4_multipolylog, h_series, hyper_4f3_value};
use crate::elliptic::{
    am_integral_closed, am_integral_quad, cn_sn_x_integral, complete_k, make_ctx, nome_invert_sin, nome_invert_tanh,
    IntegrandKind,
};
use crate::error::{Error, Result};
use crate::mahler::{
    arctan_mahler, boyd_family, cassaigne_maillot, cn_sn_mahler_form, fractional_mahler_sixth,
    mahler_nd, parse_poly_with, MahlerConfig, MahlerMethod,
};
use crate::multipolylog::{f21_closed, f_jk, lewin_integral};
use crate::polylog::{li3_re, CATALAN, ZETA3};
use crate::qseries::{qseries_lhs, qseries_rhs, QSeriesKind};
use crate::quadrature::{integrate_1d, Tolerance};
use crate::trig_integrals::{asin_int, ti, ti_functional_residual};
use crate::tsst::{
    s_closed, s_quad, s_v1_closed, s_vv_closed, t_closed, t_functional_residual, t_quad, t_v_invv_closed, t_vv_closed,
    ts_closed, ts_quad, ts_v1_closed,
};

pub const TAGS: [&str; 8] = ["constants", "polylog", "trig", "tsst", "binomial", "elliptic", "qseries", "mahler"];

/// Grid for the tight Mahler checks and for everything else.
const GRID_TIGHT: usize = 2048;
const GRID: usize = 1024;
const MC_SAMPLES: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostClass {
    Fast,
    Slow,
}

/// One evaluated side of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Side {
    Value(f64),
    Divergent(DivergentTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivergentTag {
    Divergent,
}

impl Side {
    pub const DIVERGENT: Side = Side::Divergent(DivergentTag::Divergent);
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Value(v) => write!(f, "{v:.15e}"),
            Side::Divergent(_) => f.write_str("Divergent"),
        }
    }
}

/// Knobs shared by every identity in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: MahlerConfig::default().seed, tol: None, samples: None }
    }
}

type Thunk = Box<dyn Fn(&RunOptions) -> Result<Side> + Send + Sync>;

pub struct IdentityRecord {
    pub id: &'static str,
    /// The identity, written out.
    pub citation: &'static str,
    pub tags: &'static [&'static str],
    pub tol: f64,
    pub cost: CostClass,
    lhs: Thunk,
    rhs: Thunk,
}

impl std::fmt::Debug for IdentityRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityRecord")
            .field("id", &self.id)
            .field("citation", &self.citation)
            .field("tags", &self.tags)
            .field("tol", &self.tol)
            .field("cost", &self.cost)
            .finish_non_exhaustive()
    }
}

impl IdentityRecord {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(&tag)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub citation: String,
    #[serde(rename = "lhs")]
    pub lhs_value: Side,
    #[serde(rename = "rhs")]
    pub rhs_value: Side,
    /// `None` when exactly one side diverges.
    pub abs_diff: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    #[serde(rename = "elapsed_s")]
    pub elapsed: f64,
}

fn val<F>(f: F) -> Thunk
where
    F: Fn(&RunOptions) -> Result<f64> + Send + Sync + 'static,
{
    Box::new(move |o| f(o).map(Side::Value))
}

fn konst(v: f64) -> Thunk {
    Box::new(move |_| Ok(Side::Value(v)))
}

fn jensen_cfg(o: &RunOptions, grid: usize) -> MahlerConfig {
    MahlerConfig { method: MahlerMethod::JensenReduce, grid, seed: o.seed, ..Default::default() }
}

/// `m(expr)` by jensen_reduce.
fn mj(expr: &'static str, params: &'static [(&'static str, f64)], grid: usize) -> Thunk {
    val(move |o| Ok(mahler_nd(&parse_poly_with(expr, params)?, &jensen_cfg(o, grid))?.value))
}

/// `scale * m(expr) + shift` by jensen_reduce, for identities with extra terms on the Mahler side.
fn mj_affine(expr: &'static str, params: &'static [(&'static str, f64)], scale: f64, rest: fn(&RunOptions) -> Result<f64>) -> Thunk {
    val(move |o| Ok(scale * mahler_nd(&parse_poly_with(expr, params)?, &jensen_cfg(o, GRID))?.value + rest(o)?))
}

fn mc(expr: &'static str) -> Thunk {
    val(move |o| {
        let cfg = MahlerConfig::monte_carlo(o.samples.unwrap_or(MC_SAMPLES), o.seed);
        Ok(mahler_nd(&parse_poly_with(expr, &[])?, &cfg)?.value)
    })
}

fn condon_rhs(v: f64) -> Result<f64> {
    Ok(2.0 / PI * ti(v)? - 4.0 / (PI * PI) * ts_v1_closed(v)?)
}

fn t_inv_rhs(v: f64) -> Result<f64> {
    Ok(4.0 / PI * ti(v)? - 8.0 / (PI * PI) * t_v_invv_closed(v)?)
}

fn log_sin_integral(v: f64) -> Result<f64> {
    Ok(integrate_1d(|t| (1.0 + v * t.sin()).ln(), 0.0, PI / 2.0, Tolerance::default())?.value)
}

fn f3(v: f64) -> f64 {
    0.5 * (li3_re(v) - li3_re(-v))
}

fn am_row(kind: IntegrandKind, k: f64) -> (Thunk, Thunk) {
    let lhs: Thunk = Box::new(move |_| match am_integral_closed(kind, &make_ctx(k)?) {
        Ok(v) => Ok(Side::Value(v)),
        Err(Error::Divergent) => Ok(Side::DIVERGENT),
        Err(e) => Err(e),
    });
    let rhs: Thunk = Box::new(move |_| match am_integral_quad(kind, &make_ctx(k)?) {
        Ok(r) => Ok(Side::Value(r.value)),
        Err(Error::Divergent) => Ok(Side::DIVERGENT),
        Err(e) => Err(e),
    });
    (lhs, rhs)
}

fn qseries_row(kind: QSeriesKind, k: f64) -> (Thunk, Thunk) {
    (val(move |_| Ok(qseries_lhs(kind, &make_ctx(k)?))), val(move |_| Ok(qseries_rhs(kind, &make_ctx(k)?).value)))
}

fn build() -> Vec<IdentityRecord> {
    let z3 = ZETA3;
    let g = CATALAN;
    let pi2 = PI * PI;
    let mut out = Vec::new();
    let mut add = |id, citation, tags, tol, cost, lhs, rhs| {
        out.push(IdentityRecord { id, citation, tags, tol, cost, lhs, rhs });
    };
    use CostClass::{Fast, Slow};

    // Constants, binomial sums.
    add("h3-at-2", "h_3(2) = (14/5) ζ(3)", &["constants", "binomial"], 1e-12, Fast, val(|_| h3_closed(2.0)), konst(2.8 * z3));
    add(
        "hyper-4f3",
        "4F3(1,1,1/2,1/2; 3/2,3/2,3/2; -4) = (7/10) ζ(3)",
        &["constants", "binomial"],
        1e-12,
        Fast,
        val(|_| Ok(hyper_4f3_value())),
        konst(0.7 * z3),
    );
    add(
        "h1-series",
        "h_1(0.9): closed form = binomial series",
        &["binomial"],
        1e-11,
        Fast,
        val(|_| h1_closed(0.9)),
        val(|_| h_series(1, 0.9, 400)),
    );
    add(
        "h2-series",
        "h_2(-0.6): closed form = binomial series",
        &["binomial"],
        1e-11,
        Fast,
        val(|_| h2_closed(-0.6)),
        val(|_| h_series(2, -0.6, 400)),
    );
    add(
        "h3-series",
        "h_3(0.8): closed form = binomial series",
        &["binomial"],
        1e-11,
        Fast,
        val(|_| h3_closed(0.8)),
        val(|_| h_series(3, 0.8, 400)),
    );
    add(
        "h4-series",
        "h_4(1/2): multiple polylogarithm form = binomial series",
        &["binomial", "polylog"],
        1e-10,
        Fast,
        val(|_| h4_multipolylog(0.5)),
        val(|_| h_series(4, 0.5, 400)),
    );
    add(
        "central-binomial",
        "4 S(1/2,1/2) = Σ 1/(n³ C(2n,n))",
        &["binomial", "tsst"],
        1e-12,
        Fast,
        val(|_| Ok(4.0 * s_vv_closed(0.5)?)),
        val(|_| Ok(central_binom_sum())),
    );

    // Arctangent and arcsine integrals, polylogarithms.
    add("ti-catalan", "Ti(1) = G", &["trig", "constants"], 1e-14, Fast, val(|_| ti(1.0)), konst(g));
    add(
        "ti-inversion",
        "Ti(w) - Ti(1/w) = (π/2) log w at w = 3",
        &["trig"],
        1e-13,
        Fast,
        val(|_| ti_functional_residual(3.0)),
        konst(0.0),
    );
    add(
        "asin-int-quad",
        "∫₀^0.6 asin(u)/u du: series = quadrature",
        &["trig"],
        1e-13,
        Fast,
        val(|_| asin_int(0.6)),
        val(|_| Ok(integrate_1d(|u| u.asin() / u, 0.0, 0.6, Tolerance::default())?.value)),
    );
    add(
        "lewin-quad",
        "∫₀^x log(1-z) log(1-cz) dz/z at (0.6, 1.1): Lewin's form = quadrature",
        &["polylog"],
        1e-10,
        Fast,
        val(|_| Ok(lewin_integral(0.6, 1.1)?.re)),
        val(|_| {
            let f = |z: f64| (1.0 - z).ln() * (1.0 - 1.1 * z).ln() / z;
            Ok(integrate_1d(f, 0.0, 0.6, Tolerance::default())?.value)
        }),
    );
    add(
        "f21-trilog",
        "F_{2,1}(1,x) at x = 0.6: trilogarithm form = nested series",
        &["polylog"],
        1e-12,
        Fast,
        val(|_| Ok(f21_closed(C::new(0.6, 0.0))?.re)),
        val(|_| Ok(f_jk(2, 1, C::new(1.0, 0.0), C::new(0.6, 0.0))?.re)),
    );

    // Double integrals.
    add(
        "ts-2-1",
        "TS(2,1) = (π/2) Ti(2) - (7/5) ζ(3)",
        &["tsst", "constants"],
        1e-11,
        Fast,
        val(|_| ts_v1_closed(2.0)),
        val(move |_| Ok(PI / 2.0 * ti(2.0)? - 1.4 * z3)),
    );
    add("ts-v1-quad", "TS(0.7,1): closed form = quadrature", &["tsst"], 1e-9, Fast, val(|_| ts_v1_closed(0.7)), val(|_| Ok(ts_quad(0.7, 1.0)?.value)));
    add(
        "ts-reduction",
        "TS(0.8,1/2): multiple polylogarithm form = quadrature",
        &["tsst", "polylog"],
        1e-9,
        Fast,
        val(|_| ts_closed(0.8, 0.5)),
        val(|_| Ok(ts_quad(0.8, 0.5)?.value)),
    );
    add("s-v1-quad", "S(0.6,1): closed form = quadrature", &["tsst"], 1e-9, Fast, val(|_| s_v1_closed(0.6)), val(|_| Ok(s_quad(0.6, 1.0)?.value)));
    add("s-vv-quad", "S(0.45,0.45): closed form = quadrature", &["tsst"], 1e-9, Fast, val(|_| s_vv_closed(0.45)), val(|_| Ok(s_quad(0.45, 0.45)?.value)));
    add("s-closed-quad", "S(0.3,0.8): closed form = quadrature", &["tsst"], 1e-9, Fast, val(|_| s_closed(0.3, 0.8)), val(|_| Ok(s_quad(0.3, 0.8)?.value)));
    add("t-closed-quad", "T(1.5,0.4): closed form = quadrature", &["tsst"], 1e-9, Fast, val(|_| t_closed(1.5, 0.4)), val(|_| Ok(t_quad(1.5, 0.4)?.value)));
    add(
        "t-vinvv-quad",
        "T(0.6,1/0.6): closed form = quadrature",
        &["tsst"],
        1e-9,
        Fast,
        val(|_| t_v_invv_closed(0.6)),
        val(|_| Ok(t_quad(0.6, 1.0 / 0.6)?.value)),
    );
    add(
        "t-vv-quad",
        "T(1,1): closed form = quadrature",
        &["tsst"],
        1e-9,
        Fast,
        val(|_| t_vv_closed(1.0)),
        val(|_| Ok(t_quad(1.0, 1.0)?.value)),
    );
    add(
        "t11-catalan",
        "T(1,1) = (π/2) G - (7/8) ζ(3)",
        &["tsst", "constants"],
        1e-10,
        Fast,
        val(|_| Ok(t_quad(1.0, 1.0)?.value)),
        konst(PI / 2.0 * g - 0.875 * z3),
    );
    add(
        "t-functional",
        "eight-term functional equation of T at (0.7, 1.3)",
        &["tsst"],
        1e-9,
        Fast,
        val(|_| t_functional_residual(0.7, 1.3)),
        konst(0.0),
    );

    // Elliptic integrals of am(u) against the Jacobi functions.
    for (id, kind, cit) in [
        ("am-table-sn", IntegrandKind::Sn, "∫₀^K am(u) sn(u) du at k = 0.6"),
        ("am-table-cn", IntegrandKind::Cn, "∫₀^K am(u) cn(u) du at k = 0.6"),
        ("am-table-dn", IntegrandKind::Dn, "∫₀^K am(u) dn(u) du = π²/8"),
        ("am-table-1sn", IntegrandKind::InvSn, "∫₀^K am(u)/sn(u) du at k = 0.6"),
        ("am-table-1dn", IntegrandKind::InvDn, "∫₀^K am(u)/dn(u) du at k = 0.6"),
        ("am-table-sndn", IntegrandKind::SnDn, "∫₀^K am(u) sn(u)/dn(u) du at k = 0.6"),
        ("am-table-cndn", IntegrandKind::CnDn, "∫₀^K am(u) cn(u)/dn(u) du at k = 0.6"),
        ("am-table-dnsn", IntegrandKind::DnSn, "∫₀^K am(u) dn(u)/sn(u) du = 2G"),
        ("am-table-cnsn", IntegrandKind::CnSn, "∫₀^K am(u) cn(u)/sn(u) du at k = 0.6"),
        ("am-table-1cn", IntegrandKind::InvCn, "∫₀^K am(u)/cn(u) du = ∞"),
        ("am-table-sncn", IntegrandKind::SnCn, "∫₀^K am(u) sn(u)/cn(u) du = ∞"),
        ("am-table-dncn", IntegrandKind::DnCn, "∫₀^K am(u) dn(u)/cn(u) du = ∞"),
    ] {
        let (l, r) = am_row(kind, 0.6);
        add(id, cit, &["elliptic"], 1e-8, Fast, l, r);
    }
    add(
        "nome-roundtrip",
        "k recovered from q(k) by the sine and tanh products, k = 0.7",
        &["elliptic"],
        1e-12,
        Fast,
        val(|_| {
            let q = make_ctx(0.7)?.q;
            Ok(0.5 * (nome_invert_sin(q)? + nome_invert_tanh(q)?))
        }),
        konst(0.7),
    );
    add(
        "nome-duality",
        "q(r²) = q(k)², r = k/(1+k'), k = 0.6",
        &["elliptic"],
        1e-12,
        Fast,
        val(|_| {
            let c = make_ctx(0.6)?;
            Ok(make_ctx(c.r * c.r)?.q)
        }),
        val(|_| Ok(make_ctx(0.6)?.q.powi(2))),
    );
    add(
        "boyd-k08",
        "m(4/k + x + 1/x + y + 1/y) = -log(k/(1+k')) + (2/π) ∫₀¹ asin(x)/(x√(1-k²x²)) dx at k = 0.8",
        &["elliptic", "mahler"],
        1e-9,
        Fast,
        val(|o| Ok(boyd_family(0.8, &jensen_cfg(o, GRID))?.value)),
        val(|_| {
            let c = make_ctx(0.8)?;
            Ok(-(0.8 / (1.0 + c.k_prime)).ln() + 2.0 / PI * cn_sn_x_integral(&c)?.value)
        }),
    );
    add(
        "cnsn-mahler",
        "∫₀^K am(u) cn(u)/sn(u) du = (π/2) log r + (π/2) m(4/k + x + 1/x + y + 1/y) at k = 0.6",
        &["elliptic", "mahler"],
        1e-9,
        Fast,
        val(|o| cn_sn_mahler_form(&make_ctx(0.6)?, &jensen_cfg(o, GRID))),
        val(|_| Ok(am_integral_quad(IntegrandKind::CnSn, &make_ctx(0.6)?)?.value)),
    );
    add(
        "k-integral-mahler",
        "m(8 + (z+1/z)(x+1/x+y+1/y)) = 4G/π + (4/π²) ∫₀¹ asin(x) K(x)/x dx",
        &["elliptic", "mahler"],
        1e-5,
        Fast,
        mj("8+(z+z^-1)*(x+x^-1+y+y^-1)", &[], GRID),
        val(|_| {
            let k = integrate_1d(|x| x.asin() / x * complete_k(x).unwrap_or(f64::NAN), 0.0, 1.0, Tolerance::abs(1e-12))?;
            Ok(4.0 / PI * CATALAN + 4.0 / (PI * PI) * k.value)
        }),
    );

    // q-series in the nome.
    for (id, kind, cit) in [
        ("qseries-1", QSeriesKind::Dilog1, "(Li2(k) - Li2(-k))/8 as a double q-series at k = 0.5"),
        ("qseries-2", QSeriesKind::Dilog2, "(Li2(r) - Li2(-r))/4 as a double q-series at k = 0.5"),
        ("qseries-3", QSeriesKind::Dilog3, "(Li2(ip) - Li2(-ip))/(8i) as a double q-series at k = 0.5"),
        ("qseries-aux", QSeriesKind::Auxiliary, "auxiliary q-series identity from the dn/sn row at k = 0.5"),
    ] {
        let (l, r) = qseries_row(kind, 0.5);
        add(id, cit, &["qseries"], 1e-10, Fast, l, r);
    }

    // Mahler measures.
    add("smyth-zeta3", "m(1+x+y+z) = 7ζ(3)/(2π²)", &["mahler"], 1e-5, Fast, mj("1+x+y+z", &[], GRID_TIGHT), konst(3.5 / pi2 * z3));
    add("smyth-zeta3-mc", "m(1+x+y+z) = 7ζ(3)/(2π²), Monte Carlo", &["mahler"], 2e-3, Slow, mc("1+x+y+z"), konst(3.5 / pi2 * z3));
    add(
        "vandervelde",
        "m(v(1+x)+y+z) = (4/π²) (Li3(v) - Li3(-v))/2 at v = 0.7",
        &["mahler", "polylog"],
        1e-5,
        Fast,
        mj("v*(1+x)+y+z", &[("v", 0.7)], GRID_TIGHT),
        val(|_| Ok(4.0 / (PI * PI) * f3(0.7))),
    );
    add(
        "arcsine-mahler",
        "m(2v+y+z) = (2/π) ∫₀^v asin(u)/u du at v = 0.4",
        &["mahler", "trig"],
        1e-6,
        Fast,
        val(|_| cassaigne_maillot(0.8, 1.0, 1.0)),
        val(|_| Ok(2.0 / PI * asin_int(0.4)?)),
    );
    add(
        "cassaigne-maillot",
        "m(1+x+y): Cassaigne-Maillot form = jensen_reduce",
        &["mahler"],
        1e-6,
        Fast,
        val(|_| cassaigne_maillot(1.0, 1.0, 1.0)),
        mj("1+x+y", &[], 1 << 16),
    );
    add(
        "fractional-sixth",
        "m(1 - x^(1/6) + y + z) = (2/π) ∫₀^(1/2) asin(u)/u du - (12/π²) S(1/2,1/2)",
        &["mahler", "tsst"],
        1e-10,
        Fast,
        val(|_| Ok(fractional_mahler_sixth(Tolerance::default())?.value)),
        val(|_| Ok(2.0 / PI * asin_int(0.5)? - 12.0 / (PI * PI) * s_vv_closed(0.5)?)),
    );
    add("condon-28-5", "m(1+x+(1-x)(y+z)) = 28ζ(3)/(5π²)", &["mahler"], 1e-5, Fast, mj("1+x+(1-x)*(y+z)", &[], GRID_TIGHT), konst(5.6 / pi2 * z3));
    add("condon-28-5-mc", "m(1+x+(1-x)(y+z)) = 28ζ(3)/(5π²), Monte Carlo", &["mahler"], 2e-3, Slow, mc("1+x+(1-x)*(y+z)"), konst(5.6 / pi2 * z3));
    add(
        "golden-ratio",
        "m(x+(1+x)²+(1+x+y)²z) = 28ζ(3)/(5π²) + log((1+√5)/2)",
        &["mahler"],
        1e-4,
        Fast,
        mj("x+(1+x)^2+(1+x+y)^2*z", &[], GRID_TIGHT),
        konst(5.6 / pi2 * z3 + ((1.0 + 5f64.sqrt()) / 2.0).ln()),
    );
    add(
        "ts-mahler-3",
        "m((1+x+z)(1+1/x+1/z) + y(1+x-z)(1+1/x-1/z)) = 56ζ(3)/(5π²)",
        &["mahler"],
        1e-5,
        Fast,
        mj("(1+x+z)*(1+x^-1+z^-1)+y*(1+x-z)*(1+x^-1-z^-1)", &[], GRID_TIGHT),
        konst(11.2 / pi2 * z3),
    );
    add(
        "ts-mahler-4",
        "m((z-1/z) + (x+1/x)(y+1/y)) = 28ζ(3)/(5π²)",
        &["mahler"],
        1e-5,
        Fast,
        mj("(z-z^-1)+(x+x^-1)*(y+y^-1)", &[], GRID_TIGHT),
        konst(5.6 / pi2 * z3),
    );
    add(
        "ts-mahler-5",
        "m((4z(1+y)²-(1+z)²)(1+3x+x²)² + (1-z)²(1+y)²(1+x+x²)²) = 56ζ(3)/(5π²) + 16G/(3π) + log 2",
        &["mahler"],
        5e-3,
        Fast,
        mj("(4*z*(1+y)^2-(1+z)^2)*(1+3*x+x^2)^2+(1-z)^2*(1+y)^2*(1+x+x^2)^2", &[], GRID),
        konst(11.2 / pi2 * z3 + 16.0 / (3.0 * PI) * g + LN_2),
    );
    add(
        "condon-gen-1-v05",
        "m(1+x+(v/2)(1-x)(y+z)) = (2/π) Ti(v) - (4/π²) TS(v,1) at v = 1/2",
        &["mahler", "tsst"],
        1e-4,
        Fast,
        mj("1+x+v/2*(1-x)*(y+z)", &[("v", 0.5)], GRID),
        val(|_| condon_rhs(0.5)),
    );
    add(
        "condon-gen-1-v2",
        "m(1+x+(v/2)(1-x)(y+z)) = (2/π) Ti(v) - (4/π²) TS(v,1) at v = 2",
        &["mahler", "tsst"],
        1e-4,
        Fast,
        mj("1+x+v/2*(1-x)*(y+z)", &[("v", 2.0)], GRID),
        val(|_| condon_rhs(2.0)),
    );
    add(
        "condon-gen-2-v05",
        "m(x+(v²/4)(1+x)²+(y+(v/2)(1+x))²z) - (1/2) m(x+(v²/4)(1+x)²) = (2/π) Ti(v) - (4/π²) TS(v,1) at v = 1/2",
        &["mahler", "tsst"],
        1e-4,
        Fast,
        mj_affine("x+v^2/4*(1+x)^2+(y+v/2*(1+x))^2*z", &[("v", 0.5)], 1.0, |o| {
            Ok(-0.5 * mahler_nd(&parse_poly_with("x+v^2/4*(1+x)^2", &[("v", 0.5)])?, &jensen_cfg(o, GRID))?.value)
        }),
        val(|_| condon_rhs(0.5)),
    );
    add(
        "condon-gen-3-v05",
        "m((1+y)(1+(v²/4)(x+1/x)²) + (v/2)(1-y)(x+1/x)(z+1/z)) = (4/π) Ti(v) - (8/π²) TS(v,1) at v = 1/2",
        &["mahler", "tsst"],
        1e-4,
        Fast,
        mj("(1+y)*(1+v^2/4*(x+x^-1)^2)+v/2*(1-y)*(x+x^-1)*(z+z^-1)", &[("v", 0.5)], GRID),
        val(|_| Ok(2.0 * condon_rhs(0.5)?)),
    );
    add(
        "condon-gen-4-v05",
        "m((z-1/z) + (v/2)(x+1/x)(y+1/y)) = (2/π) Ti(v) - (4/π²) TS(v,1) at v = 1/2",
        &["mahler", "tsst"],
        1e-4,
        Fast,
        mj("(z-z^-1)+v/2*(x+x^-1)*(y+y^-1)", &[("v", 0.5)], GRID),
        val(|_| condon_rhs(0.5)),
    );
    add(
        "condon-gen-5-v05",
        "quartic form: m = (4/π) Ti(v) - (8/π²) TS(v,1) + (4/π) ∫₀^(π/2) log(1+v sinθ) dθ + log 2 at v = 1/2",
        &["mahler", "tsst"],
        1e-4,
        Fast,
        mj(
            "(4*(1+y)^2-(z+z^-1)^2)*(1+v^2/4*(x+x^-1)^2)^2+(z-z^-1)^2*(1+y)^2*(1-v^2/4*(x+x^-1)^2)^2",
            &[("v", 0.5)],
            GRID,
        ),
        val(|_| Ok(2.0 * condon_rhs(0.5)? + 4.0 / PI * log_sin_integral(0.5)? + LN_2)),
    );
    for (id, v, params) in
        [("t-vinvv-mahler-1-v06", 0.6, &[("v", 0.6)]), ("t-vinvv-mahler-1-v1", 1.0, &[("v", 1.0)])]
    {
        let cit = if v == 1.0 {
            "m(1-v⁴a²+(y+v²a)²z) - (1/2) m(1-v⁴a²) = (4/π) Ti(v) - (8/π²) T(v,1/v), a = (1-x)/(1+x), v = 1"
        } else {
            "m(1-v⁴a²+(y+v²a)²z) - (1/2) m(1-v⁴a²) = (4/π) Ti(v) - (8/π²) T(v,1/v), a = (1-x)/(1+x), v = 0.6"
        };
        let rest: fn(&RunOptions) -> Result<f64> = if v == 1.0 {
            |o| Ok(-0.5 * mahler_nd(&parse_poly_with("(1+x)^2-v^4*(1-x)^2", &[("v", 1.0)])?, &jensen_cfg(o, GRID))?.value)
        } else {
            |o| Ok(-0.5 * mahler_nd(&parse_poly_with("(1+x)^2-v^4*(1-x)^2", &[("v", 0.6)])?, &jensen_cfg(o, GRID))?.value)
        };
        add(
            id,
            cit,
            &["mahler", "tsst"],
            1e-4,
            Fast,
            mj_affine("(1+x)^2-v^4*(1-x)^2+(y*(1+x)+v^2*(1-x))^2*z", params, 1.0, rest),
            val(move |_| t_inv_rhs(v)),
        );
    }
    add(
        "t-vinvv-mahler-2-v06",
        "m(1-v⁴a²+v²ab(z-1/z)) = (8/π) Ti(v) - (16/π²) T(v,1/v), a = (1-x)/(1+x), b = (1-y)/(1+y), v = 0.6",
        &["mahler", "tsst"],
        1e-4,
        Fast,
        mj("((1+x)^2-v^4*(1-x)^2)*(1+y)+v^2*(1-x^2)*(1-y)*(z-z^-1)", &[("v", 0.6)], GRID),
        val(|_| Ok(2.0 * t_inv_rhs(0.6)?)),
    );
    add(
        "t-vinvv-mahler-3-v06",
        "m((y-1/y) + v²a(z-1/z)) = (4/π) Ti(v) - (8/π²) T(v,1/v), a = (1-x)/(1+x), v = 0.6",
        &["mahler", "tsst"],
        1e-4,
        Fast,
        mj("(y-y^-1)*(1+x)+v^2*(1-x)*(z-z^-1)", &[("v", 0.6)], GRID),
        val(|_| t_inv_rhs(0.6)),
    );
    add(
        "lalin-log2",
        "m((1+y)(1+z)+(1-z)(x-y)) = 7ζ(3)/(2π²) + (log 2)/2",
        &["mahler"],
        1e-5,
        Fast,
        mj("(1+y)*(1+z)+(1-z)*(x-y)", &[], GRID_TIGHT),
        konst(3.5 / pi2 * z3 + 0.5 * LN_2),
    );
    add(
        "t11-mahler-2",
        "m(4(1+y) + (1-y)(x-1/x)(z-1/z)) = 14ζ(3)/π²",
        &["mahler"],
        1e-5,
        Fast,
        mj("4*(1+y)+(1-y)*(x-x^-1)*(z-z^-1)", &[], GRID_TIGHT),
        konst(14.0 / pi2 * z3),
    );
    add(
        "t11-mahler-3",
        "m((1+x)(y-1/y) + (1-x)(z-1/z)) = 7ζ(3)/π²",
        &["mahler"],
        1e-4,
        Fast,
        mj("(1+x)*(y-y^-1)+(1-x)*(z-z^-1)", &[], GRID_TIGHT),
        konst(7.0 / pi2 * z3),
    );
    add(
        "t11-catalan-4",
        "m(16(1+y)² - 4(z+1/z)² + (1+y)²(z-1/z)²(x+1/x)²) = 14ζ(3)/π² + 4G/π",
        &["mahler"],
        5e-3,
        Fast,
        mj("16*(1+y)^2-4*(z+z^-1)^2+(1+y)^2*(z-z^-1)^2*(x+x^-1)^2", &[], GRID),
        konst(14.0 / pi2 * z3 + 4.0 / PI * g),
    );
    for (id, form, w, cit) in [
        ("arctan-mahler-1-w07", 1, 0.7, "Ti(w) = (π/2) m(1+w²+(y+w)²z) - (π/4) log(1+w²) at w = 0.7"),
        ("arctan-mahler-1-w1", 1, 1.0, "Ti(w) = (π/2) m(1+w²+(y+w)²z) - (π/4) log(1+w²) at w = 1"),
        ("arctan-mahler-2-w07", 2, 0.7, "Ti(w) = (π/4) m((1+w²)(1+y) + w(1-y)(z+1/z)) at w = 0.7"),
        ("arctan-mahler-2-w1", 2, 1.0, "Ti(w) = (π/4) m((1+w²)(1+y) + w(1-y)(z+1/z)) at w = 1"),
        ("arctan-mahler-3-w07", 3, 0.7, "Ti(w) = (π/2) m((y-1/y) + w(z+1/z)) at w = 0.7"),
        ("arctan-mahler-3-w1", 3, 1.0, "Ti(w) = (π/2) m((y-1/y) + w(z+1/z)) at w = 1"),
        ("arctan-mahler-4-w07", 4, 0.7, "Ti(w) = (π/4) m(quartic) - (π/4) log 2 - (π/2) log(1+w) at w = 0.7"),
        ("arctan-mahler-4-w1", 4, 1.0, "Ti(w) = (π/4) m(quartic) - (π/4) log 2 - (π/2) log(1+w) at w = 1"),
    ] {
        add(
            id,
            cit,
            &["mahler", "trig"],
            1e-4,
            Fast,
            val(move |o| arctan_mahler(form, w, &jensen_cfg(o, GRID))),
            val(move |_| ti(w)),
        );
    }
    out
}

fn catalog() -> &'static [IdentityRecord] {
    static CATALOG: OnceLock<Vec<IdentityRecord>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

/// Every identity carrying `tag`, or all of them, in registry order.
pub fn list_identities(tag: Option<&str>) -> Result<Vec<&'static IdentityRecord>> {
    match tag {
        None => Ok(catalog().iter().collect()),
        Some(t) if TAGS.contains(&t) => Ok(catalog().iter().filter(|r| r.has_tag(t)).collect()),
        Some(t) => Err(Error::Usage(format!("unknown tag {t:?}; valid tags: {}", TAGS.join(", ")))),
    }
}

pub fn find_identity(id: &str) -> Result<&'static IdentityRecord> {
    catalog()
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::Usage(format!("unknown identity {id:?}")))
}

pub fn run_identity(id: &str, opts: &RunOptions) -> Result<IdentityReport> {
    run_record(find_identity(id)?, opts)
}

/// Runs `records` in parallel; reports come back in input order.
pub fn run_suite(records: &[&IdentityRecord], opts: &RunOptions) -> Vec<Result<IdentityReport>> {
    use rayon::prelude::*;
    records.par_iter().map(|r| run_record(r, opts)).collect()
}

pub fn run_record(rec: &IdentityRecord, opts: &RunOptions) -> Result<IdentityReport> {
    let start = Instant::now();
    let side = |f: &Thunk, name: &'static str| {
        f(opts).map_err(|e| Error::Identity { id: rec.id.to_string(), side: name, msg: e.to_string() })
    };
    let lhs = side(&rec.lhs, "lhs")?;
    let rhs = side(&rec.rhs, "rhs")?;
    let abs_diff = match (lhs, rhs) {
        (Side::Value(a), Side::Value(b)) => Some((a - b).abs()),
        (Side::Divergent(_), Side::Divergent(_)) => Some(0.0),
        _ => None,
    };
    let tol = opts.tol.unwrap_or(rec.tol);
    Ok(IdentityReport {
        id: rec.id.to_string(),
        citation: rec.citation.to_string(),
        lhs_value: lhs,
        rhs_value: rhs,
        abs_diff,
        tol,
        pass: abs_diff.is_some_and(|d| d <= tol),
        elapsed: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let all = list_identities(None).unwrap();
        assert!(all.len() >= 30);
        let mut ids: Vec<_> = all.iter().map(|r| r.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), all.len(), "ids must be unique");
        for r in &all {
            assert!(!r.citation.is_empty() && !r.tags.is_empty() && r.tol > 0.0);
            assert!(r.tags.iter().all(|t| TAGS.contains(t)), "{}", r.id);
        }
        for id in ["smyth-zeta3", "condon-28-5", "ts-mahler-3", "golden-ratio", "lalin-log2", "am-table-dn", "qseries-1", "t11-catalan-4"] {
            assert!(find_identity(id).is_ok(), "{id}");
        }
    }

    #[test]
    fn tag_filters() {
        let q = list_identities(Some("qseries")).unwrap();
        assert_eq!(q.iter().map(|r| r.id).collect::<Vec<_>>(), ["qseries-1", "qseries-2", "qseries-3", "qseries-aux"]);
        let m = list_identities(Some("mahler")).unwrap();
        for id in ["condon-gen-1-v05", "ts-mahler-5", "t-vinvv-mahler-1-v1", "lalin-log2", "t11-mahler-3"] {
            assert!(m.iter().any(|r| r.id == id), "{id}");
        }
        match list_identities(Some("nope")) {
            Err(Error::Usage(msg)) => assert!(msg.contains("mahler") && msg.contains("qseries")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn divergent_rows() {
        let r = run_identity("am-table-1cn", &RunOptions::default()).unwrap();
        assert_eq!(r.lhs_value, Side::DIVERGENT);
        assert_eq!(r.rhs_value, Side::DIVERGENT);
        assert!(r.pass);
    }

    #[test]
    fn report_json_round_trip() {
        for id in ["h3-at-2", "am-table-sncn"] {
            let r = run_identity(id, &RunOptions::default()).unwrap();
            let s = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<IdentityReport>(&s).unwrap(), r);
            assert!(s.contains("\"lhs\"") && s.contains("\"elapsed_s\""));
        }
    }

    #[test]
    fn tolerance_override_decides_pass() {
        let strict = RunOptions { tol: Some(1e-300), ..Default::default() };
        let r = run_identity("smyth-zeta3", &strict).unwrap();
        assert!(!r.pass);
        assert_eq!(r.pass, r.abs_diff.unwrap() <= r.tol);
    }
}

