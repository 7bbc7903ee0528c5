//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use mahler_core::binomial::{central_binom_sum, h1_closed, h2_closed, h3_closed, h4_multipolylog, h_series, hyper_4f3_value};
use mahler_core::elliptic::{am_integral_closed, am_integral_quad, make_ctx, nome_invert_sin, nome_invert_tanh, IntegrandKind};
use mahler_core::multipolylog::lewin_integral;
use mahler_core::qseries::{qseries_lhs, qseries_rhs, QSeriesKind};
use mahler_core::quadrature::{integrate_1d, Tolerance};
use mahler_core::registry::{find_identity, list_identities, run_record, run_suite, CostClass};
use mahler_core::trig_integrals::ti;
use mahler_core::tsst::{
    s_closed, s_quad, s_v1_closed, s_vv_closed, t_closed, t_functional_residual, t_quad, t_v_invv_closed, t_vv_closed,
    ts_closed, ts_quad, ts_v1_closed,
};
use mahler_core::{Error, RunOptions, CATALAN, ZETA3};
use rand::{Rng, SeedableRng};

/// Largest deviation seen and whether every check held.
struct Check {
    worst: f64,
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { worst: 0.0, ok: true, notes: Vec::new() }
    }

    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let d = (got - want).abs();
        self.worst = self.worst.max(d);
        if !(d <= tol) {
            self.ok = false;
            self.notes.push(format!("{what}: |{got} - {want}| = {d:.2e} > {tol:.0e}"));
        }
    }

    fn holds(&mut self, what: &str, cond: bool) {
        if !cond {
            self.ok = false;
            self.notes.push(what.to_string());
        }
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        if t > limit {
            self.ok = false;
            self.notes.push(format!("took {t:.2?}, limit {limit:?}"));
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn secs(s: f64) -> Duration {
    Duration::from_secs_f64(s)
}

fn c1(c: &mut Check) {
    let t = Instant::now();
    c.close("h3(2)", h3_closed(2.0).unwrap(), 2.8 * ZETA3, 1e-12);
    c.within(t, secs(0.1));
}

fn c2(c: &mut Check) {
    let t = Instant::now();
    for v in linspace(0.2, 3.0, 7) {
        c.close(&format!("TS({v},1)"), ts_v1_closed(v).unwrap(), ts_quad(v, 1.0).unwrap().value, 1e-9);
    }
    c.within(t, secs(5.0));
    c.close("TS(2,1)", ts_v1_closed(2.0).unwrap(), PI / 2.0 * ti(2.0).unwrap() - 1.4 * ZETA3, 1e-11);
}

fn c3(c: &mut Check) {
    let t = Instant::now();
    c.close("TS(0.8,0.5)", ts_closed(0.8, 0.5).unwrap(), ts_quad(0.8, 0.5).unwrap().value, 1e-9);
    c.within(t, secs(1.0));
}

fn c4(c: &mut Check) {
    for v in linspace(0.1, 1.0, 10) {
        c.close(&format!("S({v},1)"), s_v1_closed(v).unwrap(), s_quad(v, 1.0).unwrap().value, 1e-9);
        c.close(&format!("S({v},{v})"), s_vv_closed(v).unwrap(), s_quad(v, v).unwrap().value, 1e-9);
    }
    for (v, w) in linspace(0.05, 0.8, 10).into_iter().zip(linspace(0.15, 1.0, 10)) {
        c.close(&format!("S({v},{w})"), s_closed(v, w).unwrap(), s_quad(v, w).unwrap().value, 1e-9);
    }
    c.close("4 S(1/2,1/2)", 4.0 * s_vv_closed(0.5).unwrap(), central_binom_sum(), 1e-12);
}

fn c5(c: &mut Check) {
    for (v, w) in linspace(0.3, 4.0, 10).into_iter().zip(linspace(0.1, 0.9, 10)) {
        let w = w * v;
        c.close(&format!("T({v},{w})"), t_closed(v, w).unwrap(), t_quad(v, w).unwrap().value, 1e-9);
    }
    for v in linspace(0.1, 3.0, 10) {
        c.close(&format!("T({v},{v})"), t_vv_closed(v).unwrap(), t_quad(v, v).unwrap().value, 1e-9);
        c.close(&format!("T({v},1/{v})"), t_v_invv_closed(v).unwrap(), t_quad(v, 1.0 / v).unwrap().value, 1e-9);
    }
    c.close("T(1,1)", t_quad(1.0, 1.0).unwrap().value, PI / 2.0 * CATALAN - 0.875 * ZETA3, 1e-10);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let (v, w) = (rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0));
        c.close(&format!("T functional ({v:.3},{w:.3})"), t_functional_residual(v, w).unwrap(), 0.0, 1e-9);
    }
}

fn c6(c: &mut Check) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    let mut n = 0;
    while n < 10 {
        let (x, cc): (f64, f64) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.2));
        if cc * x >= 1.0 {
            continue;
        }
        let f = |z: f64| (1.0 - z).ln() * (1.0 - cc * z).ln() / z;
        let q = integrate_1d(f, 0.0, x, Tolerance::abs(1e-13)).unwrap().value;
        c.close(&format!("Lewin({x:.3},{cc:.3})"), lewin_integral(x, cc).unwrap().re, q, 1e-10);
        n += 1;
    }
}

fn c7(c: &mut Check) {
    for v in linspace(-0.95, 0.95, 40) {
        let closed = [h1_closed(v).unwrap(), h2_closed(v).unwrap(), h3_closed(v).unwrap()];
        for (n, want) in (1..=3).zip(closed) {
            c.close(&format!("h{n}({v})"), h_series(n, v, 5000).unwrap(), want, 1e-11);
        }
    }
    c.close("h4(1/2)", h4_multipolylog(0.5).unwrap(), h_series(4, 0.5, 5000).unwrap(), 1e-10);
    c.close("4F3", hyper_4f3_value(), 0.7 * ZETA3, 1e-12);
}

fn c8(c: &mut Check) {
    let t = Instant::now();
    for k in [0.3, 0.6, 0.9] {
        let ctx = make_ctx(k).unwrap();
        for kind in IntegrandKind::ALL {
            let closed = am_integral_closed(kind, &ctx);
            let quad = am_integral_quad(kind, &ctx);
            if kind.is_divergent() {
                let div = matches!(closed, Err(Error::Divergent)) && matches!(quad, Err(Error::Divergent));
                c.holds(&format!("{} at k={k} not reported Divergent", kind.label()), div);
            } else {
                c.close(&format!("{} at k={k}", kind.label()), closed.unwrap(), quad.unwrap().value, 1e-8);
            }
        }
        c.close("dn row", am_integral_quad(IntegrandKind::Dn, &ctx).unwrap().value, PI * PI / 8.0, 1e-10);
        c.close("dn/sn row", am_integral_quad(IntegrandKind::DnSn, &ctx).unwrap().value, 2.0 * CATALAN, 1e-10);
    }
    c.within(t, secs(30.0));
}

fn c9(c: &mut Check) {
    for k in [0.2, 0.5, 0.8] {
        let ctx = make_ctx(k).unwrap();
        for kind in [QSeriesKind::Dilog1, QSeriesKind::Dilog2, QSeriesKind::Dilog3] {
            c.close(&format!("{kind:?} at k={k}"), qseries_rhs(kind, &ctx).value, qseries_lhs(kind, &ctx), 1e-10);
        }
        c.close(&format!("sine inversion k={k}"), nome_invert_sin(ctx.q).unwrap(), k, 1e-12);
        c.close(&format!("tanh inversion k={k}"), nome_invert_tanh(ctx.q).unwrap(), k, 1e-12);
    }
    for k in [0.3, 0.6] {
        let ctx = make_ctx(k).unwrap();
        c.close(&format!("q(r^2) k={k}"), make_ctx(ctx.r * ctx.r).unwrap().q, ctx.q * ctx.q, 1e-12);
    }
}

/// Runs registry identities against the criterion tolerance `tol`.
fn registry(c: &mut Check, ids: &[&str], tol: f64, each: Option<Duration>) {
    for id in ids {
        let rec = find_identity(id).unwrap();
        let t = Instant::now();
        let r = run_record(rec, &RunOptions::default()).unwrap();
        match r.abs_diff {
            Some(d) => {
                c.worst = c.worst.max(d);
                c.holds(&format!("{id}: |diff| = {d:.2e} > {tol:.0e}"), d <= tol);
            }
            None => c.holds(&format!("{id}: one side divergent"), false),
        }
        if let Some(limit) = each {
            c.within(t, limit);
        }
    }
}

fn c10(c: &mut Check) {
    registry(c, &["smyth-zeta3", "vandervelde", "condon-28-5", "lalin-log2"], 1e-5, Some(secs(60.0)));
    registry(c, &["golden-ratio"], 1e-4, Some(secs(60.0)));
}

fn c11(c: &mut Check) {
    let t = Instant::now();
    registry(c, &["ts-mahler-5", "t11-catalan-4", "boyd-k08", "cnsn-mahler", "k-integral-mahler"], 5e-3, None);
    c.within(t, secs(300.0));
}

fn c12(c: &mut Check) {
    let ids: Vec<&str> = list_identities(Some("mahler"))
        .unwrap()
        .into_iter()
        .map(|r| r.id)
        .filter(|id| {
            id.starts_with("condon-gen-1-") || id.starts_with("t-vinvv-mahler-1-") || id.starts_with("arctan-mahler-")
        })
        .collect();
    c.holds(&format!("expected 12 parametric entries, found {}", ids.len()), ids.len() == 12);
    registry(c, &ids, 1e-4, None);
}

fn c13(c: &mut Check) {
    let fast: Vec<_> = list_identities(None).unwrap().into_iter().filter(|r| r.cost == CostClass::Fast).collect();
    let opts = RunOptions::default();
    let t = Instant::now();
    let first: Vec<_> = run_suite(&fast, &opts).into_iter().map(|r| r.unwrap()).collect();
    c.within(t, secs(180.0));
    for r in &first {
        c.holds(&format!("{} failed", r.id), r.pass);
        if let Some(d) = r.abs_diff {
            c.worst = c.worst.max(d / r.tol);
        }
    }
    let strip = |v: Vec<mahler_core::IdentityReport>| {
        v.into_iter().map(|mut r| {
            r.elapsed = 0.0;
            r
        })
    };
    let again: Vec<_> = run_suite(&fast, &opts).into_iter().map(|r| r.unwrap()).collect();
    c.holds("second run differs", strip(first).eq(strip(again)));
}

fn main() {
    let criteria: [(u32, &str, fn(&mut Check)); 13] = [
        (1, "h3(2) = (14/5) zeta(3)", c1),
        (2, "TS(v,1) closed form vs quadrature; TS(2,1)", c2),
        (3, "TS(0.8,1/2) multiple polylogarithm reduction", c3),
        (4, "S family vs quadrature; central binomial sum", c4),
        (5, "T family vs quadrature; T(1,1); functional equation", c5),
        (6, "Lewin integral vs quadrature", c6),
        (7, "h_n series vs closed forms; h4; 4F3", c7),
        (8, "elliptic am-integral table", c8),
        (9, "q-series, nome inversion and duality", c9),
        (10, "Mahler measures, tight", c10),
        (11, "Mahler measures, loose (Catalan and elliptic)", c11),
        (12, "parametric Mahler families", c12),
        (13, "fast registry suite: all pass, < 3 min, deterministic; worst is |diff|/tol", c13),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let mut c = Check::new();
        let t = Instant::now();
        f(&mut c);
        let status = if c.ok { "PASS" } else { "FAIL" };
        println!("{status} criterion {n:2}: {name} (worst {:.2e}, {:.2?})", c.worst, t.elapsed());
        for note in &c.notes {
            println!("       {note}");
        }
        failed += usize::from(!c.ok);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
