//! `eval <fn> <args...>`: name-based dispatch onto the core library.

use mahler_core::binomial::{central_binom_sum, h1_closed, h2_closed, h3_closed, h4_multipolylog, h_series, hyper_4f3_value};
use mahler_core::elliptic::{
    am_integral_closed, am_integral_quad, cn_sn_x_integral, complete_k, make_ctx, nome_invert_sin, nome_invert_tanh,
    IntegrandKind,
};
use mahler_core::mahler::{cassaigne_maillot, fractional_mahler_sixth};
use mahler_core::multipolylog::{f_jk, lewin_integral};
use mahler_core::polylog::{bloch_wigner, li2, li3};
use mahler_core::qseries::{qseries_lhs, qseries_rhs, QSeriesKind};
use mahler_core::trig_integrals::{asin_int, ti};
use mahler_core::tsst::{
    s_closed, s_quad, s_v1_closed, s_vv_closed, t_closed, t_quad, t_v_invv_closed, t_vv_closed, ts_closed, ts_quad,
    ts_v1_closed,
};
use mahler_core::{ComplexValue as C, Error, Result, Tolerance};

/// `(name, argument synopsis)` for every function `eval` knows.
pub const FUNCTIONS: &[(&str, &str)] = &[
    ("li2", "re [im]"),
    ("li3", "re [im]"),
    ("bloch_wigner", "re im"),
    ("ti", "w"),
    ("asin_int", "v"),
    ("ts_v1_closed", "v"),
    ("ts_closed", "v w"),
    ("ts_quad", "v w"),
    ("s_v1_closed", "v"),
    ("s_vv_closed", "v"),
    ("s_closed", "v w"),
    ("s_quad", "v w"),
    ("t_closed", "v w"),
    ("t_vv_closed", "v"),
    ("t_v_invv_closed", "v"),
    ("t_quad", "v w"),
    ("h1_closed", "v"),
    ("h2_closed", "v"),
    ("h3_closed", "v"),
    ("h4_multipolylog", "v"),
    ("h_series", "n v terms"),
    ("hyper_4f3_value", ""),
    ("central_binom_sum", ""),
    ("f_jk", "j k x y"),
    ("lewin_integral", "x c"),
    ("complete_k", "k"),
    ("nome", "k"),
    ("nome_invert_sin", "q"),
    ("nome_invert_tanh", "q"),
    ("am_integral_closed", "kind k"),
    ("am_integral_quad", "kind k"),
    ("cn_sn_x_integral", "k"),
    ("qseries_lhs", "dilog1|dilog2|dilog3|auxiliary k"),
    ("qseries_rhs", "dilog1|dilog2|dilog3|auxiliary k"),
    ("cassaigne_maillot", "a b c"),
    ("fractional_mahler_sixth", ""),
];

pub enum Value {
    Real(f64),
    Complex(C),
    Divergent,
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Real(v) => write!(f, "{v}"),
            Value::Complex(z) if z.im.is_sign_negative() => write!(f, "{}-{}i", z.re, -z.im),
            Value::Complex(z) => write!(f, "{}+{}i", z.re, z.im),
            Value::Divergent => f.write_str("Divergent"),
        }
    }
}

fn usage(name: &str) -> Error {
    match FUNCTIONS.iter().find(|(n, _)| *n == name) {
        Some((n, syn)) => Error::Usage(format!("usage: eval {n} {syn}")),
        None => {
            let names: Vec<_> = FUNCTIONS.iter().map(|(n, _)| *n).collect();
            Error::Usage(format!("unknown function {name:?}; known: {}", names.join(", ")))
        }
    }
}

fn num(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::Usage(format!("not a number: {s:?}")))
}

fn int(s: &str) -> Result<u32> {
    s.parse::<u32>().map_err(|_| Error::Usage(format!("not a non-negative integer: {s:?}")))
}

fn qkind(s: &str) -> Result<QSeriesKind> {
    match s.to_ascii_lowercase().as_str() {
        "dilog1" | "1" => Ok(QSeriesKind::Dilog1),
        "dilog2" | "2" => Ok(QSeriesKind::Dilog2),
        "dilog3" | "3" => Ok(QSeriesKind::Dilog3),
        "auxiliary" | "aux" => Ok(QSeriesKind::Auxiliary),
        _ => Err(Error::Usage(format!("unknown q-series {s:?}; expected dilog1, dilog2, dilog3 or auxiliary"))),
    }
}

pub fn eval(name: &str, args: &[String]) -> Result<Value> {
    let bad = || usage(name);
    let real = |i: usize| args.get(i).ok_or_else(bad).and_then(|s| num(s));
    let arity = |n: usize| if args.len() == n { Ok(()) } else { Err(bad()) };
    let complex_arg = || -> Result<C> {
        match args.len() {
            1 => Ok(C::new(real(0)?, 0.0)),
            2 => Ok(C::new(real(0)?, real(1)?)),
            _ => Err(bad()),
        }
    };
    use Value::Real;
    let one = |f: fn(f64) -> Result<f64>| -> Result<Value> {
        arity(1)?;
        Ok(Real(f(real(0)?)?))
    };
    let two = |f: fn(f64, f64) -> Result<f64>| -> Result<Value> {
        arity(2)?;
        Ok(Real(f(real(0)?, real(1)?)?))
    };
    let quad2 = |f: fn(f64, f64) -> Result<mahler_core::QuadResult>| -> Result<Value> {
        arity(2)?;
        Ok(Real(f(real(0)?, real(1)?)?.value))
    };
    match name {
        "li2" => Ok(Value::Complex(li2(complex_arg()?)?)),
        "li3" => Ok(Value::Complex(li3(complex_arg()?)?)),
        "bloch_wigner" => {
            arity(2)?;
            Ok(Real(bloch_wigner(C::new(real(0)?, real(1)?))?))
        }
        "ti" => one(ti),
        "asin_int" => one(asin_int),
        "ts_v1_closed" => one(ts_v1_closed),
        "ts_closed" => two(ts_closed),
        "ts_quad" => quad2(ts_quad),
        "s_v1_closed" => one(s_v1_closed),
        "s_vv_closed" => one(s_vv_closed),
        "s_closed" => two(s_closed),
        "s_quad" => quad2(s_quad),
        "t_closed" => two(t_closed),
        "t_vv_closed" => one(t_vv_closed),
        "t_v_invv_closed" => one(t_v_invv_closed),
        "t_quad" => quad2(t_quad),
        "h1_closed" => one(h1_closed),
        "h2_closed" => one(h2_closed),
        "h3_closed" => one(h3_closed),
        "h4_multipolylog" => one(h4_multipolylog),
        "h_series" => {
            arity(3)?;
            let terms = int(&args[2])? as usize;
            Ok(Real(h_series(int(&args[0])?, real(1)?, terms)?))
        }
        "hyper_4f3_value" => arity(0).map(|_| Real(hyper_4f3_value())),
        "central_binom_sum" => arity(0).map(|_| Real(central_binom_sum())),
        "f_jk" => {
            arity(4)?;
            let (j, k) = (int(&args[0])?, int(&args[1])?);
            Ok(Value::Complex(f_jk(j, k, C::new(real(2)?, 0.0), C::new(real(3)?, 0.0))?))
        }
        "lewin_integral" => {
            arity(2)?;
            Ok(Value::Complex(lewin_integral(real(0)?, real(1)?)?))
        }
        "complete_k" => one(complete_k),
        "nome" => one(|k| Ok(make_ctx(k)?.q)),
        "nome_invert_sin" => one(nome_invert_sin),
        "nome_invert_tanh" => one(nome_invert_tanh),
        "am_integral_closed" | "am_integral_quad" => {
            arity(2)?;
            let kind: IntegrandKind = args[0].parse()?;
            let ctx = make_ctx(real(1)?)?;
            let r = if name == "am_integral_closed" {
                am_integral_closed(kind, &ctx)
            } else {
                am_integral_quad(kind, &ctx).map(|q| q.value)
            };
            match r {
                Ok(v) => Ok(Real(v)),
                Err(Error::Divergent) => Ok(Value::Divergent),
                Err(e) => Err(e),
            }
        }
        "cn_sn_x_integral" => one(|k| Ok(cn_sn_x_integral(&make_ctx(k)?)?.value)),
        "qseries_lhs" | "qseries_rhs" => {
            arity(2)?;
            let kind = qkind(&args[0])?;
            let ctx = make_ctx(real(1)?)?;
            Ok(Real(if name == "qseries_lhs" { qseries_lhs(kind, &ctx) } else { qseries_rhs(kind, &ctx).value }))
        }
        "cassaigne_maillot" => {
            arity(3)?;
            Ok(Real(cassaigne_maillot(real(0)?, real(1)?, real(2)?)?))
        }
        "fractional_mahler_sixth" => {
            arity(0)?;
            Ok(Real(fractional_mahler_sixth(Tolerance::default())?.value))
        }
        _ => Err(bad()),
    }
}
