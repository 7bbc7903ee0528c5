//! Laurent polynomials with complex coefficients and their text format.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' int)?
//! int    := ['-'] digits | '(' ['-'] digits ')'
//! atom   := number | ident | '(' expr ')'
//! ```
//!
//! Identifiers are the variables `x`, `y`, `z`, `x1`, `x2`, ..., the imaginary
//! unit `i`, or a parameter bound by the caller. Division is only by a single
//! term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_POWER: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Var(String);

impl Var {
    fn rank(&self) -> (u8, usize, &str) {
        match self.0.as_str() {
            "x" => (0, 0, ""),
            "y" => (1, 0, ""),
            "z" => (2, 0, ""),
            s => (3, s.len(), s),
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn is_variable(name: &str) -> bool {
    matches!(name, "x" | "y" | "z")
        || (name.len() > 1 && name.starts_with('x') && name[1..].bytes().all(|b| b.is_ascii_digit()) && !name[1..].starts_with('0'))
}

type Mono = BTreeMap<Var, i32>;

#[derive(Debug, Clone, Default)]
struct Sparse(BTreeMap<Mono, Complex64>);

impl Sparse {
    fn constant(c: Complex64) -> Self {
        let mut s = Sparse::default();
        s.push(Mono::new(), c);
        s
    }

    fn var(name: &str) -> Self {
        let mut m = Mono::new();
        m.insert(Var(name.to_string()), 1);
        let mut s = Sparse::default();
        s.push(m, Complex64::new(1.0, 0.0));
        s
    }

    fn push(&mut self, m: Mono, c: Complex64) {
        let e = self.0.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
    }

    fn prune(mut self) -> Self {
        self.0.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        self
    }

    fn add(mut self, o: Sparse, sign: f64) -> Self {
        for (m, c) in o.0 {
            self.push(m, c * sign);
        }
        self.prune()
    }

    fn mul(&self, o: &Sparse) -> Self {
        let mut out = Sparse::default();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &o.0 {
                let mut m = ma.clone();
                for (v, e) in mb {
                    *m.entry(v.clone()).or_insert(0) += e;
                }
                m.retain(|_, e| *e != 0);
                out.push(m, ca * cb);
            }
        }
        out.prune()
    }

    fn single(&self) -> Option<(&Mono, Complex64)> {
        if self.0.len() == 1 {
            self.0.iter().next().map(|(m, c)| (m, *c))
        } else {
            None
        }
    }

    fn invert_single(&self) -> Option<Sparse> {
        let (m, c) = self.single()?;
        let mut inv = Sparse::default();
        inv.push(m.iter().map(|(v, e)| (v.clone(), -e)).collect(), c.inv());
        Some(inv)
    }
}

/// A nonzero Laurent polynomial in named variables.
///
/// `vars` is kept in canonical order (`x`, `y`, `z`, `x1`, `x2`, ...); each key
/// of `terms` has one exponent per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i32>, Complex64>,
}

impl LaurentPoly {
    /// Build from explicit terms. Zero coefficients are dropped and repeated
    /// exponent vectors are summed.
    pub fn new<I>(vars: Vec<String>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, Complex64)>,
    {
        let mut sorted: Vec<Var> = vars.iter().cloned().map(Var).collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::domain("LaurentPoly", format!("repeated variable {}", w[0].0)));
            }
        }
        for v in &vars {
            if !is_variable(v) {
                return Err(Error::domain("LaurentPoly", format!("invalid variable name {v:?}")));
            }
        }
        let perm: Vec<usize> = sorted.iter().map(|v| vars.iter().position(|w| *w == v.0).unwrap()).collect();
        let mut map: BTreeMap<Vec<i32>, Complex64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::domain("LaurentPoly", "exponent vector length does not match variables"));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite("LaurentPoly"));
            }
            let key: Vec<i32> = perm.iter().map(|&p| e[p]).collect();
            *map.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        if map.is_empty() {
            return Err(Error::domain("LaurentPoly", "polynomial is zero"));
        }
        Ok(LaurentPoly { vars: sorted.into_iter().map(|v| v.0).collect(), terms: map })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], Complex64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn coeff(&self, exps: &[i32]) -> Complex64 {
        self.terms.get(exps).copied().unwrap_or_default()
    }

    /// `(min, max)` exponent of variable `i`.
    pub fn degree_range(&self, i: usize) -> (i32, i32) {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for e in self.terms.keys() {
            lo = lo.min(e[i]);
            hi = hi.max(e[i]);
        }
        (lo, hi)
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (x, &k) in point.iter().zip(e) {
                t *= x.powi(k);
            }
            s += t;
        }
        s
    }

    /// The same polynomial over a superset of variables.
    pub fn embed(&self, vars: &[&str]) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| names.iter().position(|n| n == v).ok_or_else(|| Error::domain("embed", format!("missing {v}"))))
            .collect::<Result<_>>()?;
        let width = names.len();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; width];
            for (k, &i) in idx.iter().enumerate() {
                ne[i] = e[k];
            }
            (ne, *c)
        });
        LaurentPoly::new(names, terms)
    }

    pub fn scale(&self, c: Complex64) -> Result<Self> {
        LaurentPoly::new(self.vars.clone(), self.terms.iter().map(|(e, k)| (e.clone(), k * c)))
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<Self> {
        let mut names: Vec<Var> = self.vars.iter().chain(&other.vars).cloned().map(Var).collect();
        names.sort();
        names.dedup();
        let names: Vec<&str> = names.iter().map(|v| v.0.as_str()).collect();
        let a = self.embed(&names)?;
        let b = other.embed(&names)?;
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                terms.push((ea.iter().zip(eb).map(|(p, q)| p + q).collect(), ca * cb));
            }
        }
        LaurentPoly::new(a.vars, terms)
    }

    /// Substitute `x_i -> 1/x_i`.
    pub fn invert_var(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e[i] = -e[i];
                (e, *c)
            })
            .collect();
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    /// Substitute `x_i -> x_i * x_j`, a unimodular change of variables.
    pub fn shear(&self, i: usize, j: usize) -> Self {
        assert!(i != j);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e[j] += e[i];
                (e, *c)
            })
            .collect();
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    fn display_order(&self) -> Vec<(&Vec<i32>, &Complex64)> {
        fn zig(e: i32) -> u64 {
            match e {
                0 => u64::MAX,
                e if e > 0 => 2 * e as u64 - 1,
                e => 2 * (-e) as u64,
            }
        }
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| {
            let total: i64 = e.iter().map(|&k| (k as i64).abs()).sum();
            (total, e.iter().map(|&k| zig(k)).collect::<Vec<_>>())
        });
        v
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (e, c)) in self.display_order().into_iter().enumerate() {
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e.iter())
                .filter(|(_, &k)| k != 0)
                .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let mono = mono.join("*");
            let coef = if c.im != 0.0 {
                let sign = if n > 0 { "+" } else { "" };
                let im_sign = if c.im < 0.0 { "-" } else { "+" };
                format!("{sign}({}{im_sign}{}*i)", fmt_real(c.re), fmt_real(c.im.abs()))
            } else {
                let sign = if c.re < 0.0 {
                    "-"
                } else if n > 0 {
                    "+"
                } else {
                    ""
                };
                if c.re.abs() == 1.0 && !mono.is_empty() {
                    sign.to_string()
                } else {
                    format!("{sign}{}", fmt_real(c.re.abs()))
                }
            };
            f.write_str(&coef)?;
            if !mono.is_empty() {
                if !(coef.is_empty() || coef == "-" || coef == "+") {
                    f.write_str("*")?;
                }
                f.write_str(&mono)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            let text = &s[start..i];
            let v: f64 = text
                .parse()
                .map_err(|_| Error::Parse { pos: start, msg: format!("malformed number {text:?}") })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    params: &'a [(&'a str, f64)],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?, 1.0);
            } else if self.eat('-') {
                acc = acc.add(self.term()?, -1.0);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                self.at += 1;
                let pos = self.pos();
                let d = self.unary()?;
                if d.0.is_empty() {
                    return Err(Error::Parse { pos, msg: "division by zero".into() });
                }
                let inv = d.invert_single().ok_or(Error::Parse { pos, msg: "division by a non-monomial".into() })?;
                acc = acc.mul(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Sparse> {
        if self.eat('-') {
            return Ok(Sparse::default().add(self.unary()?, -1.0));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let paren = self.eat('(');
        let neg = self.eat('-');
        let n = match self.peek() {
            Some(Tok::Num(v)) => *v,
            _ => return self.err("expected an integer exponent"),
        };
        if n.fract() != 0.0 || !n.is_finite() {
            return Err(Error::Parse { pos, msg: format!("non-integer exponent {n}") });
        }
        self.at += 1;
        if paren && !self.eat(')') {
            return self.err("expected ')'");
        }
        if n > MAX_POWER as f64 {
            return Err(Error::Parse { pos, msg: format!("exponent larger than {MAX_POWER}") });
        }
        let mut e = n as i64;
        let b = if neg {
            e = -e;
            base.invert_single()
                .ok_or(Error::Parse { pos, msg: "negative power of a non-monomial".into() })?
        } else {
            base
        };
        let mut out = Sparse::constant(Complex64::new(1.0, 0.0));
        for _ in 0..e.abs() {
            out = out.mul(&b);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Sparse> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(Sparse::constant(Complex64::new(v, 0.0)).prune())
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some((_, v)) = self.params.iter().find(|(p, _)| *p == name) {
                    Ok(Sparse::constant(Complex64::new(*v, 0.0)).prune())
                } else if name == "i" {
                    Ok(Sparse::constant(Complex64::new(0.0, 1.0)))
                } else if is_variable(&name) {
                    Ok(Sparse::var(&name))
                } else {
                    Err(Error::Parse { pos, msg: format!("unknown identifier {name:?}") })
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse an expression in `x`, `y`, `z`.
pub fn parse_poly(expr: &str) -> Result<LaurentPoly> {
    parse_poly_with(expr, &[])
}

/// Parse with named real parameters substituted, e.g. `("k", 0.5)`.
pub fn parse_poly_with(expr: &str, params: &[(&str, f64)]) -> Result<LaurentPoly> {
    for (name, v) in params {
        if is_variable(name) || *name == "i" {
            return Err(Error::domain("parse_poly", format!("parameter name {name:?} is reserved")));
        }
        if !v.is_finite() {
            return Err(Error::NonFinite("parse_poly"));
        }
    }
    let toks = tokenize(expr)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty input".into() });
    }
    let mut p = Parser { toks, at: 0, end: expr.len(), params };
    let s = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("expected an operator");
    }
    if s.0.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "expression is identically zero".into() });
    }
    let mut vars: Vec<Var> = s.0.keys().flat_map(|m| m.keys().cloned()).collect();
    vars.sort();
    vars.dedup();
    let terms: Vec<_> = s
        .0
        .into_iter()
        .map(|(m, c)| (vars.iter().map(|v| m.get(v).copied().unwrap_or(0)).collect::<Vec<i32>>(), c))
        .collect();
    LaurentPoly::new(vars.into_iter().map(|v| v.0).collect(), terms)
}
