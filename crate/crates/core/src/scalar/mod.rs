//! Exact rational functions in the deformation parameters.
//!
//! A [`Scalar`] is a quotient of two [`MPoly`]s. Equality is decided by
//! cross-multiplication, so arithmetic only performs cheap reductions
//! (monomial and constant cancellation, exact division when it succeeds).
//! The fully reduced form is computed with a multivariate gcd, and only for
//! printing.

mod gcd;
mod monomial;
mod mpoly;
pub(crate) mod param;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub use gcd::gcd;
pub use monomial::Monomial;
pub use mpoly::MPoly;
pub use param::ParamName;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};

/// Simultaneous parameter substitution.
pub type Bindings = BTreeMap<ParamName, Scalar>;

#[derive(Clone, Debug)]
pub struct Scalar {
    num: MPoly,
    den: MPoly,
}

impl Scalar {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let (mut num, mut den) = (num, den);
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        if let Some(c) = den.as_constant() {
            return Scalar {
                num: num.scale(&c.recip()),
                den: MPoly::one(),
            };
        }
        let lc = den.leading_term().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.as_monomial().is_none() && num.len() >= den.len() {
            if let Some(q) = num.exact_div(&den) {
                return Scalar {
                    num: q,
                    den: MPoly::one(),
                };
            }
        }
        Scalar { num, den }
    }

    pub fn zero() -> Self {
        Scalar {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            num: MPoly::from_int(n),
            den: MPoly::one(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar {
            num: MPoly::constant(q),
            den: MPoly::one(),
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        Scalar {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn param(p: ParamName) -> Self {
        Scalar::from_poly(MPoly::var(p))
    }

    /// Parameter by name; panics on an invalid identifier.
    pub fn var(name: &str) -> Self {
        Scalar::param(ParamName::of(name))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den || self.num.sub(&self.den).is_zero()
    }

    /// The value as a rational number, if it does not depend on parameters.
    pub fn as_rational(&self) -> Option<BigRational> {
        let (n, d) = self.canonical_parts();
        Some(n.as_constant()? / d.as_constant()?)
    }

    pub fn params(&self) -> Vec<ParamName> {
        let mut v = self.num.params();
        v.extend(self.den.params());
        v.sort();
        v.dedup();
        v
    }

    pub fn involves(&self, p: ParamName) -> bool {
        self.num.involves(p) || self.den.involves(p)
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Scalar::reduce(self.num.add(&other.num), self.den.clone());
        }
        if let (Some((m1, c1)), Some((m2, c2))) = (self.den.as_monomial(), other.den.as_monomial()) {
            let l = m1.lcm(m2);
            let a = self.num.mul_monomial(&l.div(m1)).scale(&c1.recip());
            let b = other.num.mul_monomial(&l.div(m2)).scale(&c2.recip());
            return Scalar::reduce(a.add(&b), MPoly::term(l, BigRational::one()));
        }
        Scalar::reduce(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar {
                num: self.num.mul(&other.num),
                den: MPoly::one(),
            };
        }
        Scalar::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(Scalar::reduce(base.num.pow(e), base.den.pow(e)))
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        Scalar::reduce(self.num.scale(q), self.den.clone())
    }

    /// Simultaneous substitution; unbound parameters pass through.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Scalar> {
        if bindings.is_empty() || !self.params().iter().any(|p| bindings.contains_key(p)) {
            return Ok(self.clone());
        }
        let num = eval_poly(&self.num, bindings)?;
        let den = eval_poly(&self.den, bindings)?;
        if den.is_zero() {
            return Err(Error::DenominatorVanishes(self.to_string()));
        }
        num.div(&den)
    }

    /// `lim_{t→0}` of the value, computed from the lowest `t`-degree
    /// coefficients of numerator and denominator.
    pub fn limit_at_zero(&self, t: ParamName) -> Result<Scalar> {
        if !self.involves(t) {
            return Ok(self.clone());
        }
        if self.num.is_zero() {
            return Ok(Scalar::zero());
        }
        let cn = self.num.coefficients_in(t);
        let cd = self.den.coefficients_in(t);
        let vn = cn.iter().position(|c| !c.is_zero()).expect("nonzero numerator");
        let vd = cd.iter().position(|c| !c.is_zero()).expect("nonzero denominator");
        match vn.cmp(&vd) {
            std::cmp::Ordering::Less => Err(Error::PoleAtZero {
                var: t.to_string(),
                context: format!(" in {self}"),
            }),
            std::cmp::Ordering::Greater => Ok(Scalar::zero()),
            std::cmp::Ordering::Equal => Scalar::new(cn[vn].clone(), cd[vd].clone()),
        }
    }

    /// Fully reduced numerator and denominator: gcd removed, denominator
    /// integer-primitive with positive grlex leading coefficient.
    pub fn canonical_parts(&self) -> (MPoly, MPoly) {
        if self.num.is_zero() {
            return (MPoly::zero(), MPoly::one());
        }
        let g = gcd(&self.num, &self.den);
        let mut n = self.num.exact_div(&g).expect("gcd divides numerator");
        let mut d = self.den.exact_div(&g).expect("gcd divides denominator");
        let mut c = d.rational_content();
        if d.leading_sign().is_lt() {
            c = -c;
        }
        let inv = c.recip();
        n = n.scale(&inv);
        d = d.scale(&inv);
        (n, d)
    }

    pub fn parse(src: &str) -> Result<Scalar> {
        from_expr(&expr::parse(src)?)
    }
}

fn eval_poly(p: &MPoly, bindings: &Bindings) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::from_rational(c.clone());
        for (v, e) in m.vars() {
            let base = bindings.get(&v).cloned().unwrap_or_else(|| Scalar::param(v));
            t = t.mul(&base.pow(e as i64)?);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// Evaluates a parsed expression whose identifiers are all parameters.
pub fn from_expr(e: &Expr) -> Result<Scalar> {
    Ok(match e {
        Expr::Int(n) => Scalar::from_rational(BigRational::from_integer(n.clone())),
        Expr::Ident { name, slot, col } => {
            if slot.is_some() {
                return Err(Error::syntax(1, *col, "slot tags are not allowed in scalars"));
            }
            Scalar::param(ParamName::new(name)?)
        }
        Expr::Neg(x) => from_expr(x)?.neg(),
        Expr::Add(a, b) => from_expr(a)?.add(&from_expr(b)?),
        Expr::Sub(a, b) => from_expr(a)?.sub(&from_expr(b)?),
        Expr::Mul(a, b) => from_expr(a)?.mul(&from_expr(b)?),
        Expr::Div(a, b) => from_expr(a)?.div(&from_expr(b)?)?,
        Expr::Pow(a, e) => from_expr(a)?.pow(*e)?,
    })
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

// Printing.

type LaurentTerm = (Vec<(ParamName, i64)>, BigRational);

fn laurent_cmp(a: &[(ParamName, i64)], b: &[(ParamName, i64)]) -> std::cmp::Ordering {
    let deg = |v: &[(ParamName, i64)]| v.iter().map(|(_, e)| *e).sum::<i64>();
    deg(a).cmp(&deg(b)).then_with(|| {
        let mut vars: Vec<ParamName> = a.iter().chain(b).map(|(p, _)| *p).collect();
        vars.sort();
        vars.dedup();
        for v in vars {
            let ea = a.iter().find(|(p, _)| *p == v).map_or(0, |(_, e)| *e);
            let eb = b.iter().find(|(p, _)| *p == v).map_or(0, |(_, e)| *e);
            if ea != eb {
                return ea.cmp(&eb);
            }
        }
        std::cmp::Ordering::Equal
    })
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_terms(terms: &[LaurentTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (mono, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let factors: Vec<String> = mono
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if factors.is_empty() {
            out.push_str(&fmt_rational(&a));
        } else {
            if !a.is_one() {
                out.push_str(&fmt_rational(&a));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

fn poly_terms(p: &MPoly, shift: &Monomial) -> Vec<LaurentTerm> {
    let mut v: Vec<LaurentTerm> = p
        .terms()
        .map(|(m, c)| {
            let mut exps: Vec<(ParamName, i64)> = m.vars().map(|(p, e)| (p, e as i64)).collect();
            for (p, e) in shift.vars() {
                match exps.iter_mut().find(|(q, _)| *q == p) {
                    Some(slot) => slot.1 -= e as i64,
                    None => exps.push((p, -(e as i64))),
                }
            }
            exps.retain(|(_, e)| *e != 0);
            exps.sort();
            (exps, c.clone())
        })
        .collect();
    v.sort_by(|a, b| laurent_cmp(&b.0, &a.0));
    v
}

impl Scalar {
    /// True when the printed form is a single signed term, so it needs no
    /// parentheses as a factor.
    pub fn is_single_term(&self) -> bool {
        let (n, d) = self.canonical_parts();
        n.len() <= 1 && d.as_monomial().is_some()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.canonical_parts();
        if let Some((m, _)) = d.as_monomial() {
            return f.write_str(&fmt_terms(&poly_terms(&n, m)));
        }
        let none = Monomial::one();
        let ns = fmt_terms(&poly_terms(&n, &none));
        let ds = fmt_terms(&poly_terms(&d, &none));
        let wrap = |s: String, multi: bool| if multi { format!("({s})") } else { s };
        write!(f, "{}/{}", wrap(ns, n.len() > 1), wrap(ds, d.len() > 1))
    }
}

/// Convenience for tests and data: integer as scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Rational constant `n/d`.
pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
}
