//! Multivariate polynomial gcd by recursion on the variables and primitive
//! pseudo-remainder sequences.
//!
//! Only canonical printing uses this; semantic equality of rational
//! functions is decided by cross-multiplication and never needs a gcd.

use super::{MPoly, ParamName};

/// Normalized gcd: integer coprime coefficients, positive grlex leading
/// coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    normalize(&gcd_raw(a, b))
}

fn normalize(p: &MPoly) -> MPoly {
    if p.is_zero() {
        return MPoly::zero();
    }
    let c = p.rational_content();
    let q = p.scale(&c.recip());
    if q.leading_sign().is_lt() {
        q.neg()
    } else {
        q
    }
}

fn gcd_raw(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return MPoly::one();
    }
    let (ma, mb) = (a.monomial_content(), b.monomial_content());
    let mono = ma.gcd(&mb);
    let a = a.div_monomial(&ma);
    let b = b.div_monomial(&mb);
    let common = MPoly::one().mul_monomial(&mono);
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return common;
    }

    let mut vars = a.params();
    vars.extend(b.params());
    vars.sort();
    let x = vars[0];

    if !a.involves(x) {
        return common.mul(&gcd_raw(&a, &content_in(&b, x)));
    }
    if !b.involves(x) {
        return common.mul(&gcd_raw(&content_in(&a, x), &b));
    }

    let ca = content_in(&a, x);
    let cb = content_in(&b, x);
    let pa = a.exact_div(&ca).expect("content divides polynomial");
    let pb = b.exact_div(&cb).expect("content divides polynomial");
    let c = gcd_raw(&ca, &cb);
    let g = primitive_prs(pa.coefficients_in(x), pb.coefficients_in(x));
    let g = MPoly::from_coefficients(x, &g);
    common.mul(&c).mul(&g)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
fn content_in(p: &MPoly, x: ParamName) -> MPoly {
    let mut acc = MPoly::zero();
    for c in p.coefficients_in(x) {
        if c.is_zero() {
            continue;
        }
        acc = normalize(&gcd_raw(&acc, &c));
        if acc.as_constant().is_some() {
            return MPoly::one();
        }
    }
    acc
}

fn degree(f: &[MPoly]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

fn trim(mut f: Vec<MPoly>) -> Vec<MPoly> {
    while f.last().is_some_and(MPoly::is_zero) {
        f.pop();
    }
    f
}

fn primitive_part(f: Vec<MPoly>) -> Vec<MPoly> {
    let mut cont = MPoly::zero();
    for c in f.iter().filter(|c| !c.is_zero()) {
        cont = normalize(&gcd_raw(&cont, c));
    }
    if cont.is_zero() {
        return f;
    }
    f.into_iter()
        .map(|c| c.exact_div(&cont).expect("content divides coefficient"))
        .collect()
}

fn prem(f: &[MPoly], g: &[MPoly]) -> Vec<MPoly> {
    let dg = degree(g).expect("nonzero divisor");
    let lg = g[dg].clone();
    let mut r = trim(f.to_vec());
    let Some(df) = degree(&r) else {
        return r;
    };
    if df < dg {
        return r;
    }
    let mut e = df - dg + 1;
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - dg;
        let mut next: Vec<MPoly> = r.iter().map(|c| c.mul(&lg)).collect();
        for (i, gc) in g.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&gc.mul(&lr));
        }
        r = trim(next);
        e -= 1;
    }
    if e > 0 {
        let factor = lg.pow(e as u32);
        r = r.into_iter().map(|c| c.mul(&factor)).collect();
    }
    r
}

fn primitive_prs(f: Vec<MPoly>, g: Vec<MPoly>) -> Vec<MPoly> {
    let (mut f, mut g) = (trim(f), trim(g));
    if degree(&f) < degree(&g) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if degree(&g).is_none() {
            return primitive_part(f);
        }
        let r = trim(prem(&f, &g));
        match degree(&r) {
            None => return primitive_part(g),
            Some(0) => return vec![MPoly::one()],
            Some(_) => {
                f = g;
                g = primitive_part(r);
            }
        }
    }
}
