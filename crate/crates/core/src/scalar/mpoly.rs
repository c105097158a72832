use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, ParamName};

/// A commutative polynomial in the deformation parameters with exact
/// rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        MPoly::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        MPoly::constant(BigRational::from_integer(n.into()))
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn var(p: ParamName) -> Self {
        MPoly::term(Monomial::var(p, 1), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The constant value, if the polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, p: ParamName) -> u32 {
        self.terms.keys().map(|m| m.exponent(p)).max().unwrap_or(0)
    }

    pub fn involves(&self, p: ParamName) -> bool {
        self.terms.keys().any(|m| m.exponent(p) > 0)
    }

    pub fn params(&self) -> Vec<ParamName> {
        let mut out: Vec<ParamName> = self
            .terms
            .keys()
            .flat_map(|m| m.vars().map(|(p, _)| p).collect::<Vec<_>>())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Leading term under graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    /// Terms sorted by decreasing graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        }
    }

    /// Divides every term by `m`, assuming `m` divides each of them.
    pub fn div_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(n, c)| (n.div(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Greatest common monomial factor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    /// The positive rational `c` with `self / c` having coprime integer
    /// coefficients.
    pub fn rational_content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return BigRational::one();
        }
        BigRational::new(num, den)
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if let Some((m, c)) = divisor.as_monomial() {
            if self.terms.keys().all(|n| m.divides(n)) {
                return Some(self.div_monomial(m).scale(&c.recip()));
            }
            return None;
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((rm, rc)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&lm);
            let qc = rc / &lc;
            rem = rem.sub(&divisor.mul_monomial(&qm).scale(&qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients as a polynomial in `p`: index `i` holds the coefficient
    /// of `p^i`.
    pub fn coefficients_in(&self, p: ParamName) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.degree_in(p) as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(p);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coefficients(p: ParamName, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let pm = Monomial::var(p, i as u32);
            for (m, k) in &c.terms {
                out.add_term(m.mul(&pm), k.clone());
            }
        }
        out
    }

    /// Sign of the leading coefficient under grlex.
    pub fn leading_sign(&self) -> Ordering {
        match self.leading_term() {
            None => Ordering::Equal,
            Some((_, c)) if c.is_negative() => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> MPoly {
        MPoly::var(ParamName::of("r"))
    }
    fn s() -> MPoly {
        MPoly::var(ParamName::of("s"))
    }

    #[test]
    fn exact_division_works_and_detects_remainders() {
        let a = r().add(&s());
        let b = r().sub(&s());
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.add(&MPoly::one()).exact_div(&a), None);
    }

    #[test]
    fn coefficients_roundtrip() {
        let p = ParamName::of("r");
        let x = r().pow(3).add(&r().mul(&s())).add(&MPoly::from_int(7));
        let cs = x.coefficients_in(p);
        assert_eq!(cs.len(), 4);
        assert_eq!(cs[1], s());
        assert_eq!(MPoly::from_coefficients(p, &cs), x);
    }

    #[test]
    fn content() {
        let x = r()
            .scale(&BigRational::new(4.into(), 3.into()))
            .add(&s().scale(&BigRational::new(2.into(), 9.into())));
        assert_eq!(x.rational_content(), BigRational::new(2.into(), 9.into()));
        let y = r().pow(2).mul(&s()).add(&r().mul(&s().pow(3)));
        assert_eq!(
            y.monomial_content(),
            Monomial::var(ParamName::of("r"), 1).mul(&Monomial::var(ParamName::of("s"), 1))
        );
    }
}
