use std::cmp::Ordering;

use smallvec::SmallVec;

use super::ParamName;

/// A power product of parameters, stored as `(variable, exponent)` pairs
/// sorted by variable with no zero exponents.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(SmallVec<[(u16, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(p: ParamName, exp: u32) -> Self {
        let mut m = Monomial::one();
        if exp > 0 {
            m.0.push((p.index(), exp));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, p: ParamName) -> u32 {
        self.0.iter().find(|(v, _)| *v == p.index()).map_or(0, |(_, e)| *e)
    }

    pub fn vars(&self) -> impl Iterator<Item = (ParamName, u32)> + '_ {
        self.0.iter().map(|(v, e)| (ParamName::from_index(*v), *e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| Some(a + b))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .all(|(v, e)| other.0.iter().find(|(w, _)| w == v).is_some_and(|(_, f)| f >= e))
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        let mut out = SmallVec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(ParamName::from_index(v));
            if e > f {
                out.push((v, e - f));
            }
        }
        Monomial(out)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(ParamName::from_index(v));
            let g = e.min(f);
            if g > 0 {
                out.push((v, g));
            }
        }
        Monomial(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| Some(a.max(b)))
    }

    /// Drops `p` from the monomial, returning its former exponent.
    pub fn without(&self, p: ParamName) -> (Monomial, u32) {
        let mut out = SmallVec::new();
        let mut exp = 0;
        for &(v, e) in &self.0 {
            if v == p.index() {
                exp = e;
            } else {
                out.push((v, e));
            }
        }
        (Monomial(out), exp)
    }

    fn merge(&self, other: &Monomial, f: impl Fn(u32, u32) -> Option<u32>) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let pick = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match pick {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    if let Some(e) = f(a[i].1, b[j].1).filter(|e| *e > 0) {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    /// Graded lexicographic comparison over parameter registration order.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex_cmp(&self.0, &other.0))
    }
}

fn lex_cmp(a: &[(u16, u32)], b: &[(u16, u32)]) -> Ordering {
    // Walks both sparse vectors; the first variable with differing exponent
    // decides, with the larger exponent on the earlier variable winning.
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(x), Some(y)) => {
                if x.0 < y.0 {
                    return Ordering::Greater;
                }
                if x.0 > y.0 {
                    return Ordering::Less;
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_prefers_degree_then_earlier_vars() {
        let r = ParamName::of("r");
        let s = ParamName::of("s");
        let r2 = Monomial::var(r, 2);
        let rs = Monomial::var(r, 1).mul(&Monomial::var(s, 1));
        let s3 = Monomial::var(s, 3);
        assert_eq!(r2.grlex_cmp(&rs), Ordering::Greater);
        assert_eq!(s3.grlex_cmp(&r2), Ordering::Greater);
        assert_eq!(Monomial::one().grlex_cmp(&Monomial::var(s, 1)), Ordering::Less);
    }

    #[test]
    fn gcd_lcm_divides() {
        let r = ParamName::of("r");
        let s = ParamName::of("s");
        let a = Monomial::var(r, 3).mul(&Monomial::var(s, 1));
        let b = Monomial::var(r, 1).mul(&Monomial::var(s, 2));
        assert_eq!(a.gcd(&b), Monomial::var(r, 1).mul(&Monomial::var(s, 1)));
        assert_eq!(a.lcm(&b), Monomial::var(r, 3).mul(&Monomial::var(s, 2)));
        assert!(a.gcd(&b).divides(&a));
        assert_eq!(a.div(&Monomial::var(r, 3)), Monomial::var(s, 1));
    }
}
