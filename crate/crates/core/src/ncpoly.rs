//! Noncommutative polynomials over [`Scalar`] in slot-tagged generators.
//!
//! Tensor powers `A`, `A⊗A`, `A⊗A⊗A` are one algebra over a slot-tagged
//! alphabet in which letters of different slots commute. Words are kept
//! slot-sorted, so the slot-`i` part of a word is a contiguous factor.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::scalar::{self, ParamName, Scalar};

/// Generator names in letter order: index 0 is the smallest letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        Arc::new(Alphabet {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    pub fn name(&self, gen: u8) -> &str {
        &self.names[gen as usize]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.index(name).map(|gen| Letter { slot: 1, gen })
    }
}

/// A generator in a tensor slot. Letters order by slot first, then by the
/// alphabet's letter order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub slot: u8,
    pub gen: u8,
}

impl Letter {
    pub fn new(gen: u8, slot: u8) -> Self {
        Letter { slot, gen }
    }

    pub fn in_slot(self, slot: u8) -> Self {
        Letter { slot, gen: self.gen }
    }
}

/// A monomial. Words compare degree-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub SmallVec<[Letter; 8]>);

impl Word {
    pub fn unit() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Word(letters.iter().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Sorts letters by slot, keeping the order within each slot.
    pub fn slot_sorted(mut self) -> Word {
        if self.0.windows(2).any(|w| w[0].slot > w[1].slot) {
            self.0.sort_by_key(|l| l.slot);
        }
        self
    }

    pub fn max_slot(&self) -> u8 {
        self.0.iter().map(|l| l.slot).max().unwrap_or(1)
    }

    pub fn render(&self, alphabet: &Alphabet, tagged: bool) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|l| {
                if tagged {
                    format!("{}@{}", alphabet.name(l.gen), l.slot)
                } else {
                    alphabet.name(l.gen).to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite linear combination of words.
pub type Terms = BTreeMap<Word, Scalar>;

pub(crate) fn add_into(terms: &mut Terms, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = e.get().add(&c);
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct NCPoly {
    alphabet: Arc<Alphabet>,
    terms: Terms,
}

impl NCPoly {
    pub fn zero(alphabet: &Arc<Alphabet>) -> Self {
        NCPoly {
            alphabet: alphabet.clone(),
            terms: Terms::new(),
        }
    }

    pub fn one(alphabet: &Arc<Alphabet>) -> Self {
        NCPoly::scalar(alphabet, Scalar::one())
    }

    pub fn scalar(alphabet: &Arc<Alphabet>, c: Scalar) -> Self {
        let mut p = NCPoly::zero(alphabet);
        add_into(&mut p.terms, Word::unit(), c);
        p
    }

    pub fn letter(alphabet: &Arc<Alphabet>, l: Letter) -> Self {
        NCPoly::monomial(alphabet, Word::from_letters(&[l]), Scalar::one())
    }

    /// Generator `name` in slot 1; panics if the alphabet lacks it.
    pub fn gen(alphabet: &Arc<Alphabet>, name: &str) -> Self {
        let l = alphabet.letter(name).unwrap_or_else(|| panic!("no generator `{name}`"));
        NCPoly::letter(alphabet, l)
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, w: Word, c: Scalar) -> Self {
        let mut p = NCPoly::zero(alphabet);
        add_into(&mut p.terms, w.slot_sorted(), c);
        p
    }

    pub fn from_terms(alphabet: &Arc<Alphabet>, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut p = NCPoly::zero(alphabet);
        for (w, c) in terms {
            add_into(&mut p.terms, w.slot_sorted(), c);
        }
        p
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Leading (largest) word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().map(Word::len)
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.degrees().all(|d| d == degree)
    }

    pub fn max_slot(&self) -> u8 {
        self.terms.keys().map(Word::max_slot).max().unwrap_or(1)
    }

    fn same_alphabet(&self, other: &NCPoly) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        assert!(self.same_alphabet(other), "alphabet mismatch");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_into(&mut out.terms, w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero(&self.alphabet);
        }
        NCPoly {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d.mul(c))).collect(),
        }
    }

    /// Bilinear concatenation product with slot commutation.
    pub fn nc_mul(&self, other: &NCPoly) -> Result<NCPoly> {
        if !self.same_alphabet(other) {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = NCPoly::zero(&self.alphabet);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                add_into(&mut out.terms, u.concat(v).slot_sorted(), a.mul(b));
            }
        }
        Ok(out)
    }

    /// Product, panicking on an alphabet mismatch.
    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        self.nc_mul(other).expect("alphabet mismatch")
    }

    pub fn pow(&self, e: u32) -> NCPoly {
        (0..e).fold(NCPoly::one(&self.alphabet), |acc, _| acc.mul(self))
    }

    /// Commutator `[x, y] = xy - yx`.
    pub fn commutator(&self, other: &NCPoly) -> NCPoly {
        self.mul(other).sub(&other.mul(self))
    }

    /// Retags every letter of a slot-1 polynomial into `slot`.
    pub fn embed_slot(&self, slot: u8) -> NCPoly {
        debug_assert!(self.max_slot() <= 1, "embed_slot expects a slot-1 polynomial");
        self.map_letters(|l| l.in_slot(slot))
    }

    /// Applies a letter renaming (an algebra map sending letters to letters).
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> NCPoly {
        NCPoly::from_terms(
            &self.alphabet,
            self.terms
                .iter()
                .map(|(w, c)| (Word(w.0.iter().map(|l| f(*l)).collect()), c.clone())),
        )
    }

    /// Maps scalar coefficients, e.g. to specialise parameters.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<NCPoly> {
        let mut out = NCPoly::zero(&self.alphabet);
        for (w, c) in &self.terms {
            add_into(&mut out.terms, w.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn substitute(&self, bindings: &scalar::Bindings) -> Result<NCPoly> {
        self.map_coeffs(|c| c.substitute(bindings))
    }

    /// The unique algebra map extending the given letter images.
    pub fn apply_generator_map(&self, images: &BTreeMap<Letter, NCPoly>) -> Result<NCPoly> {
        let target = images
            .values()
            .next()
            .map_or_else(|| self.alphabet.clone(), |p| p.alphabet.clone());
        let mut out = NCPoly::zero(&target);
        for (w, c) in &self.terms {
            let mut acc = NCPoly::scalar(&target, c.clone());
            for l in w.letters() {
                let img = images
                    .get(l)
                    .ok_or_else(|| Error::MissingImage(format!("{}@{}", self.alphabet.name(l.gen), l.slot)))?;
                acc = acc.nc_mul(img)?;
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let tagged = self.max_slot() > 1;
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let word = if w.is_empty() {
                None
            } else {
                Some(w.render(&self.alphabet, tagged))
            };
            let (neg, coeff) = split_sign(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (word, coeff) {
                (None, c) => out.push_str(&c.unwrap_or_else(|| "1".into())),
                (Some(w), None) => out.push_str(&w),
                (Some(w), Some(c)) => {
                    out.push_str(&c);
                    out.push('*');
                    out.push_str(&w);
                }
            }
        }
        out
    }

    /// Parses an element written in the shared expression grammar.
    /// Identifiers that name generators become letters; the others must be
    /// in `params`, or, when `params` is `None`, are taken as parameters.
    pub fn parse(alphabet: &Arc<Alphabet>, params: Option<&[ParamName]>, src: &str) -> Result<NCPoly> {
        let e = expr::parse(src)?;
        from_expr(alphabet, params, &e, 1)
    }
}

/// Splits a coefficient into sign and printable magnitude (`None` for 1).
fn split_sign(c: &Scalar) -> (bool, Option<String>) {
    if c.is_single_term() {
        let s = c.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        if mag == "1" {
            (neg, None)
        } else {
            (neg, Some(mag))
        }
    } else {
        (false, Some(format!("({c})")))
    }
}

pub(crate) fn from_expr(
    alphabet: &Arc<Alphabet>,
    params: Option<&[ParamName]>,
    e: &Expr,
    line: usize,
) -> Result<NCPoly> {
    let rec = |x: &Expr| from_expr(alphabet, params, x, line);
    Ok(match e {
        Expr::Int(_) => NCPoly::scalar(alphabet, scalar::from_expr(e)?),
        Expr::Ident { name, slot, col } => {
            if let Some(g) = alphabet.index(name) {
                NCPoly::letter(alphabet, Letter::new(g, slot.unwrap_or(1)))
            } else {
                let is_param = match params {
                    Some(ps) => ps.iter().any(|p| p.as_str() == name),
                    None => crate::scalar::ParamName::new(name).is_ok(),
                };
                if !is_param || slot.is_some() {
                    return Err(Error::UnknownGenerator {
                        name: name.clone(),
                        line,
                        col: *col,
                    });
                }
                NCPoly::scalar(alphabet, Scalar::param(ParamName::new(name)?))
            }
        }
        Expr::Neg(x) => rec(x)?.neg(),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.nc_mul(&rec(b)?)?,
        Expr::Div(a, b) => {
            let d = rec(b)?;
            let c = as_scalar(&d).ok_or_else(|| Error::syntax(line, 0, "division by a non-scalar"))?;
            rec(a)?.scale(&c.inv()?)
        }
        Expr::Pow(a, k) => {
            let base = rec(a)?;
            match as_scalar(&base) {
                Some(c) => NCPoly::scalar(alphabet, c.pow(*k)?),
                None if *k >= 0 => base.pow(*k as u32),
                None => return Err(Error::syntax(line, 0, "negative power of a generator")),
            }
        }
    })
}

fn as_scalar(p: &NCPoly) -> Option<Scalar> {
    match p.terms.len() {
        0 => Some(Scalar::zero()),
        1 => p
            .terms
            .iter()
            .next()
            .filter(|(w, _)| w.is_empty())
            .map(|(_, c)| c.clone()),
        _ => None,
    }
}

impl NCPoly {
    /// The constant term value if the polynomial is a scalar multiple of 1.
    pub fn as_scalar(&self) -> Option<Scalar> {
        as_scalar(self)
    }
}

impl PartialEq for NCPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_alphabet(other) && self.terms == other.terms
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Arc<Alphabet> {
        Alphabet::new(&["a", "b", "c", "d", "f"])
    }

    fn p(al: &Arc<Alphabet>, s: &str) -> NCPoly {
        NCPoly::parse(al, None, s).unwrap()
    }

    #[test]
    fn product_is_concatenation() {
        let al = abc();
        let x = NCPoly::gen(&al, "a").mul(&NCPoly::gen(&al, "d"));
        assert_eq!(x.render(), "a*d");
        assert_eq!(x.len(), 1);
    }

    #[test]
    fn cross_slot_letters_commute() {
        let al = abc();
        let a1 = p(&al, "a@1");
        let c2 = p(&al, "c@2");
        assert_eq!(c2.mul(&a1), a1.mul(&c2));
        assert_eq!(a1.mul(&c2).render(), "a@1*c@2");
    }

    #[test]
    fn bilinearity() {
        let al = abc();
        let d = p(&al, "a*d - r^-1*b*c");
        let got = d.mul(&NCPoly::gen(&al, "f"));
        assert_eq!(got, p(&al, "a*d*f - r^-1*b*c*f"));
    }

    #[test]
    fn embedding() {
        let al = abc();
        assert_eq!(p(&al, "a").embed_slot(2), p(&al, "a@2"));
        assert_eq!(p(&al, "a*d").embed_slot(2), p(&al, "a@2*d@2"));
        let d = p(&al, "a*d - r^-1*b*c");
        assert_eq!(
            d.embed_slot(2).mul(&d.embed_slot(1)),
            d.embed_slot(1).mul(&d.embed_slot(2))
        );
    }

    #[test]
    fn generator_maps() {
        let al = abc();
        let f = NCPoly::gen(&al, "f");
        let mut images = BTreeMap::new();
        for g in ["a", "b", "c", "d"] {
            images.insert(al.letter(g).unwrap(), f.mul(&NCPoly::gen(&al, g)));
        }
        images.insert(al.letter("f").unwrap(), f.clone());
        assert_eq!(p(&al, "a*b").apply_generator_map(&images).unwrap(), p(&al, "f*a*f*b"));
        assert_eq!(NCPoly::one(&al).apply_generator_map(&images).unwrap(), NCPoly::one(&al));
        let d = p(&al, "a*d - r^-1*b*c");
        let id: BTreeMap<_, _> = ["a", "b", "c", "d", "f"]
            .iter()
            .map(|g| (al.letter(g).unwrap(), NCPoly::gen(&al, g)))
            .collect();
        assert_eq!(d.apply_generator_map(&id).unwrap(), d);
        images.remove(&al.letter("b").unwrap());
        assert!(matches!(
            p(&al, "a*b").apply_generator_map(&images),
            Err(Error::MissingImage(_))
        ));
    }

    #[test]
    fn mismatched_alphabets() {
        let a = NCPoly::gen(&abc(), "a");
        let b = NCPoly::gen(&Alphabet::new(&["a", "x"]), "a");
        assert!(matches!(a.nc_mul(&b), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn rendering() {
        let al = Alphabet::new(&["c", "a", "d", "b", "f"]);
        assert_eq!(p(&al, "c*d - m*c*c").render(), "c*d - m*c*c");
        assert_eq!(p(&al, "(r - r^-1)*b*c + 2").render(), "(r - r^-1)*b*c + 2");
        assert_eq!(p(&al, "-k*c*f").render(), "-k*c*f");
        assert_eq!(NCPoly::zero(&al).render(), "0");
    }

    #[test]
    fn unknown_identifier_with_param_list() {
        let al = abc();
        let ps = [ParamName::of("r")];
        assert!(NCPoly::parse(&al, Some(&ps), "r*a").is_ok());
        assert!(matches!(
            NCPoly::parse(&al, Some(&ps), "x*a"),
            Err(Error::UnknownGenerator { .. })
        ));
    }
}
