//! Algebra presentations: generators in letter order, parameters and
//! defining relations, oriented into a rewrite system.

mod catalog;
mod dsl;

use std::fmt::Write as _;
use std::sync::Arc;

pub use catalog::{catalog, catalog_from, central_candidates, hopf_data, HopfData, NamedElement, CATALOG_NAMES};
pub use dsl::parse_presentation;

use crate::error::{Error, Result};
use crate::ncpoly::{Alphabet, NCPoly};
use crate::report::CheckReport;
use crate::rewrite::{RewriteRule, RewriteSystem};
use crate::scalar::{Bindings, ParamName};

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub lhs: NCPoly,
    pub rhs: NCPoly,
}

impl Relation {
    /// `lhs - rhs`.
    pub fn difference(&self) -> NCPoly {
        self.lhs.sub(&self.rhs)
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    name: String,
    params: Vec<ParamName>,
    generators: Vec<String>,
    /// `(generator, inverse letter)` pairs.
    inverses: Vec<(String, String)>,
    alphabet: Arc<Alphabet>,
    relations: Vec<Relation>,
    system: RewriteSystem,
}

/// Orients `lhs = rhs` as `W -> ...` with `W` the largest word of the
/// difference.
pub fn orient(diff: &NCPoly) -> Result<RewriteRule> {
    let (w, c) = diff
        .leading()
        .ok_or_else(|| Error::NonDecreasingRule("relation is trivially 0 = 0".into()))?;
    if w.len() < 2 {
        return Err(Error::NonDecreasingRule(format!(
            "`{}`: leading word has fewer than two letters",
            diff.render()
        )));
    }
    let lead = NCPoly::monomial(diff.alphabet(), w.clone(), c.clone());
    let rest = diff.sub(&lead);
    let rhs = rest.scale(&c.inv()?.neg());
    Ok(RewriteRule { lhs: w.clone(), rhs })
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        params: Vec<ParamName>,
        generators: Vec<String>,
        inverses: Vec<(String, String)>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        let mut letters = generators.clone();
        letters.extend(inverses.iter().map(|(_, i)| i.clone()));
        let alphabet = Alphabet::new(&letters);
        Presentation::with_alphabet(name.into(), params, generators, inverses, alphabet, relations)
    }

    fn with_alphabet(
        name: String,
        params: Vec<ParamName>,
        generators: Vec<String>,
        inverses: Vec<(String, String)>,
        alphabet: Arc<Alphabet>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        let rules = relations
            .iter()
            .map(|r| orient(&r.difference()))
            .collect::<Result<Vec<_>>>()?;
        let system = RewriteSystem::new(&alphabet, rules)?;
        Ok(Presentation {
            name,
            params,
            generators,
            inverses,
            alphabet,
            relations,
            system,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[ParamName] {
        &self.params
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn inverses(&self) -> &[(String, String)] {
        &self.inverses
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn rewrite_system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    fn is_inverse_letter(&self, gen: u8) -> bool {
        let name = self.alphabet.name(gen);
        self.inverses.iter().any(|(_, i)| i == name)
    }

    fn touches_inverse(&self, p: &NCPoly) -> bool {
        p.terms()
            .keys()
            .any(|w| w.letters().iter().any(|l| self.is_inverse_letter(l.gen)))
    }

    /// Relations that do not involve formal inverse letters.
    pub fn core_relations(&self) -> Vec<&Relation> {
        self.relations
            .iter()
            .filter(|r| !self.touches_inverse(&r.difference()))
            .collect()
    }

    /// Relations that involve formal inverse letters.
    pub fn inverse_relations(&self) -> Vec<&Relation> {
        self.relations
            .iter()
            .filter(|r| self.touches_inverse(&r.difference()))
            .collect()
    }

    pub fn element(&self, src: &str) -> Result<NCPoly> {
        NCPoly::parse(&self.alphabet, Some(&self.params), src)
    }

    pub fn gen(&self, name: &str) -> NCPoly {
        NCPoly::gen(&self.alphabet, name)
    }

    pub fn normalize(&self, x: &NCPoly) -> Result<NCPoly> {
        self.system.normalize(x)
    }

    /// Core relations are all homogeneous of degree 2.
    pub fn check_quadratic(&self) -> CheckReport {
        let mut rep = CheckReport::new("quadratic", &self.name);
        for (i, r) in self.core_relations().into_iter().enumerate() {
            let d = r.difference();
            if !d.is_homogeneous(2) {
                rep.fail(format!("relation {}", i + 1), d.render());
            }
        }
        rep
    }

    /// Specialises parameters, dropping relations that become `0 = 0`.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Presentation> {
        let mut relations = Vec::new();
        for r in &self.relations {
            let rel = Relation {
                lhs: r.lhs.substitute(bindings)?,
                rhs: r.rhs.substitute(bindings)?,
            };
            if !rel.difference().is_zero() {
                relations.push(rel);
            }
        }
        let mut params: Vec<ParamName> = Vec::new();
        for p in &self.params {
            match bindings.get(p) {
                None => params.push(*p),
                Some(v) => params.extend(v.params()),
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        params.retain(|p| seen.insert(*p));
        Presentation::with_alphabet(
            self.name.clone(),
            params,
            self.generators.clone(),
            self.inverses.clone(),
            self.alphabet.clone(),
            relations,
        )
    }

    /// Renders the presentation in the DSL; the output parses back to an
    /// equal presentation.
    pub fn to_dsl(&self) -> String {
        let mut s = String::new();
        writeln!(s, "algebra {}", self.name).unwrap();
        if !self.params.is_empty() {
            let ps: Vec<&str> = self.params.iter().map(|p| p.as_str()).collect();
            writeln!(s, "params {}", ps.join(" ")).unwrap();
        }
        writeln!(s, "gens {}", self.generators.join(" < ")).unwrap();
        for (g, _) in &self.inverses {
            writeln!(s, "inv {g}").unwrap();
        }
        for r in &self.relations {
            writeln!(s, "rel {} = {}", r.lhs.render(), r.rhs.render()).unwrap();
        }
        s
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.params == other.params
            && self.generators == other.generators
            && self.inverses == other.inverses
            && self.system.rules().len() == other.system.rules().len()
            && self
                .system
                .rules()
                .iter()
                .zip(other.system.rules())
                .all(|(a, b)| a.lhs == b.lhs && a.rhs.terms() == b.rhs.terms())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    fn gmk() -> Presentation {
        catalog("Gmk").unwrap()
    }

    #[test]
    fn catalog_sizes() {
        let grs = catalog("Grs").unwrap();
        assert_eq!(grs.generators().len(), 5);
        assert_eq!(grs.core_relations().len(), 10);
        assert_eq!(grs.inverse_relations().len(), 6);
        assert_eq!(grs.params(), &[ParamName::of("r"), ParamName::of("s")]);
        let g = gmk();
        assert_eq!(g.core_relations().len(), 10);
        assert_eq!(catalog("GLr2").unwrap().relations().len(), 6);
        assert_eq!(catalog("glh2").unwrap().relations().len(), 6);
        assert!(matches!(catalog("sl3"), Err(Error::UnknownPresentation(_))));
    }

    #[test]
    fn catalog_relations_hold_in_normal_form() {
        for name in CATALOG_NAMES {
            let p = catalog(name).unwrap();
            for r in p.relations() {
                assert!(p.normalize(&r.difference()).unwrap().is_zero(), "{name}: {:?}", r);
            }
            assert!(p.check_quadratic().passed(), "{name}");
        }
    }

    #[test]
    fn grs_contains_db_rule() {
        let grs = catalog("Grs").unwrap();
        let x = grs.element("d*b - r*b*d").unwrap();
        assert!(grs.normalize(&x).unwrap().is_zero());
    }

    #[test]
    fn gmk_contains_fa_rule() {
        let g = gmk();
        let x = g.element("f*a - a*f - k*c*f").unwrap();
        assert!(g.normalize(&x).unwrap().is_zero());
    }

    #[test]
    fn normal_form_examples() {
        let grs = catalog("Grs").unwrap();
        let n = |p: &Presentation, s: &str| p.normalize(&p.element(s).unwrap()).unwrap();
        assert_eq!(n(&grs, "c*a"), grs.element("r*a*c").unwrap());
        assert_eq!(n(&grs, "d*a"), grs.element("a*d + (r - r^-1)*b*c").unwrap());
        let g = gmk();
        assert_eq!(n(&g, "d*c"), g.element("c*d - m*c*c").unwrap());
        assert_eq!(n(&g, "f*d"), g.element("d*f - k*c*f").unwrap());
        assert_eq!(n(&g, "d*c").render(), "c*d - m*c*c");
    }

    #[test]
    fn k_zero_makes_f_central() {
        let mut b = Bindings::new();
        b.insert(ParamName::of("k"), Scalar::zero());
        let g0 = gmk().substitute(&b).unwrap();
        for x in ["a", "b", "c", "d"] {
            let comm = g0.gen("f").commutator(&g0.gen(x));
            assert!(g0.normalize(&comm).unwrap().is_zero(), "{x}");
        }
        assert_eq!(g0.params(), &[ParamName::of("m")]);
    }

    #[test]
    fn subsystems_match_two_by_two_catalogs() {
        let render = |rules: Vec<&RewriteRule>| -> Vec<String> {
            let mut v: Vec<String> = rules.iter().map(|r| r.render()).collect();
            v.sort();
            v
        };
        let grs = catalog("Grs").unwrap();
        let glr2 = catalog("GLr2").unwrap();
        assert_eq!(
            render(grs.rewrite_system().restricted_rules(&[0, 1, 2, 3])),
            render(glr2.rewrite_system().rules().iter().collect())
        );
        let mut b = Bindings::new();
        b.insert(ParamName::of("h"), Scalar::var("m"));
        let glh2 = catalog("GLh2").unwrap().substitute(&b).unwrap();
        assert_eq!(
            render(gmk().rewrite_system().restricted_rules(&[0, 1, 2, 3])),
            render(glh2.rewrite_system().rules().iter().collect())
        );
    }

    #[test]
    fn orientation_rejects_short_leading_words() {
        let al = Alphabet::new(&["a", "b"]);
        let d = NCPoly::parse(&al, None, "a - b").unwrap();
        assert!(matches!(orient(&d), Err(Error::NonDecreasingRule(_))));
    }
}
