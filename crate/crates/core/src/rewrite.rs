//! Oriented rewriting of words to normal form, with validation of the term
//! order and overlap (local confluence) checking.
//!
//! The term order is degree-lexicographic over the letter order, where a
//! letter's rank is `(slot, position in the alphabet)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ncpoly::{add_into, Alphabet, Letter, NCPoly, Terms, Word};
use crate::report::CheckReport;

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

impl RewriteRule {
    pub fn render(&self) -> String {
        let tagged = self.lhs.max_slot() > 1 || self.rhs.max_slot() > 1;
        format!(
            "{} -> {}",
            self.lhs.render(self.rhs.alphabet(), tagged),
            self.rhs.render()
        )
    }

    /// True when every word on the right is strictly below the left side.
    pub fn is_decreasing(&self) -> bool {
        self.rhs.terms().keys().all(|w| *w < self.lhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostInnermost,
    RightmostInnermost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub word: String,
    pub rule: usize,
    pub position: usize,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    alphabet: Arc<Alphabet>,
    rules: Vec<RewriteRule>,
    by_first: HashMap<Letter, Vec<usize>>,
    step_limit: usize,
    slots: u8,
}

impl RewriteSystem {
    /// Builds a system; rejects duplicate left-hand sides and left-hand sides
    /// shorter than two letters. Orientation is not validated here, see
    /// [`RewriteSystem::check_termination_order`].
    pub fn new(alphabet: &Arc<Alphabet>, rules: Vec<RewriteRule>) -> Result<Self> {
        let mut by_first: HashMap<Letter, Vec<usize>> = HashMap::new();
        let mut seen = BTreeMap::new();
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.len() < 2 {
                return Err(Error::NonDecreasingRule(format!(
                    "left side `{}` is shorter than two letters",
                    r.lhs.render(alphabet, false)
                )));
            }
            if seen.insert(r.lhs.clone(), i).is_some() {
                return Err(Error::NonDecreasingRule(format!(
                    "two rules share the left side `{}`",
                    r.lhs.render(alphabet, r.lhs.max_slot() > 1)
                )));
            }
            by_first.entry(r.lhs.letters()[0]).or_default().push(i);
        }
        let slots = rules
            .iter()
            .map(|r| r.lhs.max_slot().max(r.rhs.max_slot()))
            .max()
            .unwrap_or(1);
        Ok(RewriteSystem {
            alphabet: alphabet.clone(),
            rules,
            by_first,
            step_limit: DEFAULT_STEP_LIMIT,
            slots,
        })
    }

    pub fn with_step_limit(mut self, limit: usize) -> Self {
        self.step_limit = limit;
        self
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn slots(&self) -> u8 {
        self.slots
    }

    pub fn rule_for(&self, lhs: &Word) -> Option<&RewriteRule> {
        self.by_first
            .get(&lhs.letters()[0])?
            .iter()
            .map(|&i| &self.rules[i])
            .find(|r| r.lhs == *lhs)
    }

    fn match_at(&self, w: &Word, pos: usize) -> Option<usize> {
        let letters = w.letters();
        self.by_first.get(&letters[pos])?.iter().copied().find(|&i| {
            let lhs = self.rules[i].lhs.letters();
            letters.len() - pos >= lhs.len() && letters[pos..pos + lhs.len()] == *lhs
        })
    }

    /// Locates a redex: `(rule index, start position)`.
    pub fn find_redex(&self, w: &Word, strategy: Strategy) -> Option<(usize, usize)> {
        let n = w.len();
        match strategy {
            Strategy::LeftmostInnermost => (0..n).find_map(|p| self.match_at(w, p).map(|r| (r, p))),
            Strategy::RightmostInnermost => (0..n).rev().find_map(|p| self.match_at(w, p).map(|r| (r, p))),
        }
    }

    fn apply(&self, w: &Word, rule: usize, pos: usize) -> impl Iterator<Item = (Word, &crate::Scalar)> + '_ {
        let letters = w.letters().to_vec();
        let len = self.rules[rule].lhs.len();
        self.rules[rule].rhs.terms().iter().map(move |(rw, rc)| {
            let mut v: smallvec::SmallVec<[Letter; 8]> = letters[..pos].iter().copied().collect();
            v.extend_from_slice(rw.letters());
            v.extend_from_slice(&letters[pos + len..]);
            (Word(v), rc)
        })
    }

    /// Rewrites a linear combination of (not necessarily slot-sorted) words
    /// to normal form. The largest pending word is always processed next,
    /// so every word is reduced at most once.
    pub fn reduce_terms(
        &self,
        input: Terms,
        strategy: Strategy,
        mut trace: Option<&mut Vec<TraceStep>>,
    ) -> Result<Terms> {
        let mut pending = input;
        let mut done = Terms::new();
        let mut steps = 0usize;
        while let Some((w, c)) = pending.pop_last() {
            match self.find_redex(&w, strategy) {
                None => add_into(&mut done, w, c),
                Some((rule, pos)) => {
                    steps += 1;
                    if steps > self.step_limit {
                        return Err(Error::NonTerminatingGuard(self.step_limit));
                    }
                    if let Some(t) = trace.as_deref_mut() {
                        t.push(TraceStep {
                            word: w.render(&self.alphabet, self.slots > 1),
                            rule,
                            position: pos,
                        });
                    }
                    for (nw, rc) in self.apply(&w, rule, pos) {
                        add_into(&mut pending, nw, c.mul(rc));
                    }
                }
            }
        }
        Ok(done)
    }

    pub fn normalize(&self, x: &NCPoly) -> Result<NCPoly> {
        self.normalize_with(x, Strategy::default(), None)
    }

    pub fn normalize_with(&self, x: &NCPoly, strategy: Strategy, trace: Option<&mut Vec<TraceStep>>) -> Result<NCPoly> {
        let terms = self.reduce_terms(x.terms().clone(), strategy, trace)?;
        Ok(NCPoly::from_terms(&self.alphabet, terms))
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.find_redex(w, Strategy::LeftmostInnermost).is_none()
    }

    /// The system on `n` tensor slots: a slot-tagged copy of every rule plus
    /// commutation rules `x@j * y@i -> y@i * x@j` for `i < j`.
    pub fn tensor_power(&self, n: u8) -> RewriteSystem {
        assert!(self.slots == 1, "tensor_power expects a one-slot system");
        let mut rules = Vec::new();
        for slot in 1..=n {
            for r in &self.rules {
                rules.push(RewriteRule {
                    lhs: Word(r.lhs.letters().iter().map(|l| l.in_slot(slot)).collect()),
                    rhs: r.rhs.embed_slot(slot),
                });
            }
        }
        let g = self.alphabet.len() as u8;
        for i in 1..=n {
            for j in (i + 1)..=n {
                for x in 0..g {
                    for y in 0..g {
                        let (hi, lo) = (Letter::new(x, j), Letter::new(y, i));
                        rules.push(RewriteRule {
                            lhs: Word::from_letters(&[hi, lo]),
                            rhs: NCPoly::monomial(&self.alphabet, Word::from_letters(&[lo, hi]), crate::Scalar::one()),
                        });
                    }
                }
            }
        }
        RewriteSystem::new(&self.alphabet, rules)
            .expect("tagged rules are distinct")
            .with_step_limit(self.step_limit)
    }

    /// Passes iff every rule is strictly deglex-decreasing.
    pub fn check_termination_order(&self, subject: &str) -> CheckReport {
        let start = Instant::now();
        let mut rep = CheckReport::new("termination", subject);
        for (i, r) in self.rules.iter().enumerate() {
            if !r.is_decreasing() {
                rep.fail(format!("rule {}", i + 1), r.render());
            }
        }
        rep.derive("rules", self.rules.len().to_string());
        rep.timed(start)
    }

    /// All overlap and inclusion ambiguities between rule left sides.
    pub fn ambiguities(&self) -> Vec<Ambiguity> {
        let mut out = Vec::new();
        for (i, ri) in self.rules.iter().enumerate() {
            let li = ri.lhs.letters();
            for (j, rj) in self.rules.iter().enumerate() {
                let lj = rj.lhs.letters();
                // suffix of li equals prefix of lj
                for k in 1..li.len().min(lj.len()) {
                    if li[li.len() - k..] == lj[..k] {
                        let mut w = ri.lhs.0.clone();
                        w.extend_from_slice(&lj[k..]);
                        out.push(Ambiguity {
                            word: Word(w),
                            first: (i, 0),
                            second: (j, li.len() - k),
                        });
                    }
                }
                if i != j && lj.len() < li.len() {
                    for p in 0..=li.len() - lj.len() {
                        if li[p..p + lj.len()] == *lj {
                            out.push(Ambiguity {
                                word: ri.lhs.clone(),
                                first: (i, 0),
                                second: (j, p),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Reduces one ambiguity both ways; `Ok(None)` when it resolves.
    pub fn resolve(&self, a: &Ambiguity) -> Result<Option<(NCPoly, NCPoly)>> {
        let one_way = |(rule, pos): (usize, usize)| -> Result<Terms> {
            let mut t = Terms::new();
            for (w, c) in self.apply(&a.word, rule, pos) {
                add_into(&mut t, w, c.clone());
            }
            self.reduce_terms(t, Strategy::LeftmostInnermost, None)
        };
        let x = one_way(a.first)?;
        let y = one_way(a.second)?;
        if x == y {
            Ok(None)
        } else {
            Ok(Some((
                NCPoly::from_terms(&self.alphabet, x),
                NCPoly::from_terms(&self.alphabet, y),
            )))
        }
    }

    pub fn check_local_confluence(&self, subject: &str) -> CheckReport {
        self.check_local_confluence_with(subject, Exec::default())
    }

    pub fn check_local_confluence_with(&self, subject: &str, exec: Exec) -> CheckReport {
        let start = Instant::now();
        let mut rep = CheckReport::new("confluence", subject);
        let amb = self.ambiguities();
        let tagged = self.slots > 1;
        let results = exec.map(&amb, |a| self.resolve(a));
        for (a, res) in amb.iter().zip(results) {
            let loc = a.word.render(&self.alphabet, tagged);
            match res {
                Ok(None) => {}
                Ok(Some((x, y))) => rep.fail(loc, format!("{x}  vs  {}", y)),
                Err(e) => rep.fail(loc, e.to_string()),
            }
        }
        rep.derive("ambiguities", amb.len().to_string());
        rep.timed(start)
    }

    /// Rules whose letters all lie in `gens` (slot-1 systems only).
    pub fn restricted_rules(&self, gens: &[u8]) -> Vec<&RewriteRule> {
        let inside = |w: &Word| w.letters().iter().all(|l| gens.contains(&l.gen));
        self.rules
            .iter()
            .filter(|r| inside(&r.lhs) && r.rhs.terms().keys().all(inside))
            .collect()
    }
}

/// A word reducible by two rules at overlapping positions.
#[derive(Clone, Debug)]
pub struct Ambiguity {
    pub word: Word,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    fn rule(al: &Arc<Alphabet>, lhs: &str, rhs: &str) -> RewriteRule {
        let l = NCPoly::parse(al, None, lhs).unwrap();
        RewriteRule {
            lhs: l.leading().unwrap().0.clone(),
            rhs: NCPoly::parse(al, None, rhs).unwrap(),
        }
    }

    fn quantum_plane() -> RewriteSystem {
        let al = Alphabet::new(&["x", "y"]);
        RewriteSystem::new(&al, vec![rule(&al, "y*x", "q*x*y")]).unwrap()
    }

    #[test]
    fn normal_form_orders_letters() {
        let sys = quantum_plane();
        let al = sys.alphabet().clone();
        let w = NCPoly::parse(&al, None, "y*y*x").unwrap();
        assert_eq!(
            sys.normalize(&w).unwrap(),
            NCPoly::parse(&al, None, "q^2*x*y*y").unwrap()
        );
        let mut trace = Vec::new();
        sys.normalize_with(&w, Strategy::LeftmostInnermost, Some(&mut trace))
            .unwrap();
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[0].position, 1);
    }

    #[test]
    fn flipped_rule_is_reported() {
        let al = Alphabet::new(&["a", "b"]);
        let flipped = RewriteRule {
            lhs: Word::from_letters(&[al.letter("a").unwrap(), al.letter("b").unwrap()]),
            rhs: NCPoly::parse(&al, None, "r^-1*b*a").unwrap(),
        };
        let sys = RewriteSystem::new(&al, vec![flipped]).unwrap();
        let rep = sys.check_termination_order("flipped");
        assert!(!rep.passed());
        assert_eq!(rep.witnesses.len(), 1);
        assert!(rep.witnesses[0].residual.contains("a*b"));
    }

    #[test]
    fn guard_trips_on_cycles() {
        let al = Alphabet::new(&["a", "b"]);
        let loops = vec![
            RewriteRule {
                lhs: Word::from_letters(&[al.letter("a").unwrap(), al.letter("b").unwrap()]),
                rhs: NCPoly::parse(&al, None, "b*a").unwrap(),
            },
            rule(&al, "b*a", "a*b"),
        ];
        let sys = RewriteSystem::new(&al, loops).unwrap().with_step_limit(100);
        // largest-first processing cannot cycle on a single word forever only
        // if rules decrease; here they do not.
        let x = NCPoly::parse(&al, None, "a*b").unwrap();
        assert!(matches!(sys.normalize(&x), Err(Error::NonTerminatingGuard(100))));
    }

    #[test]
    fn duplicate_lhs_rejected() {
        let al = Alphabet::new(&["x", "y"]);
        let r = rule(&al, "y*x", "x*y");
        assert!(RewriteSystem::new(&al, vec![r.clone(), r]).is_err());
    }

    #[test]
    fn non_confluent_system_reports_witness() {
        // z y x reduces to 2 x y z + x x one way and 2 x y z + 2 x x the other
        let al = Alphabet::new(&["x", "y", "z"]);
        let sys = RewriteSystem::new(
            &al,
            vec![
                rule(&al, "y*x", "x*y"),
                rule(&al, "z*y", "y*z + x"),
                rule(&al, "z*x", "2*x*z"),
            ],
        )
        .unwrap();
        let rep = sys.check_local_confluence("bad");
        assert!(!rep.passed());
        assert_eq!(rep.witnesses[0].location, "z*y*x");
        let ok = RewriteSystem::new(
            &al,
            vec![
                rule(&al, "y*x", "x*y"),
                rule(&al, "z*y", "y*z"),
                rule(&al, "z*x", "x*z"),
            ],
        )
        .unwrap();
        assert!(ok.check_local_confluence("ok").passed());
    }

    #[test]
    fn tensor_power_sorts_slots() {
        let sys = quantum_plane().tensor_power(2);
        let al = sys.alphabet().clone();
        assert!(sys.check_termination_order("qp2").passed());
        assert!(sys.check_local_confluence("qp2").passed());
        let raw: Terms = [(
            Word::from_letters(&[Letter::new(1, 2), Letter::new(0, 1), Letter::new(0, 2)]),
            Scalar::one(),
        )]
        .into_iter()
        .collect();
        let nf = sys.reduce_terms(raw, Strategy::LeftmostInnermost, None).unwrap();
        let nf = NCPoly::from_terms(&al, nf);
        assert_eq!(nf, NCPoly::parse(&al, None, "q*x@1*x@2*y@2").unwrap());
    }
}
