//! Coalgebra and Hopf structure for matrix quantum groups: RTT relations,
//! the matrix coproduct `Delta(T) = T (.) T`, counit and antipode
//! identities.
//!
//! `D^-1` is never adjoined. The antipode is certified through the
//! adjugate identities `M T = T M = D I`, centrality of `D`, `Delta(D) =
//! D (x) D` and `eps(D) = 1`; together they give `S(T) = D^-1 M` in the
//! localisation at `D`.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use crate::data::DataDir;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{OpMatrix, ParamMatrix};
use crate::ncpoly::{Alphabet, Letter, NCPoly, Word};
use crate::presentations::{hopf_data, HopfData, Presentation};
use crate::report::CheckReport;
use crate::rewrite::RewriteSystem;
use crate::scalar::Scalar;

/// The `d^2 x d^2` matrix of `R T1 T2 - T2 T1 R`, entries unreduced.
pub fn rtt_matrix(r: &ParamMatrix, t: &OpMatrix, exec: Exec) -> Result<OpMatrix> {
    let d = t.rows();
    if t.cols() != d || r.rows() != d * d || r.cols() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "R is {}x{} but T is {}x{}",
            r.rows(),
            r.cols(),
            t.rows(),
            t.cols()
        )));
    }
    let id = OpMatrix::identity(t.alphabet(), d);
    let t1 = t.kron(&id);
    let t2 = id.kron(t);
    let lhs = OpMatrix::left_mul(r, &t1.matmul_with(&t2, exec)?, exec)?;
    let rhs = OpMatrix::right_mul(&t2.matmul_with(&t1, exec)?, r, exec)?;
    lhs.sub(&rhs)
}

/// Every entry of `R T1 T2 - T2 T1 R` normalizes to 0 in `p`.
pub fn rtt_residuals(
    subject: &str,
    r: &ParamMatrix,
    t: &OpMatrix,
    p: &Presentation,
    exec: Exec,
) -> Result<CheckReport> {
    let start = Instant::now();
    let m = rtt_matrix(r, t, exec)?;
    let normal = m.try_map(|x| p.normalize(x), exec)?;
    let mut rep = CheckReport::new("rtt", subject);
    let n = normal.cols();
    for (k, x) in normal.entries().iter().enumerate() {
        if !x.is_zero() {
            rep.fail(format!("entry ({}, {})", k / n + 1, k % n + 1), x.render());
        }
    }
    rep.derive("entries", format!("{}", n * n));
    Ok(rep.timed(start))
}

/// Scales so the largest word has coefficient 1.
fn monic(x: &NCPoly) -> NCPoly {
    match x.leading() {
        Some((_, c)) => x.scale(&c.inv().expect("nonzero leading coefficient")),
        None => x.clone(),
    }
}

/// The nonzero entries of `R T1 T2 - T2 T1 R`, with entries that agree up
/// to a scalar factor merged.
pub fn derive_relations(r: &ParamMatrix, t: &OpMatrix, exec: Exec) -> Result<Vec<NCPoly>> {
    let m = rtt_matrix(r, t, exec)?;
    let mut out: Vec<NCPoly> = Vec::new();
    let mut seen: Vec<NCPoly> = Vec::new();
    for x in m.entries() {
        if x.is_zero() {
            continue;
        }
        let key = monic(x);
        if !seen.contains(&key) {
            seen.push(key);
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Equality of the row spans of two sets of degree-2 relations in the
/// word space over the first `letters` letters of the alphabet.
pub fn span_equal(subject: &str, letters: usize, x: &[NCPoly], y: &[NCPoly]) -> Result<CheckReport> {
    let start = Instant::now();
    let index = |w: &Word| -> Result<usize> {
        match w.letters() {
            [u, v] if (u.gen as usize) < letters && (v.gen as usize) < letters => {
                Ok(u.gen as usize * letters + v.gen as usize)
            }
            _ => Err(Error::NonHomogeneous(format!(
                "word of length {} outside the degree-2 word space",
                w.len()
            ))),
        }
    };
    let matrix = |rels: &[NCPoly]| -> Result<ParamMatrix> {
        let n = letters * letters;
        let mut m = ParamMatrix::zeros(rels.len(), n);
        for (i, rel) in rels.iter().enumerate() {
            if !rel.is_homogeneous(2) {
                return Err(Error::NonHomogeneous(rel.render()));
            }
            for (w, c) in rel.terms() {
                m.set(i, index(w)?, c.clone());
            }
        }
        Ok(m)
    };
    let mx = matrix(x)?;
    let my = matrix(y)?;
    let both: Vec<NCPoly> = x.iter().chain(y).cloned().collect();
    let mu = matrix(&both)?;
    let (rx, ry, ru) = (mx.rank(), my.rank(), mu.rank());
    let mut rep = CheckReport::new("span", subject);
    rep.derive("word space dimension", (letters * letters).to_string());
    rep.derive("rank(derived)", rx.to_string());
    rep.derive("rank(catalog)", ry.to_string());
    rep.derive("rank(union)", ru.to_string());
    if !(rx == ry && ry == ru) {
        rep.fail("ranks", format!("{rx}, {ry}, union {ru}"));
    }
    Ok(rep.timed(start))
}

/// Matrix coproduct, counit and the tensor-power rewrite systems of a
/// presentation with Hopf data.
#[derive(Clone, Debug)]
pub struct Hopf {
    presentation: Presentation,
    data: HopfData,
    t: OpMatrix,
    delta: BTreeMap<Letter, NCPoly>,
    eps: BTreeMap<Letter, NCPoly>,
    two: RewriteSystem,
    three: RewriteSystem,
}

fn letter_of(p: &NCPoly) -> Option<Letter> {
    let (w, c) = p.terms().iter().next()?;
    (p.len() == 1 && c.is_one() && w.len() == 1).then(|| w.letters()[0])
}

impl Hopf {
    pub fn new(p: &Presentation) -> Result<Self> {
        Hopf::with_data(p, hopf_data(&DataDir::embedded(), p.name())?)
    }

    pub fn with_data(p: &Presentation, data: HopfData) -> Result<Self> {
        let al = p.alphabet().clone();
        let t = OpMatrix::parse_rows(&al, Some(p.params()), &data.tmatrix)?;
        let n = t.rows();
        let mut delta = BTreeMap::new();
        let mut eps = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let Some(l) = letter_of(t.get(i, j)) else { continue };
                let mut img = NCPoly::zero(&al);
                for k in 0..n {
                    let x = t.get(i, k).embed_slot(1);
                    let y = t.get(k, j).embed_slot(2);
                    img = img.add(&x.mul(&y));
                }
                delta.insert(l, img);
                let e = if i == j { Scalar::one() } else { Scalar::zero() };
                eps.insert(l, NCPoly::scalar(&al, e));
            }
        }
        for (g, inv) in p.inverses() {
            let gl = al.letter(g).expect("declared generator");
            let il = al.letter(inv).expect("declared inverse");
            let grouplike = delta
                .get(&gl)
                .is_some_and(|d| *d == NCPoly::letter(&al, gl).mul(&NCPoly::letter(&al, gl.in_slot(2))));
            if !grouplike {
                return Err(Error::OutOfContract(format!(
                    "`{g}` has an inverse but is not group-like"
                )));
            }
            delta.insert(il, NCPoly::letter(&al, il).mul(&NCPoly::letter(&al, il.in_slot(2))));
            eps.insert(il, NCPoly::one(&al));
        }
        for g in 0..al.len() as u8 {
            if !delta.contains_key(&Letter::new(g, 1)) {
                return Err(Error::MissingImage(format!(
                    "generator `{}` is not an entry of T",
                    al.name(g)
                )));
            }
        }
        let sys = p.rewrite_system();
        Ok(Hopf {
            presentation: p.clone(),
            data,
            t,
            delta,
            eps,
            two: sys.tensor_power(2),
            three: sys.tensor_power(3),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn tmatrix(&self) -> &OpMatrix {
        &self.t
    }

    pub fn data(&self) -> &HopfData {
        &self.data
    }

    fn alphabet(&self) -> &Arc<Alphabet> {
        self.presentation.alphabet()
    }

    pub fn two_slot(&self) -> &RewriteSystem {
        &self.two
    }

    pub fn three_slot(&self) -> &RewriteSystem {
        &self.three
    }

    pub fn element(&self, src: &str) -> Result<NCPoly> {
        self.presentation.element(src)
    }

    /// `Delta` on a slot-1 element; the result lives in slots 1 and 2.
    pub fn coproduct(&self, x: &NCPoly) -> Result<NCPoly> {
        x.apply_generator_map(&self.delta)
    }

    pub fn counit(&self, x: &NCPoly) -> Result<Scalar> {
        let e = x.apply_generator_map(&self.eps)?;
        Ok(e.as_scalar().expect("counit images are scalars"))
    }

    /// `x (x) y` for slot-1 elements.
    pub fn tensor(&self, x: &NCPoly, y: &NCPoly) -> NCPoly {
        x.embed_slot(1).mul(&y.embed_slot(2))
    }

    fn shifted_delta(&self, from: u8) -> BTreeMap<Letter, NCPoly> {
        self.delta
            .iter()
            .map(|(l, img)| {
                let moved = img.map_letters(|m| m.in_slot(m.slot + from - 1));
                (l.in_slot(from), moved)
            })
            .collect()
    }

    fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.alphabet().len() as u8).map(|g| Letter::new(g, 1))
    }

    fn name(&self, l: Letter) -> &str {
        self.alphabet().name(l.gen)
    }

    /// `Delta` is an algebra map, `eps` kills the relations, coassociativity
    /// and the counit axioms on generators.
    pub fn check_bialgebra(&self, exec: Exec) -> Result<CheckReport> {
        let start = Instant::now();
        let p = &self.presentation;
        let mut rep = CheckReport::new("bialgebra", p.name());
        let rels: Vec<NCPoly> = p.relations().iter().map(|r| r.difference()).collect();
        let images = exec.map(&rels, |d| -> Result<(NCPoly, Scalar)> {
            let img = self.two.normalize(&self.coproduct(d)?)?;
            Ok((img, self.counit(d)?))
        });
        for (i, res) in images.into_iter().enumerate() {
            let (img, e) = res?;
            if !img.is_zero() {
                rep.fail(format!("Delta(relation {})", i + 1), img.render());
            }
            if !e.is_zero() {
                rep.fail(format!("eps(relation {})", i + 1), e.to_string());
            }
        }
        for l in self.letters() {
            let g = NCPoly::letter(self.alphabet(), l);
            let d = self.coproduct(&g)?;
            // (Delta (x) id) Delta and (id (x) Delta) Delta
            let mut left_map = self.shifted_delta(1);
            let mut right_map = self.shifted_delta(2);
            for m in self.letters() {
                left_map.insert(m.in_slot(2), NCPoly::letter(self.alphabet(), m.in_slot(3)));
                right_map.insert(m, NCPoly::letter(self.alphabet(), m));
            }
            let left = self.three.normalize(&d.apply_generator_map(&left_map)?)?;
            let right = self.three.normalize(&d.apply_generator_map(&right_map)?)?;
            let diff = left.sub(&right);
            if !diff.is_zero() {
                rep.fail(format!("coassociativity on {}", self.name(l)), diff.render());
            }
            // (eps (x) id) Delta and (id (x) eps) Delta
            let mut eps_left = BTreeMap::new();
            let mut eps_right = BTreeMap::new();
            for m in self.letters() {
                eps_left.insert(m, self.eps[&m].clone());
                eps_left.insert(m.in_slot(2), NCPoly::letter(self.alphabet(), m));
                eps_right.insert(m, NCPoly::letter(self.alphabet(), m));
                eps_right.insert(m.in_slot(2), self.eps[&m].clone());
            }
            for (side, map) in [("eps (x) id", &eps_left), ("id (x) eps", &eps_right)] {
                let r = p.normalize(&d.apply_generator_map(map)?)?.sub(&g);
                if !r.is_zero() {
                    rep.fail(format!("{side} on {}", self.name(l)), r.render());
                }
            }
        }
        Ok(rep.timed(start))
    }

    fn adjugate(&self) -> Result<OpMatrix> {
        let rows: Vec<Vec<String>> = self.data.adjugate.iter().map(|r| r.to_vec()).collect();
        OpMatrix::parse_rows(self.alphabet(), Some(self.presentation.params()), &rows)
    }

    pub fn casimir(&self) -> Result<NCPoly> {
        self.element(&self.data.casimir)
    }

    fn commutator_report(&self, rep: &mut CheckReport, x: &NCPoly, name: &str) -> Result<()> {
        for l in self.letters() {
            let g = NCPoly::letter(self.alphabet(), l);
            let c = self.presentation.normalize(&x.commutator(&g))?;
            if !c.is_zero() {
                rep.fail(format!("[{name}, {}]", self.name(l)), c.render());
            }
        }
        Ok(())
    }

    fn grouplike_report(&self, rep: &mut CheckReport, x: &NCPoly, name: &str) -> Result<()> {
        let d = self.two.normalize(&self.coproduct(x)?.sub(&self.tensor(x, x)))?;
        if !d.is_zero() {
            rep.fail(format!("Delta({name}) - {name} (x) {name}"), d.render());
        }
        let e = self.counit(x)?;
        if !e.is_one() {
            rep.fail(format!("eps({name})"), e.to_string());
        }
        Ok(())
    }

    /// Adjugate identities, centrality and group-likeness of `D`, and the
    /// formal inverses.
    pub fn check_antipode(&self) -> Result<CheckReport> {
        let start = Instant::now();
        let p = &self.presentation;
        let mut rep = CheckReport::new("antipode", p.name());
        let al = self.alphabet();
        let m = self.adjugate()?;
        let t2 = OpMatrix::from_fn(al, 2, 2, |i, j| self.t.get(i, j).clone());
        let dmat = OpMatrix::from_fn(al, 2, 2, |i, j| {
            if i == j {
                self.casimir().expect("casimir parses")
            } else {
                NCPoly::zero(al)
            }
        });
        for (side, prod) in [("M*T", m.matmul(&t2)?), ("T*M", t2.matmul(&m)?)] {
            let diff = prod.sub(&dmat)?;
            for i in 0..2 {
                for j in 0..2 {
                    let r = p.normalize(diff.get(i, j))?;
                    if !r.is_zero() {
                        rep.fail(format!("{side} - D*I entry ({}, {})", i + 1, j + 1), r.render());
                    }
                }
            }
        }
        let d = self.casimir()?;
        self.commutator_report(&mut rep, &d, "D")?;
        self.grouplike_report(&mut rep, &d, "D")?;
        for (g, inv) in p.inverses() {
            let (x, y) = (p.gen(g), p.gen(inv));
            for (lbl, prod) in [
                (format!("{g}*{inv} - 1"), x.mul(&y)),
                (format!("{inv}*{g} - 1"), y.mul(&x)),
            ] {
                let r = p.normalize(&prod.sub(&NCPoly::one(al)))?;
                if !r.is_zero() {
                    rep.fail(lbl, r.render());
                }
            }
        }
        rep.note("S(T) = D^-1 M on the 2x2 block and S(f) = finv, in the localisation at the central group-like D");
        Ok(rep.timed(start))
    }

    /// `D` commutes with every generator.
    pub fn check_central(&self) -> Result<CheckReport> {
        let start = Instant::now();
        let mut rep = CheckReport::new("central", self.presentation.name());
        let d = self.casimir()?;
        self.commutator_report(&mut rep, &d, "D")?;
        for (i, alt) in self.data.casimir_alt.iter().enumerate() {
            let r = self.presentation.normalize(&d.sub(&self.element(alt)?))?;
            if !r.is_zero() {
                rep.fail(format!("D - D_alt{}", i + 1), r.render());
            }
        }
        if rep.passed() {
            rep.derive("D", format!("{} is central", d.render()));
        }
        Ok(rep.timed(start))
    }

    /// `delta = D f` is group-like. Generators it fails to commute with
    /// are reported as derived facts `delta*x = c*x*delta` when the two
    /// products are proportional.
    pub fn check_grouplike(&self) -> Result<CheckReport> {
        let start = Instant::now();
        let p = &self.presentation;
        let mut rep = CheckReport::new("grouplike", p.name());
        let Some(det) = &self.data.determinant else {
            rep.note("no determinant in the Hopf data");
            return Ok(rep.timed(start));
        };
        let delta = self.element(det)?;
        self.grouplike_report(&mut rep, &delta, "delta")?;
        for l in self.letters() {
            if p.inverses().iter().any(|(_, i)| i == self.name(l)) {
                continue;
            }
            let g = NCPoly::letter(self.alphabet(), l);
            let left = p.normalize(&delta.mul(&g))?;
            let right = p.normalize(&g.mul(&delta))?;
            if left == right {
                continue;
            }
            let name = self.name(l);
            match proportional(&left, &right) {
                Some(c) => rep.derive(format!("delta*{name}"), format!("({c})*{name}*delta")),
                None => rep.derive(format!("[delta, {name}]"), left.sub(&right).render()),
            }
        }
        Ok(rep.timed(start))
    }
}

/// `c` with `x = c y`, if one exists.
pub fn proportional(x: &NCPoly, y: &NCPoly) -> Option<Scalar> {
    let (w, cy) = y.leading()?;
    let c = x.coeff(w).div(cy).ok()?;
    (*x == y.scale(&c)).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{catalog, parse_presentation};

    fn hopf(name: &str) -> Hopf {
        Hopf::new(&catalog(name).unwrap()).unwrap()
    }

    #[test]
    fn coproduct_on_generators() {
        let h = hopf("Grs");
        let a = h.element("a").unwrap();
        let want = h
            .tensor(&a, &a)
            .add(&h.tensor(&h.element("b").unwrap(), &h.element("c").unwrap()));
        assert_eq!(h.coproduct(&a).unwrap(), want);
        assert_eq!(
            h.coproduct(&h.element("a").unwrap()).unwrap().render(),
            "b@1*c@2 + a@1*a@2"
        );
        let one = NCPoly::one(h.presentation().alphabet());
        assert_eq!(h.coproduct(&one).unwrap(), one);
        let f = h.element("finv").unwrap();
        assert_eq!(h.coproduct(&f).unwrap(), h.tensor(&f, &f));
    }

    #[test]
    fn counit_values() {
        let h = hopf("Gmk");
        assert!(h.counit(&h.element("a").unwrap()).unwrap().is_one());
        assert!(h.counit(&h.element("c").unwrap()).unwrap().is_zero());
        assert!(h.counit(&h.element("a*d - b*c - m*a*c").unwrap()).unwrap().is_one());
    }

    #[test]
    fn gmk_adjugate_entry() {
        let h = hopf("Gmk");
        let x = h.element("-c*a + a*c + m*c*c").unwrap();
        assert!(h.presentation().normalize(&x).unwrap().is_zero());
    }

    #[test]
    fn two_by_two_algebras() {
        for n in ["GLr2", "GLh2"] {
            let h = hopf(n);
            assert!(h.check_bialgebra(Exec::Sequential).unwrap().passed(), "{n}");
            assert!(h.check_antipode().unwrap().passed(), "{n}");
            assert!(h.check_central().unwrap().passed(), "{n}");
        }
    }

    #[test]
    fn wrong_adjugate_is_caught() {
        let p = catalog("GLr2").unwrap();
        let mut data = hopf_data(&DataDir::embedded(), "GLr2").unwrap();
        data.adjugate[0][1] = "-r*c".into();
        let rep = Hopf::with_data(&p, data).unwrap().check_antipode().unwrap();
        assert!(!rep.passed());
        assert!(rep.witnesses[0].location.starts_with("M*T"));
    }

    #[test]
    fn identity_r_forces_commutativity() {
        let mut src = String::from("algebra Comm\ngens a < b < c < d < f\n");
        let g = ["a", "b", "c", "d", "f"];
        for i in 0..5 {
            for j in i + 1..5 {
                src.push_str(&format!("rel {}*{} = {}*{}\n", g[j], g[i], g[i], g[j]));
            }
        }
        let p = parse_presentation(&src).unwrap();
        let t = OpMatrix::parse_rows(
            p.alphabet(),
            None,
            &[vec!["a", "b", "0"], vec!["c", "d", "0"], vec!["0", "0", "f"]],
        )
        .unwrap();
        let id = ParamMatrix::identity(9);
        assert!(rtt_residuals("I9", &id, &t, &p, Exec::Sequential).unwrap().passed());
        let rels = derive_relations(&id, &t, Exec::Sequential).unwrap();
        assert_eq!(rels.len(), 10);
        let catalog: Vec<NCPoly> = p.relations().iter().map(|r| r.difference()).collect();
        assert!(span_equal("I9", 5, &rels, &catalog).unwrap().passed());
    }

    #[test]
    fn span_examples() {
        let p = catalog("Gmk").unwrap();
        let s: Vec<NCPoly> = p.core_relations().iter().map(|r| r.difference()).collect();
        let mut t = s.clone();
        t.push(s[0].scale(&Scalar::var("m")));
        let rep = span_equal("dup", 5, &s, &t).unwrap();
        assert!(rep.passed());
        assert!(!span_equal("short", 5, &s[1..], &s).unwrap().passed());
        let bad = vec![p.element("a*b*c").unwrap()];
        assert!(matches!(span_equal("x", 5, &bad, &s), Err(Error::NonHomogeneous(_))));
    }

    #[test]
    fn proportional_scalars() {
        let p = catalog("Grs").unwrap();
        let x = p.element("r*a*b").unwrap();
        let y = p.element("a*b").unwrap();
        assert_eq!(proportional(&x, &y), Some(Scalar::var("r")));
        assert_eq!(proportional(&y, &p.element("a*b + b*a").unwrap()), None);
    }
}
