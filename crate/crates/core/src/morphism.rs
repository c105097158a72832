//! Realisation maps `x -> x' = f^N x` on the 2x2 block of `Grs` and `Gmk`.
//!
//! The relations among the primed images are derived inside the source
//! algebra by rewriting. Each product `y'x'` out of order is solved as a
//! combination of the ordered products `u'v'`, and the coefficients are
//! rewritten in the target parameters: `p = r^-1 s^N`, `q = r^-1 s^-N` for
//! `Grs`, `h = m + N k`, `hp = m - N k` for `Gmk`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hopf::Hopf;
use crate::linalg::ParamMatrix;
use crate::ncpoly::{Alphabet, NCPoly, Word};
use crate::presentations::{catalog, Presentation, Relation};
use crate::report::CheckReport;
use crate::scalar::{int, Bindings, ParamName, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// `Grs -> GL_{p,q}(2)`.
    Q,
    /// `Gmk -> GL_{h,h'}(2)`.
    Jordanian,
}

impl Case {
    pub fn target_name(self) -> &'static str {
        match self {
            Case::Q => "GLpq2",
            Case::Jordanian => "GLhh2",
        }
    }

    /// A displayed relation of the target, as an element that vanishes.
    pub fn spot_identity(self) -> &'static str {
        match self {
            Case::Q => "a*b - p*b*a",
            Case::Jordanian => "c*d - d*c - hp*c*c",
        }
    }

    pub fn target_params(self) -> [&'static str; 2] {
        match self {
            Case::Q => ["p", "q"],
            Case::Jordanian => ["h", "hp"],
        }
    }
}

#[derive(Clone, Debug)]
pub struct MorphismSpec {
    pub source: Presentation,
    pub n: u32,
    pub case: Case,
}

impl MorphismSpec {
    pub fn new(source: &Presentation, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::OutOfContract(format!("N = {n}: only N >= 1 is supported")));
        }
        let case = if source.name().eq_ignore_ascii_case("grs") {
            Case::Q
        } else if source.name().eq_ignore_ascii_case("gmk") {
            Case::Jordanian
        } else {
            return Err(Error::OutOfContract(format!(
                "no realisation map for `{}`",
                source.name()
            )));
        };
        Ok(MorphismSpec {
            source: source.clone(),
            n: n as u32,
            case,
        })
    }

    pub fn from_catalog(name: &str, n: i64) -> Result<Self> {
        MorphismSpec::new(&catalog(name)?, n)
    }

    /// The four block generators in letter order.
    pub fn block(&self) -> Vec<String> {
        self.source.generators()[..4].to_vec()
    }

    pub fn fn_power(&self) -> NCPoly {
        self.source.gen("f").pow(self.n)
    }

    /// `x' = f^N x`.
    pub fn image(&self, x: &str) -> NCPoly {
        self.fn_power().mul(&self.source.gen(x))
    }
}

/// `x*y = sum c * u*v` among the primed generators, `x > y`, `u <= v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageRelation {
    pub lhs: (String, String),
    pub rhs: Vec<((String, String), Scalar)>,
}

#[derive(Clone, Debug)]
pub struct DerivedPresentation {
    pub case: Case,
    pub n: u32,
    pub generators: Vec<String>,
    /// Coefficients in the source parameters.
    pub relations: Vec<ImageRelation>,
}

/// Solves every out-of-order product of primed generators in the span of
/// the ordered ones.
pub fn derive_image_relations(spec: &MorphismSpec) -> Result<DerivedPresentation> {
    let p = &spec.source;
    let gens = spec.block();
    let prime: Vec<NCPoly> = gens.iter().map(|g| spec.image(g)).collect();
    let mut basis_keys = Vec::new();
    let mut basis = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            basis_keys.push((gens[i].clone(), gens[j].clone()));
            basis.push(p.normalize(&prime[i].mul(&prime[j]))?);
        }
    }
    let mut words: Vec<Word> = basis.iter().flat_map(|b| b.terms().keys().cloned()).collect();
    words.sort();
    words.dedup();
    let a = ParamMatrix::from_fn(words.len(), basis.len(), |r, c| basis[c].coeff(&words[r]));
    let mut relations = Vec::new();
    for i in 0..4 {
        for j in 0..i {
            let target = p.normalize(&prime[i].mul(&prime[j]))?;
            let lhs = format!("{}'{}'", gens[i], gens[j]);
            if target.terms().keys().any(|w| words.binary_search(w).is_err()) {
                return Err(Error::NotClosed(lhs));
            }
            let b: Vec<Scalar> = words.iter().map(|w| target.coeff(w)).collect();
            let x = a.solve(&b)?.ok_or_else(|| Error::NotClosed(lhs.clone()))?;
            let rhs = basis_keys
                .iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k.clone(), c))
                .collect();
            relations.push(ImageRelation {
                lhs: (gens[i].clone(), gens[j].clone()),
                rhs,
            });
        }
    }
    Ok(DerivedPresentation {
        case: spec.case,
        n: spec.n,
        generators: gens,
        relations,
    })
}

fn violation(c: &Scalar, why: &str) -> Error {
    Error::DependenceViolation(format!("{c}: {why}"))
}

/// `r^i s^j` with `(i, j)` in the lattice spanned by `(-1, N)` and
/// `(-1, -N)`, termwise, rewritten as `p^a q^b`.
fn to_pq(c: &Scalar, n: u32) -> Result<Scalar> {
    let (r, s) = (ParamName::of("r"), ParamName::of("s"));
    let (num, den) = c.canonical_parts();
    let (dm, dc) = den
        .as_monomial()
        .ok_or_else(|| violation(c, "denominator is not a monomial"))?;
    let mut out = Scalar::zero();
    for (m, coeff) in num.terms() {
        if m.vars().chain(dm.vars()).any(|(v, _)| v != r && v != s) {
            return Err(violation(c, "involves parameters other than r, s"));
        }
        let ei = m.exponent(r) as i64 - dm.exponent(r) as i64;
        let ej = m.exponent(s) as i64 - dm.exponent(s) as i64;
        let n = n as i64;
        if ej % n != 0 || (ej / n - ei) % 2 != 0 {
            return Err(violation(
                c,
                &format!("exponent (r^{ei} s^{ej}) is not a product of powers of p and q"),
            ));
        }
        let alpha = (ej / n - ei) / 2;
        let beta = (-ej / n - ei) / 2;
        let term = Scalar::from_rational(coeff / dc)
            .mul(&Scalar::var("p").pow(alpha)?)
            .mul(&Scalar::var("q").pow(beta)?);
        out = out.add(&term);
    }
    Ok(out)
}

fn to_hh(c: &Scalar, n: u32) -> Result<Scalar> {
    let (m, k) = (ParamName::of("m"), ParamName::of("k"));
    if c.params().iter().any(|v| *v != m && *v != k) {
        return Err(violation(c, "involves parameters other than m, k"));
    }
    let half = Scalar::from_rational(BigRational::new(1.into(), 2.into()));
    let (h, hp) = (Scalar::var("h"), Scalar::var("hp"));
    let mut b = Bindings::new();
    b.insert(m, h.add(&hp).mul(&half));
    b.insert(k, h.sub(&hp).mul(&half).div(&int(n as i64))?);
    c.substitute(&b)
}

impl DerivedPresentation {
    /// Coefficients rewritten in the target parameters.
    pub fn target_coefficient(&self, c: &Scalar) -> Result<Scalar> {
        match self.case {
            Case::Q => to_pq(c, self.n),
            Case::Jordanian => to_hh(c, self.n),
        }
    }

    fn build(&self, name: &str, params: Vec<ParamName>, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Presentation> {
        let al = Alphabet::new(&self.generators);
        let gen = |x: &str| NCPoly::gen(&al, x);
        let mut rels = Vec::new();
        for r in &self.relations {
            let lhs = gen(&r.lhs.0).mul(&gen(&r.lhs.1));
            let mut rhs = NCPoly::zero(&al);
            for ((u, v), c) in &r.rhs {
                rhs = rhs.add(&gen(u).mul(&gen(v)).scale(&f(c)?));
            }
            rels.push(Relation { lhs, rhs });
        }
        Presentation::new(name, params, self.generators.clone(), vec![], rels)
    }

    /// The image presentation in the target parameters.
    pub fn target(&self) -> Result<Presentation> {
        let params = self.case.target_params().iter().map(|p| ParamName::of(p)).collect();
        self.build(self.case.target_name(), params, |c| self.target_coefficient(c))
    }

    /// The image presentation with coefficients left in the source
    /// parameters.
    pub fn in_source_params(&self, source: &Presentation) -> Result<Presentation> {
        self.build(self.case.target_name(), source.params().to_vec(), |c| Ok(c.clone()))
    }

    pub fn render(&self) -> Result<String> {
        let mut s = String::new();
        for r in &self.relations {
            let rhs: Vec<String> = r
                .rhs
                .iter()
                .map(|((u, v), c)| Ok(format!("({})*{u}'*{v}'", self.target_coefficient(c)?)))
                .collect::<Result<_>>()?;
            writeln!(s, "{}'*{}' = {}", r.lhs.0, r.lhs.1, rhs.join(" + ")).unwrap();
        }
        Ok(s)
    }
}

/// Every coefficient depends on the source parameters only through the
/// target parameters.
pub fn check_parameter_dependence(dp: &DerivedPresentation) -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("parameter-dependence", format!("{} N={}", dp.case.target_name(), dp.n));
    for r in &dp.relations {
        for ((u, v), c) in &r.rhs {
            match dp.target_coefficient(c) {
                Ok(t) => {
                    let bad: Vec<&str> = t
                        .params()
                        .iter()
                        .map(|p| p.as_str())
                        .filter(|p| !dp.case.target_params().contains(p))
                        .collect();
                    if !bad.is_empty() {
                        rep.fail(
                            format!("{}'{}' coefficient of {u}'{v}'", r.lhs.0, r.lhs.1),
                            format!("{t} still involves {}", bad.join(", ")),
                        );
                    }
                }
                Err(e) => rep.fail(
                    format!("{}'{}' coefficient of {u}'{v}'", r.lhs.0, r.lhs.1),
                    e.to_string(),
                ),
            }
        }
    }
    rep.timed(start)
}

/// Each relation of one presentation holds in the other, both ways.
/// Elements are transferred by rendering, so the alphabets only need equal
/// letter names.
pub fn equivalent_presentations(x: &Presentation, y: &Presentation) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (from, to) in [(x, y), (y, x)] {
        for (i, r) in from.relations().iter().enumerate() {
            let d = to.element(&r.difference().render())?;
            let n = to.normalize(&d)?;
            if !n.is_zero() {
                out.push((
                    format!("{} relation {} in {}", from.name(), i + 1, to.name()),
                    n.render(),
                ));
            }
        }
    }
    Ok(out)
}

/// `(generator, phi(generator))` for `D x = phi(x) D`.
pub type Twist = Vec<(String, NCPoly)>;

/// `D x = phi(x) D` for every generator `x`, with `phi(x)` a linear
/// combination of generators; returns `phi` as `(x, phi(x))` pairs.
pub fn linear_twist(p: &Presentation, d: &NCPoly) -> Result<Option<Twist>> {
    let gens = p.generators();
    let right: Vec<NCPoly> = gens
        .iter()
        .map(|y| p.normalize(&p.gen(y).mul(d)))
        .collect::<Result<_>>()?;
    let mut words: Vec<Word> = right.iter().flat_map(|b| b.terms().keys().cloned()).collect();
    words.sort();
    words.dedup();
    let a = ParamMatrix::from_fn(words.len(), gens.len(), |r, c| right[c].coeff(&words[r]));
    let mut out = Vec::new();
    for x in gens {
        let left = p.normalize(&d.mul(&p.gen(x)))?;
        if left.terms().keys().any(|w| words.binary_search(w).is_err()) {
            return Ok(None);
        }
        let b: Vec<Scalar> = words.iter().map(|w| left.coeff(w)).collect();
        let Some(sol) = a.solve(&b)? else {
            return Ok(None);
        };
        let mut phi = NCPoly::zero(p.alphabet());
        for (y, c) in gens.iter().zip(sol) {
            phi = phi.add(&p.gen(y).scale(&c));
        }
        out.push((x.clone(), phi));
    }
    Ok(Some(out))
}

fn candidate_sources(case: Case) -> &'static [&'static str] {
    match case {
        Case::Q => &["a*d - p*b*c", "a*d - q*b*c", "a*d - p^-1*b*c", "a*d - q^-1*b*c"],
        Case::Jordanian => &[
            "a*d - b*c - h*a*c",
            "a*d - b*c - hp*a*c",
            "a*d - c*b + h*c*d",
            "a*d - c*b + hp*c*d",
        ],
    }
}

/// Determinant-like candidates that commute with every generator up to a
/// linear substitution of the generators.
pub fn central_candidates(target: &Presentation, case: Case) -> Result<Vec<(String, Twist)>> {
    let mut found = Vec::new();
    for src in candidate_sources(case) {
        let d = target.element(src)?;
        if let Some(phi) = linear_twist(target, &d)? {
            found.push((src.to_string(), phi));
        }
    }
    Ok(found)
}

/// `Delta(x') = sum_k x'_ik (x) x'_kj` and `eps(x') = eps(x)`.
pub fn check_coalgebra_compat(spec: &MorphismSpec) -> Result<CheckReport> {
    let start = Instant::now();
    let p = &spec.source;
    let hopf = Hopf::new(p)?;
    let mut rep = CheckReport::new("coalgebra-compat", format!("{} N={}", p.name(), spec.n));
    let t = hopf.tmatrix();
    let fn_ = spec.fn_power();
    let primed = |i: usize, j: usize| fn_.mul(t.get(i, j));
    for i in 0..2 {
        for j in 0..2 {
            let x = primed(i, j);
            let lhs = hopf.coproduct(&x)?;
            let mut rhs = NCPoly::zero(p.alphabet());
            for k in 0..2 {
                rhs = rhs.add(&hopf.tensor(&primed(i, k), &primed(k, j)));
            }
            let diff = hopf.two_slot().normalize(&lhs.sub(&rhs))?;
            let name = t.get(i, j).render();
            if !diff.is_zero() {
                rep.fail(format!("Delta({name}')"), diff.render());
            }
            let (e1, e0) = (hopf.counit(&x)?, hopf.counit(t.get(i, j))?);
            if e1 != e0 {
                rep.fail(format!("eps({name}')"), format!("{e1} vs {e0}"));
            }
        }
    }
    Ok(rep.timed(start))
}

/// With `p = e^h`, `q = e^hp`, `r = e^-m`, `s = e^k`, the exponent of
/// `r^-1 s^N` is `m + N k` and that of `r^-1 s^-N` is `m - N k`.
pub fn check_exponential_correspondence(n: i64) -> Result<CheckReport> {
    let start = Instant::now();
    if n < 1 {
        return Err(Error::OutOfContract(format!("N = {n}: p = q = r^-1 is degenerate")));
    }
    // exponent vectors in the basis (m, k)
    let r = [-1i64, 0];
    let s = [0i64, 1];
    let combo = |a: i64, b: i64| [a * r[0] + b * s[0], a * r[1] + b * s[1]];
    let mut rep = CheckReport::new("exp-correspondence", format!("N={n}"));
    let cases = [
        ("p = r^-1 s^N", combo(-1, n), [1, n], "h = m + N k"),
        ("q = r^-1 s^-N", combo(-1, -n), [1, -n], "hp = m - N k"),
    ];
    for (lbl, got, want, name) in cases {
        if got != want {
            rep.fail(lbl, format!("exponent {got:?}, expected {want:?}"));
        } else {
            rep.derive(lbl, name.replace('N', &n.to_string()));
        }
    }
    Ok(rep.timed(start))
}

/// Everything about one realisation map at one `N`.
pub fn check_morphism_at(source: &Presentation, n: i64) -> Result<(CheckReport, Presentation)> {
    let start = Instant::now();
    let spec = MorphismSpec::new(source, n)?;
    let mut rep = CheckReport::new("morphism", format!("{} N={n}", source.name()));
    let dp = derive_image_relations(&spec)?;
    rep.absorb(check_parameter_dependence(&dp));
    if !rep.passed() {
        return Ok((rep.timed(start), dp.in_source_params(source)?));
    }
    let target = dp.target()?;
    rep.derive("presentation", target.to_dsl());
    let spot = spec.case.spot_identity();
    let r = target.normalize(&target.element(spot)?)?;
    if r.is_zero() {
        rep.derive("identity", format!("{spot} = 0"));
    } else {
        rep.fail(format!("identity {spot}"), r.render());
    }
    let sys = target.rewrite_system();
    rep.absorb(sys.check_termination_order(target.name()));
    rep.absorb(sys.check_local_confluence(target.name()));
    let cands = central_candidates(&target, spec.case)?;
    if cands.is_empty() {
        rep.fail(
            "determinant",
            "no candidate commutes with the generators up to a linear twist",
        );
    }
    for (src, phi) in cands {
        let twists: Vec<String> = phi
            .iter()
            .filter(|(g, img)| *img != target.gen(g))
            .map(|(g, img)| format!("D'*{g}' = ({})*D'", img.render()))
            .collect();
        let value = if twists.is_empty() {
            "central".to_string()
        } else {
            twists.join(", ")
        };
        rep.derive(format!("D' = {src}"), value);
    }
    rep.absorb(check_coalgebra_compat(&spec)?);
    rep.note("antipode compatibility is not mechanically verified");
    Ok((rep.timed(start), target))
}

/// The realisation map for every `N` in `ns`, the target presentations
/// compared across `N`, and for `Gmk` the collapse at `k = 0`.
pub fn check_morphism(source: &Presentation, ns: &[i64], exec: Exec) -> Result<CheckReport> {
    let start = Instant::now();
    let mut rep = CheckReport::new("morphism", source.name());
    let results = exec.map(ns, |&n| check_morphism_at(source, n));
    let mut targets = Vec::new();
    for (n, res) in ns.iter().zip(results) {
        let (r, t) = res?;
        let mut r = r;
        for d in &mut r.derived {
            d.name = format!("N={n}: {}", d.name);
        }
        rep.absorb(r);
        targets.push((n, t));
    }
    for w in targets.windows(2) {
        for (loc, res) in equivalent_presentations(&w[0].1, &w[1].1)? {
            rep.fail(format!("N={} vs N={}: {loc}", w[0].0, w[1].0), res);
        }
    }
    if MorphismSpec::new(source, 1)?.case == Case::Jordanian {
        rep.absorb(check_k_zero(source, ns)?);
    }
    Ok(rep.timed(start))
}

/// At `k = 0` the image relations are the one-parameter relations with
/// `h = m`, for every `N`.
pub fn check_k_zero(source: &Presentation, ns: &[i64]) -> Result<CheckReport> {
    let start = Instant::now();
    let mut rep = CheckReport::new("k-zero", source.name());
    let mut k0 = Bindings::new();
    k0.insert(ParamName::of("k"), Scalar::zero());
    let src0 = source.substitute(&k0)?;
    let mut h = Bindings::new();
    h.insert(ParamName::of("h"), Scalar::var("m"));
    let one_param = catalog("GLh2")?.substitute(&h)?;
    for &n in ns {
        let spec = MorphismSpec {
            source: src0.clone(),
            n: n as u32,
            case: Case::Jordanian,
        };
        let dp = derive_image_relations(&spec)?;
        let got = dp.in_source_params(&src0)?;
        for (loc, res) in equivalent_presentations(&got, &one_param)? {
            rep.fail(format!("N={n}: {loc}"), res);
        }
    }
    Ok(rep.timed(start))
}

/// Exponent bookkeeping used by tests: `(i, j)` of a Laurent monomial
/// `c r^i s^j`.
pub fn laurent_exponents(c: &Scalar) -> Option<BTreeMap<&'static str, i64>> {
    let (num, den) = c.canonical_parts();
    let (m, _) = num.as_monomial()?;
    let (d, _) = den.as_monomial()?;
    if num.terms().next().is_some_and(|(_, q)| q.is_zero()) {
        return None;
    }
    let mut out = BTreeMap::new();
    for name in ["r", "s"] {
        let v = ParamName::of(name);
        out.insert(name, m.exponent(v) as i64 - d.exponent(v) as i64);
    }
    Some(out)
}
