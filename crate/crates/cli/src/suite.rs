use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

use qgw_core::data::DataDir;
use qgw_core::hopf::{derive_relations, rtt_residuals, span_equal, Hopf};
use qgw_core::linalg::ParamMatrix;
use qgw_core::morphism::{check_exponential_correspondence, check_morphism};
use qgw_core::mutations::check_mutations;
use qgw_core::presentations::{catalog_from, parse_presentation, Presentation};
use qgw_core::rmatrix::{
    contract, contract_check, embedded_block_check, paired_algebra, qybe_check_entry, reorder_consistency,
    rmatrix_from, triangularity_check_entry, ContractionPlan, RMatrixEntry,
};
use qgw_core::scalar::Bindings;
use qgw_core::{CheckReport, Exec, NCPoly, ParamName, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Check {
    All,
    Termination,
    Confluence,
    Qybe,
    Triangularity,
    ReorderConsistency,
    Contract,
    Rtt,
    Span,
    Bialgebra,
    Antipode,
    Central,
    Grouplike,
    Morphism,
    ExpCorrespondence,
    /// Not part of `all`: runs the shipped mutations of the golden data.
    Mutation,
}

pub const SUITE: [Check; 14] = [
    Check::Termination,
    Check::Confluence,
    Check::Qybe,
    Check::Triangularity,
    Check::ReorderConsistency,
    Check::Contract,
    Check::Rtt,
    Check::Span,
    Check::Bialgebra,
    Check::Antipode,
    Check::Central,
    Check::Grouplike,
    Check::Morphism,
    Check::ExpCorrespondence,
];

impl Check {
    pub fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

pub struct SuiteConfig {
    pub checks: Vec<Check>,
    /// Overrides the default subjects of every selected check.
    pub subjects: Vec<String>,
    pub ns: Vec<i64>,
    pub bindings: Bindings,
    /// Restricts subjects to the two-parameter algebras and their matrices.
    pub paper: bool,
    pub parallel: bool,
    pub data: DataDir,
}

impl SuiteConfig {
    pub fn exec(&self) -> Exec {
        if self.parallel {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    /// Expands `all` and removes duplicates, keeping suite order.
    pub fn expanded(&self) -> Vec<Check> {
        let mut out: Vec<Check> = Vec::new();
        for &c in &self.checks {
            let add: Vec<Check> = if c == Check::All { SUITE.to_vec() } else { vec![c] };
            for c in add {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    fn algebras(&self) -> Vec<String> {
        self.pick(&["Grs", "Gmk"], &["GLr2", "GLh2"])
    }

    fn rmatrices(&self) -> Vec<String> {
        self.pick(&["R_Grs", "R_Gmk"], &["R_q_blocked", "R_GLr2", "R_h2"])
    }

    fn pick(&self, paper: &[&str], extra: &[&str]) -> Vec<String> {
        if !self.subjects.is_empty() {
            return self.subjects.clone();
        }
        let mut v: Vec<String> = paper.iter().map(|s| s.to_string()).collect();
        if !self.paper {
            v.extend(extra.iter().map(|s| s.to_string()));
        }
        v
    }

    fn presentation(&self, subject: &str) -> Result<Presentation> {
        if Path::new(subject).is_file() {
            let src = std::fs::read_to_string(subject).with_context(|| format!("reading {subject}"))?;
            return parse_presentation(&src).with_context(|| subject.to_string());
        }
        Ok(catalog_from(&self.data, subject)?)
    }

    fn hopf(&self, subject: &str) -> Result<Hopf> {
        if Path::new(subject).is_file() {
            bail!("{subject}: Hopf checks need a catalog algebra with shipped Hopf data");
        }
        Ok(Hopf::new(&catalog_from(&self.data, subject)?)?)
    }

    fn rmatrix(&self, subject: &str) -> Result<RMatrixEntry> {
        let r = if Path::new(subject).is_file() {
            let text = std::fs::read_to_string(subject).with_context(|| format!("reading {subject}"))?;
            let (m, order) = ParamMatrix::from_json(&text).with_context(|| subject.to_string())?;
            RMatrixEntry::new(subject, m, order)?
        } else {
            rmatrix_from(&self.data, subject)?
        };
        if self.bindings.is_empty() {
            Ok(r)
        } else {
            Ok(r.instantiate(&self.bindings)?)
        }
    }
}

/// Folds a per-subject report into a suite report, tagging locations and
/// derived names with the subject.
fn fold(into: &mut CheckReport, part: CheckReport) {
    let tag = part.subject.clone();
    if !part.passed() {
        into.status = part.status;
    }
    for w in part.witnesses {
        into.fail(format!("{tag}: {}", w.location), w.residual);
    }
    for d in part.derived {
        into.derive(format!("{tag}: {}", d.name), d.value);
    }
    into.notes.extend(part.notes);
}

fn pairs(cfg: &SuiteConfig) -> Result<Vec<(String, String)>> {
    cfg.rmatrices()
        .into_iter()
        .filter_map(|r| paired_algebra(&r).map(|a| Ok((r.clone(), a.to_string()))))
        .collect()
}

fn run_one(cfg: &SuiteConfig, check: Check) -> Result<CheckReport> {
    let exec = cfg.exec();
    let start = Instant::now();
    let mut rep = CheckReport::new(check.name(), "");
    let mut subjects = Vec::new();
    match check {
        Check::All => unreachable!("expanded before running"),
        Check::Termination | Check::Confluence => {
            for s in cfg.algebras() {
                let p = cfg.presentation(&s)?;
                let sys = p.rewrite_system();
                if check == Check::Termination {
                    fold(&mut rep, sys.check_termination_order(p.name()));
                } else {
                    fold(&mut rep, sys.check_local_confluence_with(p.name(), exec));
                    if cfg.paper {
                        let two = sys.tensor_power(2);
                        fold(
                            &mut rep,
                            two.check_termination_order(&format!("{} (x) {}", p.name(), p.name())),
                        );
                        fold(
                            &mut rep,
                            two.check_local_confluence_with(&format!("{} (x) {}", p.name(), p.name()), exec),
                        );
                    }
                }
                subjects.push(p.name().to_string());
            }
        }
        Check::Qybe => {
            for s in cfg.rmatrices() {
                let r = cfg.rmatrix(&s)?;
                fold(&mut rep, qybe_check_entry(&r, exec)?);
                subjects.push(r.name);
            }
        }
        Check::Triangularity => triangularity(cfg, &mut rep, &mut subjects)?,
        Check::ReorderConsistency => {
            fold(&mut rep, reorder_consistency(&cfg.data)?);
            subjects.push("R_Grs vs R_q_blocked".into());
        }
        Check::Contract => contraction(cfg, &mut rep, &mut subjects)?,
        Check::Rtt | Check::Span => {
            for (r, a) in pairs(cfg)? {
                let rm = cfg.rmatrix(&r)?.lex();
                let h = cfg.hopf(&a)?;
                if check == Check::Rtt {
                    fold(&mut rep, rtt_residuals(&a, &rm, h.tmatrix(), h.presentation(), exec)?);
                } else {
                    let p = h.presentation();
                    let derived = derive_relations(&rm, h.tmatrix(), exec)?;
                    let cat: Vec<NCPoly> = p.core_relations().iter().map(|r| r.difference()).collect();
                    let mut part = span_equal(&a, p.generators().len(), &derived, &cat)?;
                    part.subject = a.clone();
                    fold(&mut rep, part);
                }
                subjects.push(format!("{r}/{a}"));
            }
        }
        Check::Bialgebra | Check::Antipode | Check::Central | Check::Grouplike => {
            for s in cfg.algebras() {
                let h = cfg.hopf(&s)?;
                if check == Check::Grouplike && h.data().determinant.is_none() {
                    continue;
                }
                let part = match check {
                    Check::Bialgebra => h.check_bialgebra(exec)?,
                    Check::Antipode => h.check_antipode()?,
                    Check::Central => h.check_central()?,
                    _ => h.check_grouplike()?,
                };
                fold(&mut rep, part);
                subjects.push(h.presentation().name().to_string());
            }
        }
        Check::Morphism => {
            let sources = if cfg.subjects.is_empty() {
                vec!["Grs".to_string(), "Gmk".to_string()]
            } else {
                cfg.subjects.clone()
            };
            for s in sources {
                let p = cfg.presentation(&s)?;
                fold(&mut rep, check_morphism(&p, &cfg.ns, exec)?);
                subjects.push(format!("{} N={:?}", p.name(), cfg.ns));
            }
        }
        Check::ExpCorrespondence => {
            for &n in &cfg.ns {
                fold(&mut rep, check_exponential_correspondence(n)?);
            }
            subjects.push(format!("N={:?}", cfg.ns));
        }
        Check::Mutation => {
            fold(&mut rep, check_mutations(&cfg.data, exec)?);
            subjects.push("golden data".into());
        }
    }
    rep.subject = subjects.join(", ");
    Ok(rep.timed(start))
}

fn triangularity(cfg: &SuiteConfig, rep: &mut CheckReport, subjects: &mut Vec<String>) -> Result<()> {
    let exec = cfg.exec();
    if !cfg.subjects.is_empty() {
        for s in &cfg.subjects {
            let r = cfg.rmatrix(s)?;
            fold(rep, triangularity_check_entry(&r, exec)?);
            subjects.push(r.name);
        }
        return Ok(());
    }
    let mut tri = vec!["R_Gmk"];
    if !cfg.paper {
        tri.push("R_h2");
    }
    for name in tri {
        fold(rep, triangularity_check_entry(&rmatrix_from(&cfg.data, name)?, exec)?);
        subjects.push(name.to_string());
    }
    // The standard matrix is not triangular at a generic rational point.
    let mut at = Bindings::new();
    at.insert(ParamName::of("r"), Scalar::from_int(2));
    at.insert(ParamName::of("s"), Scalar::from_int(3));
    let grs = rmatrix_from(&cfg.data, "R_Grs")?.instantiate(&at)?;
    let part = triangularity_check_entry(&grs, exec)?;
    match part.witnesses.first() {
        Some(w) => rep.derive(
            "R_Grs at r=2, s=3",
            format!("not triangular: {} = {}", w.location, w.residual),
        ),
        None => rep.fail("R_Grs at r=2, s=3", "R21 R12 = I, expected a nonzero residual"),
    }
    subjects.push("R_Grs(r=2, s=3)".into());
    Ok(())
}

fn contraction(cfg: &SuiteConfig, rep: &mut CheckReport, subjects: &mut Vec<String>) -> Result<()> {
    let exec = cfg.exec();
    let data = &cfg.data;
    let r_gmk = rmatrix_from(data, "R_Gmk")?;
    let r_h2 = rmatrix_from(data, "R_h2")?;
    let plan9 = ContractionPlan::paper9(data)?;
    fold(rep, plan9.validate()?);
    fold(rep, contract_check(&plan9, &r_gmk, exec)?);
    let mut h = Bindings::new();
    h.insert(ParamName::of("h"), Scalar::var("m"));
    let plan4 = ContractionPlan::gl2(data)?;
    fold(rep, plan4.validate()?);
    fold(rep, contract_check(&plan4, &r_h2.instantiate(&h)?, exec)?);
    fold(rep, embedded_block_check(&r_gmk, &r_h2, &h)?);
    subjects.extend(["paper9 -> R_Gmk", "gl2 -> R_h2", "R_h2 in R_Gmk"].map(String::from));
    if !cfg.paper {
        fold(
            rep,
            embedded_block_check(
                &rmatrix_from(data, "R_q_blocked")?,
                &rmatrix_from(data, "R_GLr2")?,
                &Bindings::new(),
            )?,
        );
        let mut k0 = Bindings::new();
        k0.insert(ParamName::of("k"), Scalar::zero());
        let got = contract(&plan9.clone().specialize(&k0)?, exec)?;
        let want = r_gmk.matrix.instantiate(&k0)?;
        if let Some((i, j, d)) = got.first_difference(&want) {
            rep.fail(format!("k=0: entry ({}, {})", i + 1, j + 1), d.to_string());
        }
        let w = Scalar::parse("1 + k*t + w*t^2")?;
        let bent = plan9.with_path(ParamName::of("s"), w);
        fold(rep, contract_check(&bent, &r_gmk, exec)?);
        subjects.extend(["R_GLr2 in R_q_blocked", "k=0", "s = 1 + k t + w t^2"].map(String::from));
    }
    Ok(())
}

/// Runs every selected check in suite order. With `parallel`, independent
/// checks run concurrently; the report order does not change.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let checks = cfg.expanded();
    if checks.is_empty() {
        bail!("no checks selected");
    }
    if cfg.ns.iter().any(|&n| n < 1) {
        bail!("--N must be at least 1");
    }
    cfg.exec().map(&checks, |&c| run_one(cfg, c)).into_iter().collect()
}
