//! Single-entry or single-term mutations of the golden data. Each mutation
//! names a check that has to fail on the mutated input.

use std::time::Instant;

use serde::Deserialize;

use crate::data::DataDir;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hopf::{rtt_residuals, Hopf};
use crate::presentations::{catalog_from, hopf_data, Presentation, Relation};
use crate::report::CheckReport;
use crate::rmatrix::{paired_algebra, qybe_check_entry, rmatrix_from, triangularity_check_entry, RMatrixEntry};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mutation {
    pub check: String,
    pub subject: String,
    /// 1-based `[row, col]`.
    #[serde(default)]
    pub entry: Option<[usize; 2]>,
    /// 1-based index into the presentation's relations.
    #[serde(default)]
    pub relation: Option<usize>,
    pub value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MutationFile {
    mutation: Vec<Mutation>,
}

pub fn load_mutations(data: &DataDir) -> Result<Vec<Mutation>> {
    let f: MutationFile =
        toml::from_str(&data.read("mutations.toml")?).map_err(|e| Error::Data(format!("mutations.toml: {e}")))?;
    Ok(f.mutation)
}

impl Mutation {
    pub fn label(&self) -> String {
        match (self.entry, self.relation) {
            (Some([i, j]), _) => format!("{}[{i}, {j}] := {}", self.subject, self.value),
            (_, Some(k)) => format!("{} relation {k} := {}", self.subject, self.value),
            _ => format!("{} := {}", self.subject, self.value),
        }
    }

    fn entry(&self) -> Result<(usize, usize)> {
        match self.entry {
            Some([i, j]) if i >= 1 && j >= 1 => Ok((i - 1, j - 1)),
            _ => Err(Error::Data(format!(
                "mutation `{}` needs a 1-based entry",
                self.label()
            ))),
        }
    }

    fn mutated_rmatrix(&self, data: &DataDir) -> Result<RMatrixEntry> {
        let mut r = rmatrix_from(data, &self.subject)?;
        let (i, j) = self.entry()?;
        let n = r.matrix.rows();
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange {
                index: i.max(j) + 1,
                dim: n,
            });
        }
        r.matrix.set(i, j, Scalar::parse(&self.value)?);
        Ok(r)
    }

    fn mutated_hopf(&self, data: &DataDir) -> Result<Hopf> {
        let p = catalog_from(data, &self.subject)?;
        let mut hd = hopf_data(data, &self.subject)?;
        let (i, j) = self.entry()?;
        if i >= 2 || j >= 2 {
            return Err(Error::IndexOutOfRange {
                index: i.max(j) + 1,
                dim: 2,
            });
        }
        hd.adjugate[i][j] = self.value.clone();
        Hopf::with_data(&p, hd)
    }

    fn mutated_presentation(&self, data: &DataDir) -> Result<Presentation> {
        let p = catalog_from(data, &self.subject)?;
        let k = self
            .relation
            .filter(|k| (1..=p.relations().len()).contains(k))
            .ok_or_else(|| Error::Data(format!("mutation `{}` needs a valid relation index", self.label())))?;
        let (lhs, rhs) = self
            .value
            .split_once('=')
            .ok_or_else(|| Error::Data(format!("mutated relation `{}` has no `=`", self.value)))?;
        let mut rels = p.relations().to_vec();
        rels[k - 1] = Relation {
            lhs: p.element(lhs.trim())?,
            rhs: p.element(rhs.trim())?,
        };
        Presentation::new(
            p.name(),
            p.params().to_vec(),
            p.generators().to_vec(),
            p.inverses().to_vec(),
            rels,
        )
    }

    /// Runs the named check on the mutated data. The returned report is the
    /// check's own report, which should fail.
    pub fn run(&self, data: &DataDir, exec: Exec) -> Result<CheckReport> {
        match self.check.as_str() {
            "qybe" => qybe_check_entry(&self.mutated_rmatrix(data)?, exec),
            "triangularity" => triangularity_check_entry(&self.mutated_rmatrix(data)?, exec),
            "rtt" => {
                let r = self.mutated_rmatrix(data)?;
                let alg = paired_algebra(&r.name)
                    .ok_or_else(|| Error::Data(format!("no algebra is paired with `{}`", r.name)))?;
                let h = Hopf::new(&catalog_from(data, alg)?)?;
                rtt_residuals(&r.name, &r.lex(), h.tmatrix(), h.presentation(), exec)
            }
            "antipode" => self.mutated_hopf(data)?.check_antipode(),
            "confluence" => Ok(self
                .mutated_presentation(data)?
                .rewrite_system()
                .check_local_confluence_with(&self.subject, exec)),
            other => Err(Error::Data(format!("mutation names unknown check `{other}`"))),
        }
    }
}

/// Every shipped mutation makes its check fail with at least one witness.
pub fn check_mutations(data: &DataDir, exec: Exec) -> Result<CheckReport> {
    let start = Instant::now();
    let mut rep = CheckReport::new("mutation", "golden data");
    for m in load_mutations(data)? {
        let inner = m.run(data, exec)?;
        match inner.witnesses.first() {
            Some(w) => rep.derive(
                format!("{} on {}", m.check, m.label()),
                format!("fails at {}: {}", w.location, w.residual),
            ),
            None => rep.fail(format!("{} on {}", m.check, m.label()), "check passed on mutated data"),
        }
    }
    Ok(rep.timed(start))
}
