//! R-matrix catalog and the checks on it.

use std::time::Instant;

use crate::data::DataDir;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{IndexOrder, Legs, OrderTag, ParamMatrix};
use crate::report::CheckReport;
use crate::scalar::{Bindings, ParamName, Scalar};

pub const RMATRIX_NAMES: [&str; 5] = ["R_Grs", "R_q_blocked", "R_GLr2", "R_Gmk", "R_h2"];

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixEntry {
    pub name: String,
    /// Entries in the index order named by `order`.
    pub matrix: ParamMatrix,
    pub order: OrderTag,
}

impl RMatrixEntry {
    pub fn new(name: impl Into<String>, matrix: ParamMatrix, order: OrderTag) -> Result<Self> {
        if !matrix.is_square() || (order == OrderTag::Block9 && matrix.rows() != 9) {
            return Err(Error::DimensionMismatch(format!(
                "R-matrix of shape {}x{} in {order:?} order",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(RMatrixEntry {
            name: name.into(),
            matrix,
            order,
        })
    }

    pub fn dim(&self) -> usize {
        (self.matrix.rows() as f64).sqrt().round() as usize
    }

    pub fn params(&self) -> Vec<ParamName> {
        let mut v: Vec<ParamName> = self.matrix.entries().iter().flat_map(Scalar::params).collect();
        v.sort();
        v.dedup();
        v
    }

    /// The matrix in lexicographic composite-index order.
    pub fn lex(&self) -> ParamMatrix {
        match self.order {
            OrderTag::Lex => self.matrix.clone(),
            OrderTag::Block9 => self
                .matrix
                .reorder(&IndexOrder::block9().inverse())
                .expect("block9 matrices are 9x9"),
        }
    }

    /// Converts a lexicographic matrix into this entry's order.
    pub fn from_lex(&self, m: &ParamMatrix) -> Result<ParamMatrix> {
        match self.order {
            OrderTag::Lex => Ok(m.clone()),
            OrderTag::Block9 => m.reorder(&IndexOrder::block9()),
        }
    }

    pub fn instantiate(&self, bindings: &Bindings) -> Result<RMatrixEntry> {
        Ok(RMatrixEntry {
            name: self.name.clone(),
            matrix: self.matrix.instantiate(bindings)?,
            order: self.order,
        })
    }

    pub fn to_json(&self) -> String {
        self.matrix.to_json(self.order).expect("tensor-square matrix")
    }
}

/// The catalog presentation whose RTT relations an R-matrix generates.
pub fn paired_algebra(rmatrix: &str) -> Option<&'static str> {
    match canonical_name(rmatrix).ok()? {
        "R_Grs" => Some("Grs"),
        "R_Gmk" => Some("Gmk"),
        "R_GLr2" => Some("GLr2"),
        "R_h2" => Some("GLh2"),
        _ => None,
    }
}

fn canonical_name(name: &str) -> Result<&'static str> {
    RMATRIX_NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(name))
        .copied()
        .ok_or_else(|| Error::UnknownRMatrix(name.to_string()))
}

pub fn rmatrix(name: &str) -> Result<RMatrixEntry> {
    rmatrix_from(&DataDir::embedded(), name)
}

pub fn rmatrix_from(data: &DataDir, name: &str) -> Result<RMatrixEntry> {
    let name = canonical_name(name)?;
    let (m, order) = ParamMatrix::from_json(&data.read(&format!("rmatrices/{name}.json"))?)?;
    RMatrixEntry::new(name, m, order)
}

fn dim_of(m: &ParamMatrix) -> Result<usize> {
    let d = (m.rows() as f64).sqrt().round() as usize;
    if !m.is_square() || d * d != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not a matrix on a tensor square",
            m.rows(),
            m.cols()
        )));
    }
    Ok(d)
}

fn composite(p: usize, d: usize) -> String {
    format!("({}{})", p / d + 1, p % d + 1)
}

/// `R12 R13 R23 = R23 R13 R12` for a lexicographic `R`.
pub fn qybe_check(subject: &str, r: &ParamMatrix, exec: Exec) -> Result<CheckReport> {
    let start = Instant::now();
    let d = dim_of(r)?;
    let r12 = r.leg_embed(Legs::L12, d)?;
    let r13 = r.leg_embed(Legs::L13, d)?;
    let r23 = r.leg_embed(Legs::L23, d)?;
    let lhs = r12.matmul_with(&r13, exec)?.matmul_with(&r23, exec)?;
    let rhs = r23.matmul_with(&r13, exec)?.matmul_with(&r12, exec)?;
    let mut rep = CheckReport::new("qybe", subject);
    if let Some((i, j, diff)) = lhs.first_difference(&rhs) {
        rep.fail(
            format!("entry ({}, {}) of R12 R13 R23 - R23 R13 R12", i + 1, j + 1),
            diff.to_string(),
        );
    }
    Ok(rep.timed(start))
}

pub fn qybe_check_entry(r: &RMatrixEntry, exec: Exec) -> Result<CheckReport> {
    qybe_check(&r.name, &r.lex(), exec)
}

/// The tensor flip on a `d^2`-dimensional space, lexicographic order.
pub fn flip(d: usize) -> ParamMatrix {
    ParamMatrix::from_fn(d * d, d * d, |p, q| {
        if q == (p % d) * d + p / d {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// `(P R P) R = I` for a lexicographic `R`.
pub fn triangularity_check(subject: &str, r: &ParamMatrix, exec: Exec) -> Result<CheckReport> {
    let start = Instant::now();
    let d = dim_of(r)?;
    let p = flip(d);
    let r21 = p.matmul_with(r, exec)?.matmul_with(&p, exec)?;
    let prod = r21.matmul_with(r, exec)?;
    let mut rep = CheckReport::new("triangularity", subject);
    if let Some((i, j, diff)) = prod.first_difference(&ParamMatrix::identity(d * d)) {
        rep.fail(
            format!(
                "entry ({}, {}) = [{}, {}] of R21 R12 - I",
                i + 1,
                j + 1,
                composite(i, d),
                composite(j, d)
            ),
            diff.to_string(),
        );
    }
    Ok(rep.timed(start))
}

pub fn triangularity_check_entry(r: &RMatrixEntry, exec: Exec) -> Result<CheckReport> {
    triangularity_check(&r.name, &r.lex(), exec)
}

/// `reorder(R_Grs, block9)` equals the blocked display.
pub fn reorder_consistency(data: &DataDir) -> Result<CheckReport> {
    let start = Instant::now();
    let lex = rmatrix_from(data, "R_Grs")?;
    let blocked = rmatrix_from(data, "R_q_blocked")?;
    let mut rep = CheckReport::new("reorder-consistency", "R_Grs vs R_q_blocked");
    let mine = lex.lex().reorder(&IndexOrder::block9())?;
    for i in 0..9 {
        for j in 0..9 {
            let (a, b) = (mine.get(i, j), blocked.matrix.get(i, j));
            if a != b {
                rep.fail(format!("block entry ({}, {})", i + 1, j + 1), format!("{a} vs {b}"));
            }
        }
    }
    rep.derive("entries", "81");
    Ok(rep.timed(start))
}

/// `(R - I)^3 = 0`.
pub fn unipotence_check(r: &RMatrixEntry) -> Result<CheckReport> {
    let start = Instant::now();
    let n = r.matrix.sub(&ParamMatrix::identity(r.matrix.rows()))?;
    let cube = n.matmul(&n)?.matmul(&n)?;
    let mut rep = CheckReport::new("unipotence", &r.name);
    let zero = ParamMatrix::zeros(cube.rows(), cube.cols());
    if let Some((i, j, x)) = cube.first_difference(&zero) {
        rep.fail(format!("entry ({}, {}) of (R - I)^3", i + 1, j + 1), x.to_string());
    }
    Ok(rep.timed(start))
}

pub fn extract_block(r: &ParamMatrix, rows: &[usize], cols: &[usize]) -> Result<ParamMatrix> {
    r.submatrix(rows, cols)
}

/// Singular limit of a similarity transform along a one-parameter path.
#[derive(Clone, Debug)]
pub struct ContractionPlan {
    pub name: String,
    pub source: RMatrixEntry,
    /// `d x d` transform; the similarity is `(G^-1 (x) G^-1) R (G (x) G)`.
    pub transform: ParamMatrix,
    pub path: Bindings,
    pub limit_var: ParamName,
}

fn eta_transform(d: usize) -> ParamMatrix {
    let mut g = ParamMatrix::identity(d);
    g.set(0, 1, Scalar::var("eta"));
    g
}

fn linear_path(slope: &str, t: ParamName) -> Scalar {
    Scalar::one().add(&Scalar::var(slope).mul(&Scalar::param(t)))
}

impl ContractionPlan {
    /// The 9x9 plan: `G = diag(g, 1)`, `r = 1 + m t`, `s = 1 + k t`,
    /// `eta = 1/t`.
    pub fn paper9(data: &DataDir) -> Result<Self> {
        let t = ParamName::of("t");
        let mut path = Bindings::new();
        path.insert(ParamName::of("r"), linear_path("m", t));
        path.insert(ParamName::of("s"), linear_path("k", t));
        path.insert(ParamName::of("eta"), Scalar::param(t).inv()?);
        Ok(ContractionPlan {
            name: "paper9".into(),
            source: rmatrix_from(data, "R_q_blocked")?,
            transform: eta_transform(3),
            path,
            limit_var: t,
        })
    }

    /// The 4x4 plan on the one-parameter matrix: `r = 1 + m t`, `eta = 1/t`.
    pub fn gl2(data: &DataDir) -> Result<Self> {
        let t = ParamName::of("t");
        let mut path = Bindings::new();
        path.insert(ParamName::of("r"), linear_path("m", t));
        path.insert(ParamName::of("eta"), Scalar::param(t).inv()?);
        Ok(ContractionPlan {
            name: "gl2".into(),
            source: rmatrix_from(data, "R_GLr2")?,
            transform: eta_transform(2),
            path,
            limit_var: t,
        })
    }

    pub fn by_name(data: &DataDir, name: &str) -> Result<Self> {
        match name {
            "paper9" => ContractionPlan::paper9(data),
            "gl2" => ContractionPlan::gl2(data),
            other => Err(Error::OutOfContract(format!("unknown contraction plan `{other}`"))),
        }
    }

    /// Replaces the path value of one parameter.
    pub fn with_path(mut self, p: ParamName, value: Scalar) -> Self {
        self.path.insert(p, value);
        self
    }

    /// Substitutes `bindings` into every path value.
    pub fn specialize(mut self, bindings: &Bindings) -> Result<Self> {
        for v in self.path.values_mut() {
            *v = v.substitute(bindings)?;
        }
        Ok(self)
    }

    /// `eta = m/(r - 1)` and, when `s` is on the path, `(1-s)/(1-r) = k/m`
    /// after the limit.
    pub fn validate(&self) -> Result<CheckReport> {
        let t = self.limit_var;
        let mut rep = CheckReport::new("contraction-path", &self.name);
        let get = |n: &str| self.path.get(&ParamName::of(n)).cloned();
        let (Some(r), Some(eta)) = (get("r"), get("eta")) else {
            rep.fail("path", "r and eta must be bound");
            return Ok(rep);
        };
        let lhs = eta.mul(&r.sub(&Scalar::one()));
        if lhs != Scalar::var("m") {
            rep.fail("eta (r - 1)", lhs.to_string());
        }
        if let Some(s) = get("s") {
            let ratio = Scalar::one().sub(&s).div(&Scalar::one().sub(&r))?.limit_at_zero(t)?;
            let want = Scalar::var("k").div(&Scalar::var("m"))?;
            if ratio != want {
                rep.fail("lim (1 - s)/(1 - r)", ratio.to_string());
            }
        }
        Ok(rep)
    }
}

/// `lim_{t -> 0} (G^-1 (x) G^-1) R (G (x) G)` in the source's index order.
pub fn contract(plan: &ContractionPlan, exec: Exec) -> Result<ParamMatrix> {
    let g = plan.transform.kron(&plan.transform).instantiate(&plan.path)?;
    let gi = g.inverse()?;
    let r = plan.source.lex().instantiate(&plan.path)?;
    let conj = gi.matmul_with(&r, exec)?.matmul_with(&g, exec)?;
    let lim = conj.limit_at_zero(plan.limit_var)?;
    plan.source.from_lex(&lim)
}

/// Compares a contraction with an expected matrix, reporting every
/// differing entry.
pub fn contract_check(plan: &ContractionPlan, expected: &RMatrixEntry, exec: Exec) -> Result<CheckReport> {
    let start = Instant::now();
    let mut rep = CheckReport::new("contract", format!("{} -> {}", plan.name, expected.name));
    let got = contract(plan, exec)?;
    let want = plan.source.from_lex(&expected.lex())?;
    for i in 0..got.rows() {
        for j in 0..got.cols() {
            let (a, b) = (got.get(i, j), want.get(i, j));
            if a != b {
                rep.fail(format!("entry ({}, {})", i + 1, j + 1), format!("{a} vs {b}"));
            }
        }
    }
    Ok(rep.timed(start))
}

/// The top-left 4x4 block of a blocked 9x9 matrix equals `small` after
/// `bindings`.
pub fn embedded_block_check(big: &RMatrixEntry, small: &RMatrixEntry, bindings: &Bindings) -> Result<CheckReport> {
    let start = Instant::now();
    let mut rep = CheckReport::new("embedded-block", format!("{} in {}", small.name, big.name));
    if big.order != OrderTag::Block9 {
        return Err(Error::OutOfContract(format!("{} is not in block order", big.name)));
    }
    let idx = [0, 1, 2, 3];
    let block = extract_block(&big.matrix, &idx, &idx)?;
    let target = small.lex().instantiate(bindings)?;
    if let Some((i, j, x)) = block.first_difference(&target) {
        rep.fail(format!("entry ({}, {})", i + 1, j + 1), x.to_string());
    }
    Ok(rep.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn b(pairs: &[(&str, i64)]) -> Bindings {
        pairs.iter().map(|(n, v)| (ParamName::of(n), int(*v))).collect()
    }

    #[test]
    fn catalog_loads() {
        for n in RMATRIX_NAMES {
            let r = rmatrix(n).unwrap();
            assert!(r.dim() == 2 || r.dim() == 3);
        }
        assert!(matches!(rmatrix("R_sl3"), Err(Error::UnknownRMatrix(_))));
        assert_eq!(rmatrix("r_gmk").unwrap().name, "R_Gmk");
    }

    #[test]
    fn reorder_matches_blocked_display() {
        assert!(reorder_consistency(&DataDir::embedded()).unwrap().passed());
        let r = rmatrix("R_Grs").unwrap();
        let blocked = r.matrix.reorder(&IndexOrder::block9()).unwrap();
        assert_eq!(*blocked.get(4, 4), Scalar::var("s"));
    }

    #[test]
    fn qybe_small() {
        for n in ["R_GLr2", "R_h2"] {
            let r = rmatrix(n).unwrap();
            assert!(qybe_check_entry(&r, Exec::Sequential).unwrap().passed(), "{n}");
        }
        let r = ParamMatrix::parse_rows(&[
            vec!["1", "2", "0", "0"],
            vec!["0", "1", "0", "0"],
            vec!["0", "0", "1", "0"],
            vec!["0", "0", "0", "1"],
        ])
        .unwrap();
        let rep = qybe_check("bad", &r, Exec::Sequential).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn triangularity_examples() {
        assert!(triangularity_check("I9", &ParamMatrix::identity(9), Exec::Sequential)
            .unwrap()
            .passed());
        assert!(triangularity_check_entry(&rmatrix("R_h2").unwrap(), Exec::Sequential)
            .unwrap()
            .passed());
        let r2 = rmatrix("R_GLr2").unwrap().instantiate(&b(&[("r", 2)])).unwrap();
        let rep = triangularity_check_entry(&r2, Exec::Sequential).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.witnesses.len(), 1);
    }

    #[test]
    fn flip_is_an_involution() {
        let p = flip(3);
        assert!(p.matmul(&p).unwrap().is_identity());
        assert!(p.get(1, 3).is_one());
    }

    #[test]
    fn gl2_contraction_gives_jordanian_matrix() {
        let data = DataDir::embedded();
        let plan = ContractionPlan::gl2(&data).unwrap();
        assert!(plan.validate().unwrap().passed());
        let got = contract(&plan, Exec::Sequential).unwrap();
        let mut h = Bindings::new();
        h.insert(ParamName::of("h"), Scalar::var("m"));
        let want = rmatrix("R_h2").unwrap().matrix.instantiate(&h).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn paper9_plan_path_is_valid() {
        let plan = ContractionPlan::paper9(&DataDir::embedded()).unwrap();
        assert!(plan.validate().unwrap().passed());
        let bad = plan.with_path(ParamName::of("eta"), Scalar::var("t").inv().unwrap().mul(&int(2)));
        assert!(!bad.validate().unwrap().passed());
    }

    #[test]
    fn wrong_transform_has_a_pole() {
        let plan = ContractionPlan::gl2(&DataDir::embedded())
            .unwrap()
            .with_path(ParamName::of("eta"), Scalar::parse("1/t^2").unwrap());
        assert!(matches!(
            contract(&plan, Exec::Sequential),
            Err(Error::PoleAtZero { .. })
        ));
    }

    #[test]
    fn instantiate_examples() {
        let r = rmatrix("R_Grs")
            .unwrap()
            .instantiate(&b(&[("r", 2), ("s", 3)]))
            .unwrap();
        assert!(r.matrix.entries().iter().all(|x| x.as_rational().is_some()));
        let g = rmatrix("R_Gmk")
            .unwrap()
            .instantiate(&b(&[("m", 0), ("k", 0)]))
            .unwrap();
        assert!(g.matrix.is_identity());
        assert!(matches!(
            rmatrix("R_Grs").unwrap().instantiate(&b(&[("r", 0)])),
            Err(Error::DenominatorVanishes(_))
        ));
    }
}
