//! Dense exact matrices over [`Scalar`] and over [`NCPoly`].
//!
//! Composite indices of a tensor square are row-major: `(i, j) -> d*i + j`
//! (0-based). Other labelings are expressed with an [`IndexOrder`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ncpoly::{Alphabet, NCPoly};
use crate::scalar::{Bindings, MPoly, ParamName, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ParamMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ParamMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let entries = (0..rows * cols).map(|p| f(p / cols, p % cols)).collect();
        ParamMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ParamMatrix::from_fn(rows, cols, |_, _| Scalar::zero())
    }

    pub fn identity(n: usize) -> Self {
        ParamMatrix::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    /// Rows of expressions in the scalar grammar.
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            for s in row {
                entries.push(Scalar::parse(s.as_ref())?);
            }
        }
        ParamMatrix::new(n, m, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.entries[i * self.cols + j] = x;
    }

    fn same_shape(&self, other: &ParamMatrix, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ParamMatrix) -> Result<ParamMatrix> {
        self.same_shape(other, "add")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(ParamMatrix { entries, ..*self })
    }

    pub fn sub(&self, other: &ParamMatrix) -> Result<ParamMatrix> {
        self.same_shape(other, "sub")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Ok(ParamMatrix { entries, ..*self })
    }

    pub fn scale(&self, c: &Scalar) -> ParamMatrix {
        self.map(|x| x.mul(c))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> ParamMatrix {
        ParamMatrix {
            entries: self.entries.iter().map(f).collect(),
            ..*self
        }
    }

    pub fn try_map(&self, f: impl Fn(usize, usize, &Scalar) -> Result<Scalar>) -> Result<ParamMatrix> {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(p, x)| f(p / self.cols, p % self.cols, x))
            .collect::<Result<_>>()?;
        Ok(ParamMatrix { entries, ..*self })
    }

    pub fn matmul(&self, other: &ParamMatrix) -> Result<ParamMatrix> {
        self.matmul_with(other, Exec::default())
    }

    /// Product computed entry by entry, optionally in parallel.
    pub fn matmul_with(&self, other: &ParamMatrix, exec: Exec) -> Result<ParamMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m) = (self.rows, other.cols);
        let entries = exec.map_range(n * m, |p| {
            let (i, j) = (p / m, p % m);
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, j);
                if !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        });
        Ok(ParamMatrix {
            rows: n,
            cols: m,
            entries,
        })
    }

    /// Kronecker product, lexicographic composite indices.
    pub fn kron(&self, other: &ParamMatrix) -> ParamMatrix {
        let (p, q) = (other.rows, other.cols);
        ParamMatrix::from_fn(self.rows * p, self.cols * q, |i, j| {
            self.get(i / p, j / q).mul(other.get(i % p, j % q))
        })
    }

    pub fn transpose(&self) -> ParamMatrix {
        ParamMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// First entry (row-major) where the matrices differ, with `self - other`.
    pub fn first_difference(&self, other: &ParamMatrix) -> Option<(usize, usize, Scalar)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0, Scalar::zero()));
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|p| {
                let (i, j) = (p / self.cols, p % self.cols);
                (i, j, self.get(i, j).sub(other.get(i, j)))
            })
    }

    /// Conjugation by the permutation of `ord`: `x'[ord(p), ord(q)] = x[p, q]`.
    pub fn reorder(&self, ord: &IndexOrder) -> Result<ParamMatrix> {
        if !self.is_square() || self.rows != ord.len() {
            return Err(Error::DimensionMismatch(format!(
                "reorder: {}x{} matrix with an order on {} indices",
                self.rows,
                self.cols,
                ord.len()
            )));
        }
        let inv = ord.inverse();
        Ok(ParamMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(inv.apply(i), inv.apply(j)).clone()
        }))
    }

    /// The `d^3 x d^3` matrix acting as `self` on the named legs.
    pub fn leg_embed(&self, legs: Legs, d: usize) -> Result<ParamMatrix> {
        if !self.is_square() || self.rows != d * d {
            return Err(Error::DimensionMismatch(format!(
                "leg_embed: {}x{} matrix is not on a tensor square of dimension {d}",
                self.rows, self.cols
            )));
        }
        let n = d * d * d;
        let split = |x: usize| (x / (d * d), (x / d) % d, x % d);
        Ok(ParamMatrix::from_fn(n, n, |p, q| {
            let (i, j, k) = split(p);
            let (i2, j2, k2) = split(q);
            let ((x, y, x2, y2), spectator) = match legs {
                Legs::L12 => ((i, j, i2, j2), k == k2),
                Legs::L13 => ((i, k, i2, k2), j == j2),
                Legs::L23 => ((j, k, j2, k2), i == i2),
            };
            if !spectator {
                return Scalar::zero();
            }
            self.get(x * d + y, x2 * d + y2).clone()
        }))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<ParamMatrix> {
        for &i in rows {
            if i >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: self.rows,
                });
            }
        }
        for &j in cols {
            if j >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    dim: self.cols,
                });
            }
        }
        Ok(ParamMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        }))
    }

    /// Exact parameter substitution.
    pub fn instantiate(&self, bindings: &Bindings) -> Result<ParamMatrix> {
        self.try_map(|_, _, x| x.substitute(bindings))
    }

    /// Entrywise limit at `t = 0`; a pole names its entry (1-based).
    pub fn limit_at_zero(&self, t: ParamName) -> Result<ParamMatrix> {
        self.try_map(|i, j, x| {
            x.limit_at_zero(t).map_err(|e| match e {
                Error::PoleAtZero { var, context } => Error::PoleAtZero {
                    var,
                    context: format!(" at entry ({}, {}){context}", i + 1, j + 1),
                },
                e => e,
            })
        })
    }

    /// Inverse by Gauss-Jordan elimination over the rational-function field.
    pub fn inverse(&self) -> Result<ParamMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut row: Vec<Scalar> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(col, piv);
            let inv = a[col][col].inv()?;
            for x in a[col].iter_mut() {
                *x = x.mul(&inv);
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * n {
                        let v = a[r][c].sub(&f.mul(&a[col][c]));
                        a[r][c] = v;
                    }
                }
            }
        }
        Ok(ParamMatrix::from_fn(n, n, |i, j| a[i][n + j].clone()))
    }

    /// Rank over the rational-function field, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<MPoly>> = (0..self.rows).map(|i| self.cleared_row(i)).collect();
        let mut rank = 0;
        let mut prev = MPoly::one();
        for col in 0..self.cols {
            let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, piv);
            let p = rows[rank][col].clone();
            for r in rank + 1..rows.len() {
                let f = rows[r][col].clone();
                for c in col..self.cols {
                    let v = p.mul(&rows[r][c]).sub(&f.mul(&rows[rank][c]));
                    rows[r][c] = match v.exact_div(&prev) {
                        Some(q) => q,
                        None => return self.rank_by_division(),
                    };
                }
            }
            prev = p;
            rank += 1;
        }
        rank
    }

    fn cleared_row(&self, i: usize) -> Vec<MPoly> {
        let den = (0..self.cols).fold(MPoly::one(), |acc, j| {
            let d = self.get(i, j).denom();
            if d.is_one() || acc.exact_div(d).is_some() {
                acc
            } else {
                acc.mul(d)
            }
        });
        (0..self.cols)
            .map(|j| {
                let x = self.get(i, j);
                let q = den.exact_div(x.denom()).expect("denominator divides the product");
                x.numer().mul(&q)
            })
            .collect()
    }

    fn rank_by_division(&self) -> usize {
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = rows[rank][col].inv().expect("nonzero pivot");
            for r in rank + 1..rows.len() {
                let f = rows[r][col].mul(&inv);
                for c in col..self.cols {
                    let v = rows[r][c].sub(&f.mul(&rows[rank][c]));
                    rows[r][c] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// A solution of `self * x = b`, free variables set to 0; `None` if the
    /// system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let n = self.cols;
        let mut a: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<Scalar> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.push(b[i].clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = a[rank][col].inv()?;
            for x in a[rank].iter_mut() {
                *x = x.mul(&inv);
            }
            for r in 0..a.len() {
                if r != rank && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..=n {
                        let v = a[r][c].sub(&f.mul(&a[rank][c]));
                        a[r][c] = v;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if a[rank..].iter().any(|row| !row[n].is_zero()) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = a[r][n].clone();
        }
        Ok(Some(x))
    }

    pub fn to_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn to_file(&self, order: OrderTag) -> Result<MatrixFile> {
        let dim = (self.rows as f64).sqrt().round() as usize;
        if !self.is_square() || dim * dim != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not a tensor-square matrix",
                self.rows, self.cols
            )));
        }
        Ok(MatrixFile {
            dim,
            order,
            entries: self.to_rows(),
        })
    }

    pub fn to_json(&self, order: OrderTag) -> Result<String> {
        let f = self.to_file(order)?;
        Ok(serde_json::to_string_pretty(&f).expect("serializable"))
    }

    /// Parses a matrix file; returns the matrix with its order tag.
    pub fn from_json(text: &str) -> Result<(ParamMatrix, OrderTag)> {
        let f: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Data(format!("matrix JSON: {e}")))?;
        f.into_matrix()
    }
}

impl fmt::Display for ParamMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_rows();
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}", w = *w))
                .collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrderTag {
    #[default]
    Lex,
    Block9,
}

/// On-disk matrix: `{"dim": d, "order": "lex"|"block9", "entries": [[..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    #[serde(default)]
    pub order: OrderTag,
    pub entries: Vec<Vec<String>>,
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<(ParamMatrix, OrderTag)> {
        let n = self.dim * self.dim;
        if self.entries.len() != n || self.entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix file with dim {} must be {n}x{n}",
                self.dim
            )));
        }
        if self.order == OrderTag::Block9 && self.dim != 3 {
            return Err(Error::Data("block9 order requires dim 3".into()));
        }
        Ok((ParamMatrix::parse_rows(&self.entries)?, self.order))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Legs {
    L12,
    L13,
    L23,
}

/// A permutation of the composite indices of a tensor square:
/// lexicographic position `p` goes to position `apply(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexOrder {
    perm: Vec<usize>,
}

impl IndexOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(IndexOrder { perm })
    }

    pub fn identity(n: usize) -> Self {
        IndexOrder { perm: (0..n).collect() }
    }

    /// From the list of composite pairs `(i, j)` (1-based) in their new
    /// order.
    pub fn from_pairs(d: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut perm = vec![usize::MAX; pairs.len()];
        for (pos, &(i, j)) in pairs.iter().enumerate() {
            if i == 0 || j == 0 || i > d || j > d || pairs.len() != d * d {
                return Err(Error::DimensionMismatch(format!("bad composite index ({i}{j})")));
            }
            perm[(i - 1) * d + (j - 1)] = pos;
        }
        IndexOrder::new(perm)
    }

    /// (11),(12),(21),(22),(13),(23),(31),(32),(33).
    pub fn block9() -> Self {
        IndexOrder::from_pairs(
            3,
            &[(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3), (3, 1), (3, 2), (3, 3)],
        )
        .expect("valid order")
    }

    pub fn for_tag(tag: OrderTag, n: usize) -> Self {
        match tag {
            OrderTag::Lex => IndexOrder::identity(n),
            OrderTag::Block9 => IndexOrder::block9(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, p: usize) -> usize {
        self.perm[p]
    }

    pub fn inverse(&self) -> IndexOrder {
        let mut inv = vec![0; self.perm.len()];
        for (p, &q) in self.perm.iter().enumerate() {
            inv[q] = p;
        }
        IndexOrder { perm: inv }
    }
}

/// Matrix of algebra elements.
#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix {
    alphabet: Arc<Alphabet>,
    rows: usize,
    cols: usize,
    entries: Vec<NCPoly>,
}

impl OpMatrix {
    pub fn new(alphabet: &Arc<Alphabet>, rows: usize, cols: usize, entries: Vec<NCPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(OpMatrix {
            alphabet: alphabet.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(alphabet: &Arc<Alphabet>, rows: usize, cols: usize, f: impl Fn(usize, usize) -> NCPoly) -> Self {
        OpMatrix {
            alphabet: alphabet.clone(),
            rows,
            cols,
            entries: (0..rows * cols).map(|p| f(p / cols, p % cols)).collect(),
        }
    }

    pub fn identity(alphabet: &Arc<Alphabet>, n: usize) -> Self {
        OpMatrix::from_fn(alphabet, n, n, |i, j| {
            if i == j {
                NCPoly::one(alphabet)
            } else {
                NCPoly::zero(alphabet)
            }
        })
    }

    pub fn from_params(alphabet: &Arc<Alphabet>, m: &ParamMatrix) -> Self {
        OpMatrix::from_fn(alphabet, m.rows, m.cols, |i, j| {
            NCPoly::scalar(alphabet, m.get(i, j).clone())
        })
    }

    pub fn parse_rows<S: AsRef<str>>(
        alphabet: &Arc<Alphabet>,
        params: Option<&[ParamName]>,
        rows: &[Vec<S>],
    ) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            for s in row {
                entries.push(NCPoly::parse(alphabet, params, s.as_ref())?);
            }
        }
        OpMatrix::new(alphabet, n, m, entries)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[NCPoly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &NCPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn map(&self, f: impl Fn(&NCPoly) -> NCPoly) -> OpMatrix {
        OpMatrix {
            alphabet: self.alphabet.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&NCPoly) -> Result<NCPoly> + Sync + Send, exec: Exec) -> Result<OpMatrix> {
        let entries = exec.map(&self.entries, f).into_iter().collect::<Result<_>>()?;
        Ok(OpMatrix {
            alphabet: self.alphabet.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &OpMatrix) -> Result<OpMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("sub: shapes differ".into()));
        }
        Ok(OpMatrix {
            alphabet: self.alphabet.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn matmul(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.matmul_with(other, Exec::default())
    }

    pub fn matmul_with(&self, other: &OpMatrix, exec: Exec) -> Result<OpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !Arc::ptr_eq(&self.alphabet, &other.alphabet) && self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let (n, m) = (self.rows, other.cols);
        let entries = exec.map_range(n * m, |p| {
            let (i, j) = (p / m, p % m);
            let mut acc = NCPoly::zero(&self.alphabet);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        });
        Ok(OpMatrix {
            alphabet: self.alphabet.clone(),
            rows: n,
            cols: m,
            entries,
        })
    }

    /// Scalar matrix times operator matrix.
    pub fn left_mul(m: &ParamMatrix, x: &OpMatrix, exec: Exec) -> Result<OpMatrix> {
        OpMatrix::from_params(&x.alphabet, m).matmul_with(x, exec)
    }

    pub fn right_mul(x: &OpMatrix, m: &ParamMatrix, exec: Exec) -> Result<OpMatrix> {
        x.matmul_with(&OpMatrix::from_params(&x.alphabet, m), exec)
    }

    /// Kronecker product with entries multiplied in the algebra,
    /// `(x (*) y)[(i,j),(k,l)] = x[i,k] * y[j,l]`.
    pub fn kron(&self, other: &OpMatrix) -> OpMatrix {
        let (p, q) = (other.rows, other.cols);
        OpMatrix::from_fn(&self.alphabet, self.rows * p, self.cols * q, |i, j| {
            self.get(i / p, j / q).mul(other.get(i % p, j % q))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn pm(rows: &[&[&str]]) -> ParamMatrix {
        let v: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        ParamMatrix::parse_rows(&v).unwrap()
    }

    fn g3() -> ParamMatrix {
        pm(&[&["1", "eta", "0"], &["0", "1", "0"], &["0", "0", "1"]])
    }

    #[test]
    fn kron_examples() {
        assert_eq!(
            ParamMatrix::identity(3).kron(&ParamMatrix::identity(3)),
            ParamMatrix::identity(9)
        );
        let g = pm(&[&["1", "eta"], &["0", "1"]]);
        let gg = g.kron(&g);
        assert_eq!(*gg.get(0, 3), Scalar::parse("eta^2").unwrap());
        for i in 0..4 {
            for j in 0..i {
                assert!(gg.get(i, j).is_zero());
            }
        }
        let big = g3().kron(&g3());
        assert!(big.get(8, 8).is_one());
        assert_eq!(big.rows(), 9);
    }

    #[test]
    fn block9_moves_13_to_position_5() {
        let ord = IndexOrder::block9();
        assert_eq!(ord.apply(2), 4);
        let mut x = ParamMatrix::zeros(9, 9);
        x.set(2, 2, Scalar::var("s"));
        let y = x.reorder(&ord).unwrap();
        assert_eq!(*y.get(4, 4), Scalar::var("s"));
        assert_eq!(x.reorder(&IndexOrder::identity(9)).unwrap(), x);
        assert_eq!(y.reorder(&ord.inverse()).unwrap(), x);
        assert!(matches!(
            ParamMatrix::identity(4).reorder(&ord),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn leg_embeddings() {
        assert_eq!(
            ParamMatrix::identity(9).leg_embed(Legs::L12, 3).unwrap(),
            ParamMatrix::identity(27)
        );
        let x = ParamMatrix::from_fn(9, 9, |i, j| Scalar::from_int((i * 9 + j) as i64));
        assert_eq!(x.leg_embed(Legs::L12, 3).unwrap(), x.kron(&ParamMatrix::identity(3)));
        assert_eq!(x.leg_embed(Legs::L23, 3).unwrap(), ParamMatrix::identity(3).kron(&x));
        assert_eq!(x.leg_embed(Legs::L13, 3).unwrap().trace(), x.trace().mul(&int(3)));
        assert!(x.leg_embed(Legs::L12, 2).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ParamMatrix::identity(9).rank(), 9);
        assert_eq!(pm(&[&["r", "1"], &["r^2", "r"]]).rank(), 1);
        assert_eq!(pm(&[&["r", "1"], &["1", "r"]]).rank(), 2);
        assert_eq!(pm(&[&["1/r", "1/(r-1)"], &["1/(r^2-r)", "1/(r-1)^2"]]).rank(), 1);
        assert_eq!(ParamMatrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn inverse_of_transform() {
        let g = g3();
        let gi = g.inverse().unwrap();
        assert_eq!(*gi.get(0, 1), Scalar::parse("-eta").unwrap());
        assert!(g.matmul(&gi).unwrap().is_identity());
        assert!(pm(&[&["1", "r"], &["1", "r"]]).inverse().is_err());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = pm(&[&["1", "r"], &["0", "1"], &["1", "r + 1"]]);
        let b: Vec<Scalar> = ["2", "s", "2 + s"].iter().map(|s| Scalar::parse(s).unwrap()).collect();
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x[1], Scalar::var("s"));
        assert_eq!(x[0], Scalar::parse("2 - r*s").unwrap());
        let bad: Vec<Scalar> = ["2", "s", "s"].iter().map(|s| Scalar::parse(s).unwrap()).collect();
        assert!(a.solve(&bad).unwrap().is_none());
    }

    #[test]
    fn submatrix_bounds() {
        let x = ParamMatrix::identity(9);
        assert_eq!(
            x.submatrix(&[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap(),
            ParamMatrix::identity(4)
        );
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(x.submatrix(&all, &all).unwrap(), x);
        assert!(matches!(
            x.submatrix(&[9], &[0]),
            Err(Error::IndexOutOfRange { index: 9, dim: 9 })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let x = pm(&[
            &["r", "0", "0", "0"],
            &["0", "1", "r - r^-1", "0"],
            &["0", "0", "1", "0"],
            &["0", "0", "0", "r"],
        ]);
        let text = x.to_json(OrderTag::Lex).unwrap();
        let (y, tag) = ParamMatrix::from_json(&text).unwrap();
        assert_eq!(x, y);
        assert_eq!(tag, OrderTag::Lex);
        assert!(ParamMatrix::from_json(r#"{"dim": 2, "entries": [["1"]]}"#).is_err());
        assert!(ParamMatrix::from_json(r#"{"dim": 1, "entries": [["1"]], "extra": 0}"#).is_err());
    }

    #[test]
    fn limit_reports_entry() {
        let x = pm(&[&["1", "1/t"]]);
        match x.limit_at_zero(ParamName::of("t")) {
            Err(Error::PoleAtZero { context, .. }) => assert!(context.contains("(1, 2)"), "{context}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn op_matrix_products() {
        let al = Alphabet::new(&["a", "b", "c", "d"]);
        let t = OpMatrix::parse_rows(&al, None, &[vec!["a", "b"], vec!["c", "d"]]).unwrap();
        let tt = t.matmul(&t).unwrap();
        assert_eq!(tt.get(0, 0).render(), "b*c + a*a");
        let i2 = OpMatrix::identity(&al, 2);
        let t1 = t.kron(&i2);
        let t2 = i2.kron(&t);
        let p = t1.matmul(&t2).unwrap();
        // (T1 T2)[(i,j),(k,l)] = T[i,k] T[j,l]
        assert_eq!(*p.get(1, 2), t.get(0, 1).mul(t.get(1, 0)));
        let seq = t1.matmul_with(&t2, Exec::Sequential).unwrap();
        assert_eq!(seq, p);
    }
}
