//! The presentation language.
//!
//! One declaration per line (or separated by `;`), `#` starts a comment:
//!
//! ```text
//! algebra Grs
//! params r s
//! gens a < b < c < d < f
//! inv f                      # adds the letter `finv` after all generators
//! rel a*b = r^-1*b*a
//! ```

use super::{Presentation, Relation};
use crate::error::{Error, Result};
use crate::expr;
use crate::ncpoly::{self, Alphabet};
use crate::scalar::{param::is_identifier, ParamName};

struct Stmt<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

fn statements(src: &str) -> Vec<Stmt<'_>> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for piece in line.split(';') {
            let trimmed = piece.trim_start();
            let lead = piece.len() - trimmed.len();
            let text = trimmed.trim_end();
            if !text.is_empty() {
                out.push(Stmt {
                    line: i + 1,
                    col: offset + lead + 1,
                    text,
                });
            }
            offset += piece.len() + 1;
        }
    }
    out
}

fn ident(s: &str, line: usize, col: usize, what: &str) -> Result<String> {
    if is_identifier(s) {
        Ok(s.to_string())
    } else {
        Err(Error::syntax(line, col, format!("invalid {what} name `{s}`")))
    }
}

pub fn parse_presentation(src: &str) -> Result<Presentation> {
    let stmts = statements(src);
    let mut name = None;
    let mut params = Vec::new();
    let mut gens: Option<Vec<String>> = None;
    let mut inverses: Vec<(String, String)> = Vec::new();
    let mut rels = Vec::new();

    for st in &stmts {
        let (kw, rest) = match st.text.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (st.text, ""),
        };
        let rest_col = st.col + st.text.len() - rest.len();
        match kw {
            "algebra" => {
                if name.is_some() {
                    return Err(Error::syntax(st.line, st.col, "duplicate `algebra` declaration"));
                }
                name = Some(ident(rest, st.line, rest_col, "algebra")?);
            }
            "params" => {
                for p in rest.split_whitespace() {
                    let p = ParamName::new(p)
                        .map_err(|_| Error::syntax(st.line, rest_col, format!("invalid parameter `{p}`")))?;
                    if !params.contains(&p) {
                        params.push(p);
                    }
                }
            }
            "gens" => {
                if gens.is_some() {
                    return Err(Error::syntax(st.line, st.col, "duplicate `gens` declaration"));
                }
                let mut v = Vec::new();
                for g in rest.split('<') {
                    let g = ident(g.trim(), st.line, rest_col, "generator")?;
                    if v.contains(&g) {
                        return Err(Error::syntax(
                            st.line,
                            rest_col,
                            format!("generator `{g}` declared twice"),
                        ));
                    }
                    v.push(g);
                }
                gens = Some(v);
            }
            "inv" => {
                let g = ident(rest, st.line, rest_col, "generator")?;
                let known = gens.as_ref().is_some_and(|v| v.contains(&g));
                if !known {
                    return Err(Error::UnknownGenerator {
                        name: g,
                        line: st.line,
                        col: rest_col,
                    });
                }
                let inv = format!("{g}inv");
                if !inverses.iter().any(|(x, _)| *x == g) {
                    inverses.push((g, inv));
                }
            }
            "rel" => rels.push((st, rest, rest_col)),
            other => {
                return Err(Error::syntax(st.line, st.col, format!("unknown declaration `{other}`")));
            }
        }
    }

    let name = name.ok_or_else(|| Error::syntax(1, 1, "missing `algebra` declaration"))?;
    let gens = gens.ok_or_else(|| Error::syntax(1, 1, "missing `gens` declaration"))?;
    let mut letters = gens.clone();
    letters.extend(inverses.iter().map(|(_, i)| i.clone()));
    let alphabet = Alphabet::new(&letters);

    let mut relations = Vec::new();
    for (st, rest, col) in rels {
        let Some((l, r)) = rest.split_once('=') else {
            return Err(Error::syntax(st.line, col, "expected `lhs = rhs`"));
        };
        let r_col = col + l.len() + 1;
        let parse_side = |text: &str, c: usize| -> Result<ncpoly::NCPoly> {
            let e = expr::parse_at(text, st.line, c)?;
            ncpoly::from_expr(&alphabet, Some(&params), &e, st.line)
        };
        relations.push(Relation {
            lhs: parse_side(l, col)?,
            rhs: parse_side(r, r_col)?,
        });
    }
    Presentation::with_alphabet(name, params, gens, inverses, alphabet, relations)
}
