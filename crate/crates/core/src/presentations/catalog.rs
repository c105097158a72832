use std::collections::BTreeMap;

use serde::Deserialize;

use super::{parse_presentation, Presentation};
use crate::data::DataDir;
use crate::error::{Error, Result};
use crate::ncpoly::NCPoly;

pub const CATALOG_NAMES: [&str; 4] = ["Grs", "Gmk", "GLr2", "GLh2"];

fn file_key(name: &str) -> Result<&'static str> {
    CATALOG_NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(name))
        .map(|n| match *n {
            "Grs" => "grs",
            "Gmk" => "gmk",
            "GLr2" => "glr2",
            _ => "glh2",
        })
        .ok_or_else(|| Error::UnknownPresentation(name.to_string()))
}

/// A catalog presentation from the embedded data.
pub fn catalog(name: &str) -> Result<Presentation> {
    catalog_from(&DataDir::embedded(), name)
}

pub fn catalog_from(data: &DataDir, name: &str) -> Result<Presentation> {
    let key = file_key(name)?;
    parse_presentation(&data.read(&format!("presentations/{key}.qgw"))?)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfData {
    pub tmatrix: Vec<Vec<String>>,
    pub casimir: String,
    #[serde(default)]
    pub casimir_alt: Vec<String>,
    #[serde(default)]
    pub determinant: Option<String>,
    pub adjugate: [[String; 2]; 2],
}

pub fn hopf_data(data: &DataDir, name: &str) -> Result<HopfData> {
    let key = file_key(name)?;
    let all: BTreeMap<String, HopfData> =
        toml::from_str(&data.read("hopf.toml")?).map_err(|e| Error::Data(format!("hopf.toml: {e}")))?;
    all.get(key)
        .cloned()
        .ok_or_else(|| Error::Data(format!("hopf.toml has no entry `{key}`")))
}

#[derive(Clone, Debug)]
pub struct NamedElement {
    pub name: String,
    pub element: NCPoly,
}

/// The distinguished elements of a catalog presentation: `D`, then the
/// determinant `delta = D f` when the algebra has one, then alternative
/// expressions of `D` (named `D_alt1`, ...).
pub fn central_candidates(p: &Presentation) -> Result<Vec<NamedElement>> {
    let h = hopf_data(&DataDir::embedded(), p.name())?;
    let mut out = vec![NamedElement {
        name: "D".into(),
        element: p.element(&h.casimir)?,
    }];
    if let Some(det) = &h.determinant {
        out.push(NamedElement {
            name: "delta".into(),
            element: p.element(det)?,
        });
    }
    for (i, alt) in h.casimir_alt.iter().enumerate() {
        out.push(NamedElement {
            name: format!("D_alt{}", i + 1),
            element: p.element(alt)?,
        });
    }
    Ok(out)
}
