//! Golden data: presentations, Hopf data and R-matrices.
//!
//! Files ship embedded in the library. A directory override (the CLI reads
//! `QGW_DATA_DIR`) takes precedence file by file.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const EMBEDDED: &[(&str, &str)] = &[
    ("presentations/grs.qgw", include_str!("../data/presentations/grs.qgw")),
    ("presentations/gmk.qgw", include_str!("../data/presentations/gmk.qgw")),
    ("presentations/glr2.qgw", include_str!("../data/presentations/glr2.qgw")),
    ("presentations/glh2.qgw", include_str!("../data/presentations/glh2.qgw")),
    ("hopf.toml", include_str!("../data/hopf.toml")),
    ("mutations.toml", include_str!("../data/mutations.toml")),
    ("rmatrices/R_Grs.json", include_str!("../data/rmatrices/R_Grs.json")),
    (
        "rmatrices/R_q_blocked.json",
        include_str!("../data/rmatrices/R_q_blocked.json"),
    ),
    ("rmatrices/R_GLr2.json", include_str!("../data/rmatrices/R_GLr2.json")),
    ("rmatrices/R_Gmk.json", include_str!("../data/rmatrices/R_Gmk.json")),
    ("rmatrices/R_h2.json", include_str!("../data/rmatrices/R_h2.json")),
    ("report.schema.json", include_str!("../data/report.schema.json")),
];

pub const DATA_DIR_ENV: &str = "QGW_DATA_DIR";

#[derive(Clone, Debug, Default)]
pub struct DataDir {
    root: Option<PathBuf>,
}

impl DataDir {
    pub fn embedded() -> Self {
        DataDir { root: None }
    }

    pub fn at(root: impl Into<PathBuf>) -> Self {
        DataDir {
            root: Some(root.into()),
        }
    }

    /// Honors `QGW_DATA_DIR` when set.
    pub fn from_env() -> Self {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(p) if !p.is_empty() => DataDir::at(p),
            _ => DataDir::embedded(),
        }
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    pub fn read(&self, rel: &str) -> Result<String> {
        if let Some(root) = &self.root {
            let path = root.join(rel);
            if path.exists() {
                return std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source });
            }
        }
        EMBEDDED
            .iter()
            .find(|(name, _)| *name == rel)
            .map(|(_, body)| body.to_string())
            .ok_or_else(|| Error::Data(format!("no data file `{rel}`")))
    }

    pub fn file_names() -> impl Iterator<Item = &'static str> {
        EMBEDDED.iter().map(|(n, _)| *n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_files_resolve() {
        let d = DataDir::embedded();
        for name in DataDir::file_names() {
            assert!(!d.read(name).unwrap().is_empty(), "{name}");
        }
        assert!(d.read("nope").is_err());
    }

    #[test]
    fn directory_override_falls_back() {
        let dir = std::env::temp_dir().join(format!("qgw-data-{}", std::process::id()));
        std::fs::create_dir_all(dir.join("presentations")).unwrap();
        std::fs::write(dir.join("presentations/grs.qgw"), "algebra X\n").unwrap();
        let d = DataDir::at(&dir);
        assert_eq!(d.read("presentations/grs.qgw").unwrap(), "algebra X\n");
        assert!(d.read("hopf.toml").unwrap().contains("[gmk]"));
        std::fs::remove_dir_all(&dir).ok();
    }
}
