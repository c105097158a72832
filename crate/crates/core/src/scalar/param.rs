use std::fmt;
use std::sync::{LazyLock, RwLock};

use crate::error::{Error, Result};

/// Names registered before anything else, so the monomial order used for
/// printing does not depend on which catalog happened to load first.
const PRESEEDED: &[&str] = &["r", "s", "m", "k", "eta", "t", "w", "h", "hp", "p", "q", "u", "v"];

static REGISTRY: LazyLock<RwLock<Vec<&'static str>>> = LazyLock::new(|| RwLock::new(PRESEEDED.to_vec()));

/// An interned deformation parameter.
///
/// Parameters compare by registration index, which is also the variable order
/// of the graded lexicographic monomial order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamName(u16);

impl ParamName {
    pub fn new(name: &str) -> Result<Self> {
        if !is_identifier(name) {
            return Err(Error::InvalidParamName(name.to_string()));
        }
        {
            let reg = REGISTRY.read().expect("param registry poisoned");
            if let Some(i) = reg.iter().position(|n| *n == name) {
                return Ok(ParamName(i as u16));
            }
        }
        let mut reg = REGISTRY.write().expect("param registry poisoned");
        if let Some(i) = reg.iter().position(|n| *n == name) {
            return Ok(ParamName(i as u16));
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        reg.push(leaked);
        Ok(ParamName((reg.len() - 1) as u16))
    }

    /// Shorthand for names known to be valid identifiers.
    pub fn of(name: &str) -> Self {
        Self::new(name).expect("invalid parameter name")
    }

    pub fn as_str(&self) -> &'static str {
        REGISTRY.read().expect("param registry poisoned")[self.0 as usize]
    }

    pub(crate) fn index(&self) -> u16 {
        self.0
    }

    pub(crate) fn from_index(i: u16) -> Self {
        ParamName(i)
    }
}

impl fmt::Debug for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = ParamName::of("zeta_test");
        let b = ParamName::of("zeta_test");
        assert_eq!(a, b);
        assert_eq!(a.as_str(), "zeta_test");
        assert!(ParamName::of("r") < ParamName::of("s"));
    }

    #[test]
    fn rejects_bad_names() {
        assert!(ParamName::new("").is_err());
        assert!(ParamName::new("1x").is_err());
        assert!(ParamName::new("a b").is_err());
    }
}
