pub mod data;
pub mod error;
pub mod exec;
pub mod expr;
pub mod hopf;
pub mod linalg;
pub mod morphism;
pub mod mutations;
pub mod ncpoly;
pub mod presentations;
pub mod report;
pub mod rewrite;
pub mod rmatrix;
pub mod scalar;

pub use error::{Error, Result};
pub use exec::Exec;
pub use ncpoly::{Alphabet, Letter, NCPoly, Word};
pub use report::{CheckReport, Status};
pub use rewrite::{RewriteRule, RewriteSystem, Strategy};
pub use scalar::{ParamName, Scalar};
