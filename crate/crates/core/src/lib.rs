//! Finite universal algebra workbench: operation tables, congruences,
//! congruence identities over relation compositions, the sharpness
//! constructions for near-unanimity varieties, and free-algebra based search
//! for Maltsev-condition levels.

pub mod algebra;
pub mod boxes;
pub mod certificate;
pub mod claims;
pub mod closure;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod free;
pub mod identity;
pub mod partition;
pub mod recheck;
pub mod relation;
pub mod search;
pub mod term;
pub mod toolkit;
pub mod tuples;

pub use algebra::{Algebra, FiniteAlgebra, Operation, ProductAlgebra};
pub use certificate::{Certificate, Verdict};
pub use error::{Error, Result};
pub use exec::Exec;
pub use partition::Partition;
pub use relation::BinRelation;
pub use term::Term;
pub use tuples::FactorIndexing;
