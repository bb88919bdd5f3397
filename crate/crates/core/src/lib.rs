//! Exact computations in self-similar groups acting on d-adic rooted trees.
//!
//! Elements are freely reduced words over the generators of a wreath
//! recursion table; their semantics (sections, action, portraits) are
//! computed lazily and equality is decided by exploring sections.

pub mod analysis;
pub mod cli;
pub mod decision;
pub mod error;
pub mod mfamily;
pub mod parse;
pub mod perm;
pub mod presentation;
pub mod word;
pub mod wreath;

pub use decision::{Decider, InfiniteOrderCertificate, OrderResult, Verdict};
pub use error::{Error, Result};
pub use mfamily::{build_m, MFamily};
pub use parse::parse_word;
pub use perm::Permutation;
pub use presentation::{load_presentation, Generator, Presentation};
pub use word::{free_reduce, Letter, Word};
pub use wreath::{Portrait, Vertex};
