//! Exact computation with self-similar groups acting on rooted trees, and
//! numeric iterated monodromy actions of complex polynomials.
//!
//! Conventions used throughout:
//!
//! * Groups act on the right. In a product `gh`, `g` acts first, and
//!   restrictions compose as `(gh)|v = g|v · h|(v^g)`.
//! * A word `x1 x2 … xn` is written with its level-1 letter on the left; its
//!   parent in the tree drops the last letter.
//! * Level permutations index words lexicographically with the leftmost
//!   letter most significant.

pub mod error;
pub mod group;
pub mod limitspace;
pub mod monodromy;
pub mod nucleus;
pub mod par;
pub mod presets;
pub mod virtual_endo;

pub use error::{Error, Result};
pub use group::{GroupWord, MooreAutomaton, Permutation, Presentation, Sym};
pub use nucleus::{compute_nucleus, ContractionReport, ContractionStatus, Nucleus, NucleusBudgets};
