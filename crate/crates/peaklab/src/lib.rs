//! A laboratory for descent and peak statistics of permutations.
//!
//! The crate revolves around a handful of interlocking pieces:
//!
//! * [`perm`] — permutations as words of distinct positive letters, together
//!   with the classical statistics (descent set, peak sets, major index, ...).
//! * [`lacunar`] — finite integer sets, the "no two consecutive elements"
//!   predicate, and the total order on sets used to index peak data.
//! * [`comp`] — compositions of integers, descent compositions, and the
//!   split relations whose spans describe statistic kernels.
//! * [`shuffle`] — shuffles and one-sided shuffles of disjoint permutations,
//!   plus an exhaustive certifier for several compatibility notions.
//! * [`qsym`] — quasisymmetric functions in the monomial and fundamental
//!   bases, their product, and the one-sided products `prec`, `succeq`,
//!   `bel`, `tvi` with coproduct and antipode support.
//! * [`kernel`] — spans of basis differences attached to a statistic,
//!   ideal tests for the five products, and related dimension counts.
//! * [`poset`] — small labeled posets and their linear extensions.
//! * [`enriched`] — enriched order-preserving maps into signed alphabets,
//!   their generating functions, and the peak-indexed polynomial family.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals and
//! every verdict produced by a certifier or ideal test carries a concrete,
//! re-checkable witness when it is negative.

pub mod book;
pub mod comp;
pub mod enriched;
pub mod error;
pub mod kernel;
pub mod lacunar;
pub mod linalg;
pub mod perm;
pub mod poset;
pub mod qsym;
pub mod shuffle;

pub use comp::Composition;
pub use error::{Error, Result};
pub use lacunar::IntSet;
pub use perm::{Permutation, StatTag, StatValue};
pub use qsym::{Basis, QSymElement};
