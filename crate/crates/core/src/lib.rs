//! Computational workbench for right LCM monoids.
//!
//! The library works with finitely presented monoids given by positive
//! relations, with two families front and center: one-relator monoids
//! `<a, b, ... | u = v>` studied through right reversing, and Artin-Tits
//! monoids of finite type studied through their Garside structure.
//!
//! The main entry points are:
//!
//! * [`words`] / [`presentation`]: words over a finite alphabet, positive
//!   presentations, and structural sanity checks.
//! * [`rewrite`]: length-reducing rewriting for one-relator presentations
//!   whose replaced side has trivial overlap set, plus a staged word
//!   problem solver ([`rewrite::words_equal`]).
//! * [`reversing`]: right reversing of signed words, common multiples,
//!   divisibility, the cube condition, homogeneity certificates, bounded
//!   left reversibility checks, and the search for Garside-like elements.
//! * [`garside`]: finite Coxeter groups enumerated combinatorially,
//!   greedy normal forms in the corresponding Artin-Tits monoids, lattice
//!   operations, and normal-form counting.
//! * [`graph`]: finite graph models attached to one-relator monoids whose
//!   boundary path spaces the K-theory pipeline consumes.
//! * [`abelian`]: exact integer linear algebra (Hermite and Smith normal
//!   forms with transforms), finitely generated abelian groups,
//!   homomorphisms, exactness checks, sequence splicing, and extension
//!   problems.
//! * [`kpipeline`]: the integer K-theory pipelines built on top of the
//!   graph models, with matrix coefficient actions.
//! * [`fixtures`]: the named presentations and coefficient actions used
//!   throughout tests and the command line tool.
//!
//! All computations are exact over the integers; budgets guard every
//! potentially unbounded search and are reported rather than silently
//! truncated (see [`budget::Budget`]).

pub mod abelian;
pub mod budget;
pub mod fixtures;
pub mod garside;
pub mod graph;
pub mod kpipeline;
pub mod par;
pub mod presentation;
pub mod reversing;
pub mod rewrite;
pub mod words;

use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (words, presentations, matrices, subsets).
    #[error("parse error: {0}")]
    Parse(String),
    /// A presentation violates a structural invariant.
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    /// An operation's precondition does not hold for the given input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A search or iteration exceeded its budget.
    #[error("budget exhausted: {0}")]
    Budget(String),
    /// The presentation admits no (or no unique) complement for a pair of
    /// generators, so right reversing is not defined.
    #[error("presentation is not complemented: {0}")]
    NotComplemented(String),
    /// An enumeration cap was exceeded (Coxeter enumeration, closures).
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// The requested computation is out of scope.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An internal consistency check failed; indicates a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
