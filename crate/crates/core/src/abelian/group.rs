//! Finitely generated abelian groups presented by generators and
//! relations, classified by invariant factors.
//!
//! Equality (`==`) means isomorphism: two groups are equal when their
//! free ranks and invariant factor chains agree. Use
//! [`FinAbGroup::same_presentation`] for identity of presentations,
//! which is what composing homomorphisms requires.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use super::normal_forms::smith;

/// A finitely generated abelian group `Z^gens / <columns of rels>`.
#[derive(Clone)]
pub struct FinAbGroup {
    gens: usize,
    rels: IntMatrix,
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FinAbGroup {
    /// Group presented by `gens` generators and the columns of `rels`.
    pub fn from_presentation(gens: usize, rels: IntMatrix) -> Self {
        assert_eq!(rels.rows(), gens, "relation matrix must have gens rows");
        let diag = smith(&rels).diagonal();
        let mut torsion: Vec<BigInt> = Vec::new();
        let mut rank_drop = 0;
        for d in &diag {
            if d.is_zero() {
                continue;
            }
            rank_drop += 1;
            if !d.is_one() {
                torsion.push(d.abs());
            }
        }
        FinAbGroup {
            gens,
            rels,
            free_rank: gens - rank_drop,
            torsion,
        }
    }

    /// Free abelian group of rank n.
    pub fn free(n: usize) -> Self {
        FinAbGroup::from_presentation(n, IntMatrix::zeros(n, 0))
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        FinAbGroup::free(0)
    }

    /// Cyclic group of order d (d = 0 gives Z).
    pub fn cyclic(d: u64) -> Self {
        FinAbGroup::from_presentation(1, IntMatrix::from_rows(&[vec![d as i64]]))
    }

    /// Direct sum, presented blockwise.
    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let top = self
            .rels
            .hstack(&IntMatrix::zeros(self.gens, other.rels.cols()));
        let bottom = IntMatrix::zeros(other.gens, self.rels.cols()).hstack(&other.rels);
        FinAbGroup::from_presentation(self.gens + other.gens, top.vstack(&bottom))
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn rels(&self) -> &IntMatrix {
        &self.rels
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Invariant factors > 1 in ascending divisibility order.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Identity of presentations (same generators and relation matrix).
    pub fn same_presentation(&self, other: &FinAbGroup) -> bool {
        self.gens == other.gens && self.rels == other.rels
    }

    /// Canonical rendering: `0`, `Z`, `Z^2 + Z/2 + Z/4`, ...
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl PartialEq for FinAbGroup {
    /// Isomorphism: equal free rank and invariant factors.
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl Eq for FinAbGroup {}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({} ; gens={})", self.render(), self.gens)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for FinAbGroup {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.render().serialize(ser)
    }
}
