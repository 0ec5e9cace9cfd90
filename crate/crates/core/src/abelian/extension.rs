//! Resolving abelian extensions: given the outer groups of a short exact
//! sequence `0 -> sub -> E -> quot -> 0`, enumerate the possible middle
//! groups up to isomorphism.
//!
//! Extensions by a free quotient always split. Otherwise every middle
//! group has a presentation on the generators of `sub` followed by the
//! generators of `quot`, where each torsion relation `d * y = 0` of the
//! quotient lifts to `d * y = c` for some correction `c` in `sub`,
//! determined modulo `d * sub`. Enumerating the corrections (one
//! representative per class) covers every extension class, possibly with
//! repetition; the distinct isomorphism types are collected.

use num_bigint::BigInt;

use super::group::FinAbGroup;
use super::matrix::IntMatrix;
use crate::{Error, Result};

/// Cap on the number of correction tuples enumerated.
const MAX_COMBINATIONS: u64 = 4096;

/// Optional structural knowledge used to pick among extension classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionHint {
    /// No extra information.
    None,
    /// The subgroup is known to embed as a direct summand, so the
    /// extension splits.
    SubDirectSummand,
}

/// Outcome of [`solve_extension`].
#[derive(Debug, Clone)]
pub enum ExtensionOutcome {
    /// The extension splits for structural reasons (free quotient or a
    /// trivial outer group).
    Split(FinAbGroup),
    /// Enumeration found exactly one middle group up to isomorphism.
    Unique(FinAbGroup),
    /// Several classes exist; the hint selected the split one.
    ByHint(FinAbGroup),
    /// Several classes exist and nothing selects one; candidates are
    /// sorted and pairwise non-isomorphic.
    Undetermined(Vec<FinAbGroup>),
}

impl ExtensionOutcome {
    /// The resolved group, unless undetermined.
    pub fn group(&self) -> Option<&FinAbGroup> {
        match self {
            ExtensionOutcome::Split(g)
            | ExtensionOutcome::Unique(g)
            | ExtensionOutcome::ByHint(g) => Some(g),
            ExtensionOutcome::Undetermined(_) => None,
        }
    }

    /// All isomorphism classes consistent with the data.
    pub fn candidates(&self) -> Vec<FinAbGroup> {
        match self {
            ExtensionOutcome::Undetermined(cs) => cs.clone(),
            other => vec![other.group().expect("resolved").clone()],
        }
    }
}

/// Classification key used for sorting and deduplication.
fn iso_key(g: &FinAbGroup) -> (usize, Vec<BigInt>) {
    (g.free_rank(), g.torsion().to_vec())
}

/// Enumerates the middle groups of `0 -> sub -> E -> quot -> 0`.
pub fn solve_extension(
    sub: &FinAbGroup,
    quot: &FinAbGroup,
    hint: ExtensionHint,
) -> Result<ExtensionOutcome> {
    if sub.is_trivial() {
        return Ok(ExtensionOutcome::Split(quot.clone()));
    }
    if quot.is_trivial() {
        return Ok(ExtensionOutcome::Split(sub.clone()));
    }
    if quot.is_free() {
        return Ok(ExtensionOutcome::Split(sub.direct_sum(quot)));
    }

    // Work with the classified invariants only; the answer depends only
    // on the isomorphism types.
    let r = sub.free_rank();
    let es: Vec<BigInt> = sub.torsion().to_vec();
    let f = quot.free_rank();
    let ds: Vec<BigInt> = quot.torsion().to_vec();
    let s_gens = r + es.len();
    let q_gens = f + ds.len();

    // Ranges for each correction coordinate: free coordinates of `sub`
    // run mod d, torsion coordinate j runs mod gcd(d, e_j).
    let mut ranges: Vec<u64> = Vec::new();
    for d in &ds {
        for _ in 0..r {
            ranges.push(to_u64(d)?);
        }
        for e in &es {
            ranges.push(to_u64(&num_integer::gcd(d.clone(), e.clone()))?);
        }
    }
    let mut total: u64 = 1;
    for &m in &ranges {
        total = total.saturating_mul(m.max(1));
        if total > MAX_COMBINATIONS {
            return Err(Error::CapExceeded(format!(
                "extension enumeration needs more than {MAX_COMBINATIONS} correction tuples"
            )));
        }
    }

    let mut seen = std::collections::BTreeSet::new();
    let mut candidates: Vec<FinAbGroup> = Vec::new();
    let mut counter = vec![0u64; ranges.len()];
    loop {
        let middle = middle_group(r, &es, f, &ds, &counter, s_gens, q_gens);
        let key = iso_key(&middle);
        if seen.insert(key) {
            candidates.push(middle);
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == ranges.len() {
                break;
            }
            counter[pos] += 1;
            if counter[pos] < ranges[pos].max(1) {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
        if pos == ranges.len() {
            break;
        }
    }

    candidates.sort_by_key(iso_key);
    if candidates.len() == 1 {
        return Ok(ExtensionOutcome::Unique(candidates.pop().expect("one")));
    }
    match hint {
        ExtensionHint::SubDirectSummand => Ok(ExtensionOutcome::ByHint(sub.direct_sum(quot))),
        ExtensionHint::None => Ok(ExtensionOutcome::Undetermined(candidates)),
    }
}

/// Builds the middle group for one tuple of corrections.
fn middle_group(
    r: usize,
    es: &[BigInt],
    f: usize,
    ds: &[BigInt],
    counter: &[u64],
    s_gens: usize,
    q_gens: usize,
) -> FinAbGroup {
    let n = s_gens + q_gens;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    // subgroup torsion relations survive unchanged
    for (j, e) in es.iter().enumerate() {
        let mut col = vec![BigInt::from(0); n];
        col[r + j] = e.clone();
        cols.push(col);
    }
    // quotient torsion relations lift with corrections
    let mut k = 0usize;
    for (i, d) in ds.iter().enumerate() {
        let mut col = vec![BigInt::from(0); n];
        col[s_gens + f + i] = d.clone();
        for c in col.iter_mut().take(r) {
            *c = -BigInt::from(counter[k]);
            k += 1;
        }
        for j in 0..es.len() {
            col[r + j] = -BigInt::from(counter[k]);
            k += 1;
        }
        cols.push(col);
    }
    let mut rels = IntMatrix::zeros(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            rels.set(i, j, x.clone());
        }
    }
    FinAbGroup::from_presentation(n, rels)
}

fn to_u64(x: &BigInt) -> Result<u64> {
    use num_traits::ToPrimitive;
    x.to_u64()
        .ok_or_else(|| Error::CapExceeded("torsion order too large for enumeration".into()))
}
