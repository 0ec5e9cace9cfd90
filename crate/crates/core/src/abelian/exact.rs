//! Exact sequences and the splicing construction.
//!
//! [`splice`] consumes a commutative ladder of two exact rows whose
//! columns cycle through three roles with period three: isomorphisms,
//! surjections, and unconstrained maps. Writing the top row
//! `... -> Gbar_{k} -> Gcheck_{k+1} -> G_{k+2} -> Gbar_{k+3} -> ...`
//! with vertical maps psi (iso) on Gbar columns, phi (surjective) on
//! Gcheck columns, and pi on plain columns, the output is the exact
//! sequence
//! `... -> ker(phi) --j--> G --pi--> H --del o psi^{-1} o q--> ker(phi') -> ...`
//! where j, p are the top row maps, q the bottom row maps, and del the
//! top boundary out of the bar column. All hypotheses are verified and
//! violations are reported by name; the output sequence is checked for
//! exactness before it is returned.

use num_bigint::BigInt;

use super::group::FinAbGroup;
use super::hom::{is_exact_at, AbHom};
use super::matrix::IntMatrix;
use super::normal_forms::{lattice_contains_all, solve};
use crate::{Error, Result};

/// A finite window of an exact sequence: `groups[0] -> groups[1] -> ...`
#[derive(Clone, Debug)]
pub struct ExactSeq {
    groups: Vec<FinAbGroup>,
    maps: Vec<AbHom>,
}

impl ExactSeq {
    /// Validates composability (maps[k]: groups[k] -> groups[k+1], as
    /// presentations).
    pub fn new(groups: Vec<FinAbGroup>, maps: Vec<AbHom>) -> Result<Self> {
        if groups.len() != maps.len() + 1 {
            return Err(Error::Precondition(format!(
                "sequence with {} groups needs {} maps, found {}",
                groups.len(),
                groups.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            if !m.domain.same_presentation(&groups[k])
                || !m.codomain.same_presentation(&groups[k + 1])
            {
                return Err(Error::Precondition(format!(
                    "map {k} does not connect groups {k} and {}",
                    k + 1
                )));
            }
        }
        Ok(ExactSeq { groups, maps })
    }

    pub fn groups(&self) -> &[FinAbGroup] {
        &self.groups
    }

    pub fn maps(&self) -> &[AbHom] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Checks exactness at every interior node; returns the first failing
    /// node index, or None when the window is exact.
    pub fn check_exact(&self) -> Result<Option<usize>> {
        for k in 1..self.groups.len().saturating_sub(1) {
            if !is_exact_at(&self.maps[k - 1], &self.maps[k])? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// True when two homomorphisms with identical endpoint presentations
/// induce the same map on the quotients.
pub fn induced_maps_equal(f: &AbHom, g: &AbHom) -> bool {
    f.domain.same_presentation(&g.domain)
        && f.codomain.same_presentation(&g.codomain)
        && lattice_contains_all(f.codomain.rels(), &f.matrix().sub(g.matrix()))
}

/// Role of a ladder column; columns cycle Bar, Check, Plain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    /// Vertical map must be an isomorphism (psi).
    Bar,
    /// Vertical map must be surjective (phi).
    Check,
    /// Vertical map is unconstrained (pi).
    Plain,
}

pub fn column_role(k: usize) -> ColumnRole {
    match k % 3 {
        0 => ColumnRole::Bar,
        1 => ColumnRole::Check,
        _ => ColumnRole::Plain,
    }
}

/// A commutative ladder with exact rows; see the module docs.
#[derive(Clone, Debug)]
pub struct SpliceDiagram {
    pub top: ExactSeq,
    pub bottom: ExactSeq,
    pub verticals: Vec<AbHom>,
}

/// Result of [`splice`]: the output exact sequence, with a label per
/// group describing its origin.
#[derive(Debug)]
pub struct Spliced {
    pub seq: ExactSeq,
    pub labels: Vec<String>,
}

/// Verifies the ladder hypotheses and splices the rows into the exact
/// kernel sequence.
pub fn splice(d: &SpliceDiagram) -> Result<Spliced> {
    let n = d.top.len();
    if d.bottom.len() != n || d.verticals.len() != n {
        return Err(Error::Precondition(
            "ladder rows and verticals must have equal length".into(),
        ));
    }
    if n < 5 {
        return Err(Error::Precondition(
            "ladder too short to splice; need at least five columns".into(),
        ));
    }
    for (k, v) in d.verticals.iter().enumerate() {
        if !v.domain.same_presentation(&d.top.groups()[k])
            || !v.codomain.same_presentation(&d.bottom.groups()[k])
        {
            return Err(Error::Precondition(format!(
                "vertical {k} does not connect the rows at column {k}"
            )));
        }
    }
    if let Some(k) = d.top.check_exact()? {
        return Err(Error::Precondition(format!(
            "top row is not exact at column {k}"
        )));
    }
    if let Some(k) = d.bottom.check_exact()? {
        return Err(Error::Precondition(format!(
            "bottom row is not exact at column {k}"
        )));
    }
    for k in 0..n - 1 {
        let around_top = d.top.maps()[k].then(&d.verticals[k + 1])?;
        let around_bottom = d.verticals[k].then(&d.bottom.maps()[k])?;
        if !induced_maps_equal(&around_top, &around_bottom) {
            return Err(Error::Precondition(format!(
                "square between columns {k} and {} does not commute",
                k + 1
            )));
        }
    }
    for (k, v) in d.verticals.iter().enumerate() {
        match column_role(k) {
            ColumnRole::Bar => {
                if !v.is_isomorphism() {
                    return Err(Error::Precondition(format!(
                        "vertical {k} must be an isomorphism"
                    )));
                }
            }
            ColumnRole::Check => {
                if !v.is_surjective() {
                    return Err(Error::Precondition(format!(
                        "vertical {k} must be surjective"
                    )));
                }
            }
            ColumnRole::Plain => {}
        }
    }

    // Kernels of the surjections at check columns.
    let check_cols: Vec<usize> = (1..n).step_by(3).filter(|&c| c + 2 < n).collect();
    if check_cols.is_empty() {
        return Err(Error::Precondition(
            "no complete splice chunk fits in the ladder window".into(),
        ));
    }
    let mut kernels = std::collections::BTreeMap::new();
    for &c in &check_cols {
        kernels.insert(c, d.verticals[c].kernel());
    }

    let mut groups: Vec<FinAbGroup> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut maps: Vec<AbHom> = Vec::new();
    for (idx, &c) in check_cols.iter().enumerate() {
        let (kgrp, incl) = &kernels[&c];
        if idx > 0 {
            // Connecting map from the previous chunk's H into this kernel.
            let prev = check_cols[idx - 1];
            let conn = connecting_map(d, prev, kgrp, incl)?;
            maps.push(conn);
        }
        groups.push(kgrp.clone());
        labels.push(format!("ker(phi_{c})"));
        // j restricted to the kernel
        let j = incl.then(&d.top.maps()[c])?;
        maps.push(j);
        groups.push(d.top.groups()[c + 1].clone());
        labels.push(format!("G_{}", c + 1));
        // pi at the plain column
        maps.push(d.verticals[c + 1].clone());
        groups.push(d.bottom.groups()[c + 1].clone());
        labels.push(format!("H_{}", c + 1));
    }
    let seq = ExactSeq::new(groups, maps)?;
    if let Some(k) = seq.check_exact()? {
        return Err(Error::Internal(format!(
            "spliced sequence failed its own exactness check at node {k}"
        )));
    }
    Ok(Spliced { seq, labels })
}

/// The connecting map `del o psi^{-1} o q : H_{c+1} -> ker(phi_{c+3})`
/// for the chunk starting at check column `c`.
fn connecting_map(
    d: &SpliceDiagram,
    c: usize,
    target_kernel: &FinAbGroup,
    target_incl: &AbHom,
) -> Result<AbHom> {
    let h = &d.bottom.groups()[c + 1];
    let q = &d.bottom.maps()[c + 1]; // H_{c+1} -> Hbar_{c+2}
    let psi = &d.verticals[c + 2]; // Gbar_{c+2} -> Hbar_{c+2}, iso
    let del = &d.top.maps()[c + 2]; // Gbar_{c+2} -> Gcheck_{c+3}
    let kb = target_incl.matrix(); // kernel basis in Gcheck's cover
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for g in 0..h.gens() {
        let qv = q.matrix().column(g);
        let x = psi.preimage_of(&qv).ok_or_else(|| {
            Error::Internal("psi is an isomorphism but a preimage was not found".into())
        })?;
        let y = del.matrix().apply(&x);
        // y's class lies in ker(phi); express it in kernel coordinates.
        let z = solve(kb, &y).ok_or_else(|| {
            Error::Internal("connecting image escaped the kernel lattice".into())
        })?;
        cols.push(z);
    }
    let mut m = IntMatrix::zeros(target_kernel.gens(), h.gens());
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    AbHom::new(h.clone(), target_kernel.clone(), m)
}
