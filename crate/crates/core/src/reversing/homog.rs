//! Positive weight systems certifying that reversing terminates.
//!
//! A presentation is r-homogeneous when some homomorphism lambda from
//! the free monoid to the positive integers gives both sides of every
//! relation the same weight. Equal-length sides admit lambda = length;
//! otherwise, a single relation u = v with length(u) < length(v) and
//! some generator sigma occurring more often in u than in v admits the
//! two-value weight lambda(sigma) = zeta, lambda(other) = eta with
//! eta * delta = zeta * d, where d is the surplus of sigma in u and
//! delta the surplus of non-sigma letters in v. A small exhaustive
//! search covers presentations outside both shapes.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::presentation::Presentation;
use crate::words::Word;
use crate::Result;

/// A verified weight certificate.
#[derive(Debug, Clone, Serialize)]
pub struct HomogeneityWeights {
    /// Positive weight per generator.
    pub weights: BTreeMap<char, u64>,
    /// Always true for returned values: lambda(u) = lambda(v) has been
    /// checked for every relation.
    pub certified: bool,
    /// Which construction produced the weights.
    pub method: String,
}

impl HomogeneityWeights {
    /// Total weight of a word.
    pub fn weight_of(&self, w: &Word) -> u64 {
        w.letters()
            .iter()
            .map(|&c| self.weights[&(c as char)])
            .sum()
    }
}

fn verified(weights: BTreeMap<char, u64>, method: &str, p: &Presentation) -> Option<HomogeneityWeights> {
    let cert = HomogeneityWeights {
        weights,
        certified: true,
        method: method.to_string(),
    };
    for (u, v) in p.relations() {
        if cert.weight_of(u) != cert.weight_of(v) {
            return None;
        }
    }
    Some(cert)
}

/// Searches for a weight certificate of the single relation, trying the
/// length homomorphism, the two-value construction, and a bounded
/// exhaustive search, in that order.
pub fn check_r_homogeneity(p: &Presentation) -> Result<Option<HomogeneityWeights>> {
    let (u, v) = p.single_relation()?;
    let all_ones: BTreeMap<char, u64> = p.alphabet().iter().map(|&c| (c as char, 1)).collect();
    if u.len() == v.len() {
        return Ok(verified(all_ones, "length", p));
    }
    // orient so that u is the shorter side
    let (u, v) = if u.len() < v.len() { (u, v) } else { (v, u) };
    for &sigma in p.alphabet() {
        let (lu, lv) = (u.count_letter(sigma), v.count_letter(sigma));
        if lu <= lv {
            continue;
        }
        let d = (lu - lv) as u64;
        let delta = ((v.len() - lv) - (u.len() - lu)) as u64;
        let l = d.lcm(&delta);
        let (eta, zeta) = (l / delta, l / d);
        let weights: BTreeMap<char, u64> = p
            .alphabet()
            .iter()
            .map(|&c| (c as char, if c == sigma { zeta } else { eta }))
            .collect();
        if let Some(cert) = verified(weights, "two-value", p) {
            return Ok(Some(cert));
        }
    }
    Ok(search_small_weights(p, 6))
}

/// Exhaustive search over weight vectors with entries in 1..=max.
fn search_small_weights(p: &Presentation, max: u64) -> Option<HomogeneityWeights> {
    let n = p.alphabet().len();
    let mut vector = vec![1u64; n];
    loop {
        let weights: BTreeMap<char, u64> = p
            .alphabet()
            .iter()
            .zip(&vector)
            .map(|(&c, &w)| (c as char, w))
            .collect();
        if let Some(cert) = verified(weights, "search", p) {
            return Some(cert);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return None;
            }
            vector[pos] += 1;
            if vector[pos] <= max {
                break;
            }
            vector[pos] = 1;
            pos += 1;
        }
    }
}
