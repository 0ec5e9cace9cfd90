//! Left-reversibility tests for one-relator monoids.
//!
//! Three stages, each conclusive when it fires: three or more
//! generators in a one-relator presentation leave a pair with no common
//! right multiple (no); when the confluent rewriting system applies and
//! the replaced side starts with x but is not x times a power of the
//! other generator, the monoid is not left reversible (no); otherwise a
//! closure search looks for a finite set of words containing the
//! generators and closed under reversing complements, which certifies
//! yes. Getting stuck during the closure search is a definitive no only
//! when a homogeneity certificate guarantees reversing is complete.

use serde::Serialize;

use crate::budget::Budget;
use crate::presentation::Presentation;
use crate::reversing::homog::check_r_homogeneity;
use crate::reversing::{reverse_quiet, ReversingOutcome, SignedWord};
use crate::rewrite::choose_rewrite_orientation;
use crate::words::Word;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReversibilityVerdict {
    Yes,
    No,
    Unknown,
}

/// Outcome of [`check_left_reversible`] with the stage that decided it.
#[derive(Debug, Clone, Serialize)]
pub struct ReversibilityReport {
    pub verdict: ReversibilityVerdict,
    pub reason: String,
    /// For yes verdicts: a closed set of words witnessing the
    /// sufficient condition.
    pub closure: Option<Vec<String>>,
}

/// Decides left reversibility of a one-relator monoid, up to the
/// closure-size bound.
pub fn check_left_reversible(
    p: &Presentation,
    sigma_prime_bound: usize,
    budget: &Budget,
) -> Result<ReversibilityReport> {
    p.single_relation()?;
    if p.alphabet().len() >= 3 {
        return Ok(ReversibilityReport {
            verdict: ReversibilityVerdict::No,
            reason: "a one-relator monoid on three or more generators has generators \
                     with no common right multiple"
                .into(),
            closure: None,
        });
    }
    // Rewriting-based obstruction: replaced side x w with w not a power
    // of the other generator.
    if p.alphabet().len() == 2 {
        if let Some(rule) = choose_rewrite_orientation(p) {
            let v = &rule.replace;
            let first = v.first().expect("relator sides are nonempty");
            let other = *p
                .alphabet()
                .iter()
                .find(|&&c| c != first)
                .expect("two generators");
            let tail_is_power = v.letters()[1..].iter().all(|&c| c == other);
            if !tail_is_power {
                return Ok(ReversibilityReport {
                    verdict: ReversibilityVerdict::No,
                    reason: format!(
                        "confluent rule replaces {v}, which starts with {} but is not \
                         {}{}^k",
                        first as char, first as char, other as char
                    ),
                    closure: None,
                });
            }
        }
    }
    let certified = check_r_homogeneity(p)?.is_some();
    closure_search(p, sigma_prime_bound, budget, certified)
}

/// Grows a set of words from the generators, adding both reversing
/// complements of x^-1 w for every generator x and set member w, until
/// the set is closed (yes), a reversal gets stuck (no, under a
/// homogeneity certificate), or the bound or budget runs out (unknown).
fn closure_search(
    p: &Presentation,
    bound: usize,
    budget: &Budget,
    certified: bool,
) -> Result<ReversibilityReport> {
    let mut set: std::collections::BTreeSet<Word> = p
        .alphabet()
        .iter()
        .map(|&c| Word::letter(c))
        .collect();
    let mut pending: Vec<Word> = set.iter().cloned().collect();
    while let Some(w) = pending.pop() {
        for &x in p.alphabet() {
            let start = SignedWord::inverse_of(&Word::letter(x))
                .concat(&SignedWord::from_positive(&w));
            let trace = reverse_quiet(&start, p, budget)?;
            match trace.outcome {
                ReversingOutcome::Terminated { left, right } => {
                    for z in [left, right] {
                        if set.insert(z.clone()) {
                            pending.push(z);
                        }
                    }
                }
                ReversingOutcome::Stuck { sigma, tau, .. } => {
                    if certified {
                        return Ok(ReversibilityReport {
                            verdict: ReversibilityVerdict::No,
                            reason: format!(
                                "{} and {} have no common right multiple",
                                sigma as char, tau as char
                            ),
                            closure: None,
                        });
                    }
                    return Ok(unknown("a reversal got stuck and no homogeneity \
                                       certificate makes that conclusive"));
                }
                ReversingOutcome::BudgetExhausted => {
                    return Ok(unknown("a reversal exhausted its step budget"));
                }
            }
            if set.len() > bound {
                return Ok(unknown("closure exceeded the size bound"));
            }
        }
    }
    Ok(ReversibilityReport {
        verdict: ReversibilityVerdict::Yes,
        reason: "closure of the generators under reversing complements is finite".into(),
        closure: Some(set.iter().map(|w| w.render()).collect()),
    })
}

fn unknown(reason: &str) -> ReversibilityReport {
    ReversibilityReport {
        verdict: ReversibilityVerdict::Unknown,
        reason: reason.into(),
        closure: None,
    }
}
