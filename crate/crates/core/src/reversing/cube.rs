//! The strong cube condition on the generators.
//!
//! For every generator triple (sigma, tau, upsilon): reverse the word
//! sigma^-1 tau tau^-1 upsilon; if it terminates at x y^-1, then
//! (sigma x)^-1 (upsilon y) must reverse to the empty word. Triples
//! whose hypothesis reversal gets stuck pass vacuously. The condition
//! is the checkable core of completeness: it makes reversing a sound
//! and complete test for common right multiples.

use serde::Serialize;

use crate::budget::Budget;
use crate::presentation::Presentation;
use crate::reversing::{reverse_quiet, ReversingOutcome, SignedWord};
use crate::words::Word;
use crate::Result;

/// Verdict of the exhaustive triple check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum CubeOutcome {
    Holds,
    Fails { triple: [char; 3], detail: String },
    Undetermined { triple: [char; 3] },
}

impl CubeOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CubeOutcome::Holds)
    }
}

/// Checks the strong cube condition over all generator triples,
/// repeats included.
pub fn check_cube_condition(p: &Presentation, budget: &Budget) -> Result<CubeOutcome> {
    for &sigma in p.alphabet() {
        for &tau in p.alphabet() {
            for &upsilon in p.alphabet() {
                let triple = [sigma as char, tau as char, upsilon as char];
                let hypothesis = SignedWord::inverse_of(&Word::letter(sigma))
                    .concat(&SignedWord::from_positive(&Word::letter(tau)))
                    .concat(&SignedWord::inverse_of(&Word::letter(tau)))
                    .concat(&SignedWord::from_positive(&Word::letter(upsilon)));
                let trace = reverse_quiet(&hypothesis, p, budget)?;
                let (x, y) = match trace.outcome {
                    ReversingOutcome::Terminated { left, right } => (left, right),
                    ReversingOutcome::Stuck { .. } => continue,
                    ReversingOutcome::BudgetExhausted => {
                        return Ok(CubeOutcome::Undetermined { triple });
                    }
                };
                let mut sx = Word::letter(sigma);
                sx = sx.concat(&x);
                let mut uy = Word::letter(upsilon);
                uy = uy.concat(&y);
                let check = SignedWord::inverse_of(&sx).concat(&SignedWord::from_positive(&uy));
                let trace = reverse_quiet(&check, p, budget)?;
                match trace.outcome {
                    ReversingOutcome::Terminated { left, right }
                        if left.is_empty() && right.is_empty() => {}
                    ReversingOutcome::BudgetExhausted => {
                        return Ok(CubeOutcome::Undetermined { triple });
                    }
                    other => {
                        return Ok(CubeOutcome::Fails {
                            triple,
                            detail: format!(
                                "({sx})^-1 ({uy}) does not reverse to the empty word: {other:?}"
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(CubeOutcome::Holds)
}
