//! Right reversing on signed words.
//!
//! A presentation is complemented when each ordered pair of distinct
//! generators (sigma, tau) carries at most one rule sigma s = tau t
//! derived from a relation whose sides start with sigma and tau. Right
//! reversing repeatedly rewrites the leftmost factor sigma^-1 tau either
//! to the empty word (sigma = tau) or to s t^-1 via the rule. A signed
//! word with no such factor has the shape x y^-1 with x, y positive.
//! Reversing x^-1 y to s t^-1 exhibits the common right multiple
//! x s = y t; getting stuck proves there is none, and budgets make
//! non-termination an explicit outcome rather than a hang.

mod cube;
mod garside_w;
mod homog;
mod reversible;

pub use cube::{check_cube_condition, CubeOutcome};
pub use garside_w::{
    find_garside_like_w, verify_condition_2_3prime, ConditionReport, LEntry, LStatus,
};
pub use homog::{check_r_homogeneity, HomogeneityWeights};
pub use reversible::{check_left_reversible, ReversibilityReport, ReversibilityVerdict};

use std::collections::HashMap;

use crate::budget::{Budget, Meter};
use crate::presentation::Presentation;
use crate::rewrite::{words_equal, EqualityStatus};
use crate::words::Word;
use crate::{Error, Result};

/// One letter of a signed word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedLetter {
    pub generator: u8,
    pub positive: bool,
}

/// A word over the generators and their formal inverses.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SignedWord(Vec<SignedLetter>);

impl SignedWord {
    pub fn empty() -> Self {
        SignedWord(Vec::new())
    }

    pub fn from_positive(w: &Word) -> Self {
        SignedWord(
            w.letters()
                .iter()
                .map(|&generator| SignedLetter {
                    generator,
                    positive: true,
                })
                .collect(),
        )
    }

    /// `w^-1`: reversed order, flipped signs.
    pub fn inverse_of(w: &Word) -> Self {
        SignedWord(
            w.letters()
                .iter()
                .rev()
                .map(|&generator| SignedLetter {
                    generator,
                    positive: false,
                })
                .collect(),
        )
    }

    pub fn concat(&self, other: &SignedWord) -> SignedWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        SignedWord(letters)
    }

    pub fn letters(&self) -> &[SignedLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Splits a reversing-terminal word `x y^-1` into (x, y). Errors when
    /// a negative letter precedes a positive one.
    pub fn split_terminal(&self) -> Result<(Word, Word)> {
        let boundary = self.0.iter().position(|l| !l.positive).unwrap_or(self.0.len());
        let mut x = Word::empty();
        for l in &self.0[..boundary] {
            x.push(l.generator);
        }
        let mut y = Word::empty();
        for l in self.0[boundary..].iter().rev() {
            if l.positive {
                return Err(Error::Internal(
                    "signed word is not of the terminal shape x y^-1".into(),
                ));
            }
            y.push(l.generator);
        }
        Ok((x, y))
    }

    /// Canonical rendering: run-length caret syntax with signed
    /// exponents, `1` for the empty word.
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            out.push(l.generator as char);
            if !l.positive {
                out.push_str(&format!("^-{run}"));
            } else if run > 1 {
                out.push_str(&format!("^{run}"));
            }
            i += run;
        }
        out
    }
}

impl std::fmt::Display for SignedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses signed caret syntax: letters with optional `^N` or `^-N`
/// exponents, whitespace ignored, `1` for the empty word.
pub fn parse_signed(text: &str) -> Result<SignedWord> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() || compact == "1" {
        return Ok(SignedWord::empty());
    }
    let bytes = compact.as_bytes();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if !c.is_ascii_lowercase() {
            return Err(Error::Parse(format!(
                "unexpected character {:?} in signed word",
                c as char
            )));
        }
        i += 1;
        let mut positive = true;
        let mut count: u64 = 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            if i < bytes.len() && bytes[i] == b'-' {
                positive = false;
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(Error::Parse("caret must be followed by an exponent".into()));
            }
            count = compact[start..i]
                .parse()
                .map_err(|_| Error::Parse("exponent out of range".into()))?;
            if count == 0 {
                return Err(Error::Parse("exponent must be nonzero".into()));
            }
        }
        for _ in 0..count {
            letters.push(SignedLetter {
                generator: c,
                positive,
            });
        }
    }
    Ok(SignedWord(letters))
}

/// The rule applied by one reversing step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepRule {
    /// sigma^-1 sigma -> empty
    Cancel,
    /// sigma^-1 tau -> s t^-1
    Complement { s: Word, t: Word },
}

/// One recorded reversing step at `position` (index of the negative
/// letter), rewriting `sigma^-1 tau`.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub position: usize,
    pub sigma: u8,
    pub tau: u8,
    pub rule: StepRule,
}

/// How a reversing run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReversingOutcome {
    /// No factor sigma^-1 tau remains; terminal is `left * right^-1`.
    Terminated { left: Word, right: Word },
    /// A factor sigma^-1 tau has no complement rule: the generators
    /// admit no common right multiple.
    Stuck { position: usize, sigma: u8, tau: u8 },
    /// The step budget ran out first.
    BudgetExhausted,
}

/// Full record of a reversing run.
#[derive(Debug, Clone)]
pub struct ReversingTrace {
    pub start: SignedWord,
    pub steps: Vec<TraceStep>,
    pub terminal: SignedWord,
    pub outcome: ReversingOutcome,
    pub steps_used: u64,
}

impl ReversingTrace {
    pub fn terminated(&self) -> bool {
        matches!(self.outcome, ReversingOutcome::Terminated { .. })
    }
}

/// Complement rules per ordered generator pair.
#[derive(Debug, Clone)]
pub struct ComplementTable {
    rules: HashMap<(u8, u8), (Word, Word)>,
}

impl ComplementTable {
    /// Derives the table from the relations. A relation whose sides
    /// start with distinct letters sigma, tau contributes the rules
    /// (sigma, tau) -> (rest of u, rest of v) and its mirror. Two
    /// relations feeding different rules to one pair make the
    /// presentation non-complemented.
    pub fn build(p: &Presentation) -> Result<Self> {
        let mut rules: HashMap<(u8, u8), (Word, Word)> = HashMap::new();
        for (u, v) in p.relations() {
            let (su, sv) = (u.first().expect("nonempty"), v.first().expect("nonempty"));
            if su == sv {
                continue;
            }
            let ru = u.slice(1, u.len());
            let rv = v.slice(1, v.len());
            for (key, val) in [
                ((su, sv), (ru.clone(), rv.clone())),
                ((sv, su), (rv, ru)),
            ] {
                match rules.get(&key) {
                    Some(existing) if *existing != val => {
                        return Err(Error::NotComplemented(format!(
                            "generators {} and {} admit two distinct complement rules",
                            key.0 as char, key.1 as char
                        )));
                    }
                    Some(_) => {}
                    None => {
                        rules.insert(key, val);
                    }
                }
            }
        }
        Ok(ComplementTable { rules })
    }

    pub fn rule(&self, sigma: u8, tau: u8) -> Option<&(Word, Word)> {
        self.rules.get(&(sigma, tau))
    }
}

fn reverse_with_table(
    start: &SignedWord,
    table: &ComplementTable,
    budget: &Budget,
    record: bool,
) -> ReversingTrace {
    let mut letters = start.letters().to_vec();
    let mut steps = Vec::new();
    let mut meter = Meter::new(budget.reversing_steps);
    // Everything left of `scan` is free of negative-positive adjacencies.
    let mut scan = 0usize;
    let outcome = loop {
        let mut found = None;
        let mut i = scan;
        while i + 1 < letters.len() {
            if !letters[i].positive && letters[i + 1].positive {
                found = Some(i);
                break;
            }
            i += 1;
        }
        let Some(i) = found else {
            break ReversingOutcome::Terminated {
                left: Word::empty(),
                right: Word::empty(),
            };
        };
        if !meter.tick() {
            break ReversingOutcome::BudgetExhausted;
        }
        let (sigma, tau) = (letters[i].generator, letters[i + 1].generator);
        if sigma == tau {
            if record {
                steps.push(TraceStep {
                    position: i,
                    sigma,
                    tau,
                    rule: StepRule::Cancel,
                });
            }
            letters.splice(i..i + 2, std::iter::empty());
        } else {
            let Some((s, t)) = table.rule(sigma, tau) else {
                break ReversingOutcome::Stuck {
                    position: i,
                    sigma,
                    tau,
                };
            };
            if record {
                steps.push(TraceStep {
                    position: i,
                    sigma,
                    tau,
                    rule: StepRule::Complement {
                        s: s.clone(),
                        t: t.clone(),
                    },
                });
            }
            let replacement: Vec<SignedLetter> = s
                .letters()
                .iter()
                .map(|&g| SignedLetter {
                    generator: g,
                    positive: true,
                })
                .chain(t.letters().iter().rev().map(|&g| SignedLetter {
                    generator: g,
                    positive: false,
                }))
                .collect();
            letters.splice(i..i + 2, replacement);
        }
        scan = i.saturating_sub(1);
    };
    let terminal = SignedWord(letters);
    let outcome = match outcome {
        ReversingOutcome::Terminated { .. } => {
            let (left, right) = terminal.split_terminal().expect("no mixed factor remains");
            ReversingOutcome::Terminated { left, right }
        }
        other => other,
    };
    ReversingTrace {
        start: start.clone(),
        steps,
        terminal,
        outcome,
        steps_used: meter.used(),
    }
}

/// Reverses `w` with the leftmost strategy, recording every step.
pub fn reverse(w: &SignedWord, p: &Presentation, budget: &Budget) -> Result<ReversingTrace> {
    let table = ComplementTable::build(p)?;
    Ok(reverse_with_table(w, &table, budget, true))
}

/// Reverses without recording steps; used by the bulk callers.
pub fn reverse_quiet(w: &SignedWord, p: &Presentation, budget: &Budget) -> Result<ReversingTrace> {
    let table = ComplementTable::build(p)?;
    Ok(reverse_with_table(w, &table, budget, false))
}

/// A common right multiple exhibited by reversing: `join = x comp_x
/// = y comp_y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcm {
    pub join: Word,
    pub comp_x: Word,
    pub comp_y: Word,
}

/// Reverses `x^-1 y`. Termination at `s t^-1` yields the common
/// multiple `x s = y t` (checked via the word problem where decidable);
/// getting stuck proves the pair has no common right multiple (None).
/// Budget exhaustion is an error, never a "no".
pub fn lcm(x: &Word, y: &Word, p: &Presentation, budget: &Budget) -> Result<Option<Lcm>> {
    let start = SignedWord::inverse_of(x).concat(&SignedWord::from_positive(y));
    let trace = reverse_quiet(&start, p, budget)?;
    match trace.outcome {
        ReversingOutcome::Terminated { left, right } => {
            let join = x.concat(&left);
            let other = y.concat(&right);
            let verdict = words_equal(&join, &other, p, budget);
            if verdict.status == EqualityStatus::Distinct {
                return Err(Error::Internal(format!(
                    "reversing produced {join} and {other} which are not equal"
                )));
            }
            Ok(Some(Lcm {
                join,
                comp_x: left,
                comp_y: right,
            }))
        }
        ReversingOutcome::Stuck { .. } => Ok(None),
        ReversingOutcome::BudgetExhausted => Err(Error::Budget(format!(
            "reversing budget of {} steps exhausted on {}",
            budget.reversing_steps, start
        ))),
    }
}

/// Divisibility verdict for `z in xP`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divides {
    /// `z = x * complement`.
    Yes(Word),
    No,
    /// Budget exhausted before reversing finished.
    Unknown,
}

impl Divides {
    pub fn is_yes(&self) -> bool {
        matches!(self, Divides::Yes(_))
    }
}

/// Decides `z in xP` by reversing `x^-1 z`: yes exactly when the
/// terminal is positive.
pub fn divides(x: &Word, z: &Word, p: &Presentation, budget: &Budget) -> Result<Divides> {
    let start = SignedWord::inverse_of(x).concat(&SignedWord::from_positive(z));
    let trace = reverse_quiet(&start, p, budget)?;
    Ok(match trace.outcome {
        ReversingOutcome::Terminated { left, right } => {
            if right.is_empty() {
                Divides::Yes(left)
            } else {
                Divides::No
            }
        }
        ReversingOutcome::Stuck { .. } => Divides::No,
        ReversingOutcome::BudgetExhausted => Divides::Unknown,
    })
}
