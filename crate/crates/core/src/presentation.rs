//! Positive monoid presentations `<generators | u_1 = v_1, ...>`.
//!
//! The text format is line based:
//!
//! ```text
//! # comment
//! generators: a b c
//! relation: aba = bab
//! relation: ac = ca
//! ```
//!
//! Generators are single ASCII letters; relators are positive words over
//! the declared generators. Empty relator sides and relations `u = u`
//! are rejected at construction; redundant generators are accepted and
//! reported by [`check_presentation`].

use serde::Serialize;

use crate::words::{overlap_set, parse_word, Word};
use crate::{Error, Result};

/// A finitely presented monoid with positive relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Vec<u8>,
    relations: Vec<(Word, Word)>,
}

impl Presentation {
    /// Builds a presentation, validating structural invariants: distinct
    /// single-letter generators, relator letters drawn from the alphabet,
    /// no empty relator side, no relation `u = u`.
    pub fn new(alphabet: Vec<u8>, relations: Vec<(Word, Word)>) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        for &c in &alphabet {
            if !c.is_ascii_alphabetic() {
                return Err(Error::InvalidPresentation(format!(
                    "generator {:?} is not an ASCII letter",
                    c as char
                )));
            }
        }
        for (i, &c) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(&c) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate generator '{}'",
                    c as char
                )));
            }
        }
        for (k, (u, v)) in relations.iter().enumerate() {
            if u.is_empty() || v.is_empty() {
                return Err(Error::InvalidPresentation(format!(
                    "relation {} has an empty side; empty relators are out of scope",
                    k + 1
                )));
            }
            if u == v {
                return Err(Error::InvalidPresentation(format!(
                    "relation {} relates a word to itself",
                    k + 1
                )));
            }
            for &c in u.letters().iter().chain(v.letters()) {
                if !alphabet.contains(&c) {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {} uses undeclared generator '{}'",
                        k + 1,
                        c as char
                    )));
                }
            }
        }
        Ok(Presentation {
            alphabet,
            relations,
        })
    }

    /// Parses the line-based text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Vec<u8>> = None;
        let mut relations = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("generators:") {
                if alphabet.is_some() {
                    return Err(at("repeated generators line".into()));
                }
                let mut syms = Vec::new();
                for tok in rest.split_whitespace() {
                    let b = tok.as_bytes();
                    if b.len() != 1 || !b[0].is_ascii_alphabetic() {
                        return Err(at(format!(
                            "generator {tok:?} is not a single ASCII letter"
                        )));
                    }
                    syms.push(b[0]);
                }
                alphabet = Some(syms);
            } else if let Some(rest) = line.strip_prefix("relation:") {
                let mut sides = rest.split('=');
                let (lhs, rhs) = match (sides.next(), sides.next(), sides.next()) {
                    (Some(l), Some(r), None) => (l, r),
                    _ => return Err(at("expected exactly one '=' in relation".into())),
                };
                let u = parse_word(lhs).map_err(|e| at(e.to_string()))?;
                let v = parse_word(rhs).map_err(|e| at(e.to_string()))?;
                relations.push((u, v));
            } else {
                return Err(at(format!("unrecognized line {line:?}")));
            }
        }
        let alphabet =
            alphabet.ok_or_else(|| Error::Parse("missing generators line".into()))?;
        Presentation::new(alphabet, relations)
    }

    /// Renders in the same text format `parse` accepts.
    pub fn render(&self) -> String {
        let mut out = String::from("generators:");
        for &c in &self.alphabet {
            out.push(' ');
            out.push(c as char);
        }
        out.push('\n');
        for (u, v) in &self.relations {
            out.push_str(&format!("relation: {} = {}\n", u.render(), v.render()));
        }
        out
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    pub fn relations(&self) -> &[(Word, Word)] {
        &self.relations
    }

    pub fn is_one_relator(&self) -> bool {
        self.relations.len() == 1
    }

    /// The unique relation of a one-relator presentation.
    pub fn single_relation(&self) -> Result<(&Word, &Word)> {
        match self.relations.as_slice() {
            [(u, v)] => Ok((u, v)),
            _ => Err(Error::Precondition(format!(
                "expected a one-relator presentation, found {} relations",
                self.relations.len()
            ))),
        }
    }

    /// Parses a word and validates its letters against the alphabet.
    pub fn word(&self, text: &str) -> Result<Word> {
        let w = parse_word(text)?;
        for &c in w.letters() {
            if !self.alphabet.contains(&c) {
                return Err(Error::Parse(format!(
                    "word {text:?} uses undeclared generator '{}'",
                    c as char
                )));
            }
        }
        Ok(w)
    }
}

/// Structural report produced by [`check_presentation`].
#[derive(Debug, Clone, Serialize)]
pub struct PresentationReport {
    pub generators: Vec<String>,
    pub relation_count: usize,
    pub one_relator: bool,
    /// Generators `s` appearing in a relation `s = w` (or `w = s`) where
    /// `w` avoids `s`: such a generator is expressible in the others.
    pub redundant_generators: Vec<String>,
    /// Generators that occur in no relator at all (free factors).
    pub unused_generators: Vec<String>,
    /// For one-relator presentations: the two relator sides start with
    /// distinct letters.
    pub first_letters_differ: Option<bool>,
    /// For one-relator presentations: the two relator sides end with
    /// distinct letters.
    pub last_letters_differ: Option<bool>,
    /// Overlap set of each relator side, rendered (one-relator only).
    pub overlap_sets: Option<[Vec<String>; 2]>,
}

/// Reports structural facts and likely mistakes in a presentation.
pub fn check_presentation(p: &Presentation) -> PresentationReport {
    let gen_name = |c: u8| (c as char).to_string();
    let mut redundant = Vec::new();
    for &c in p.alphabet() {
        let single = Word::letter(c);
        for (u, v) in p.relations() {
            let other = if *u == single {
                Some(v)
            } else if *v == single {
                Some(u)
            } else {
                None
            };
            if let Some(w) = other {
                if w.count_letter(c) == 0 && !redundant.contains(&gen_name(c)) {
                    redundant.push(gen_name(c));
                }
            }
        }
    }
    let unused: Vec<String> = p
        .alphabet()
        .iter()
        .copied()
        .filter(|&c| {
            p.relations()
                .iter()
                .all(|(u, v)| u.count_letter(c) == 0 && v.count_letter(c) == 0)
        })
        .map(gen_name)
        .collect();
    let (first_differ, last_differ, overlaps) = if p.is_one_relator() {
        let (u, v) = &p.relations()[0];
        (
            Some(u.first() != v.first()),
            Some(u.last() != v.last()),
            Some([
                overlap_set(u).iter().map(|w| w.render()).collect(),
                overlap_set(v).iter().map(|w| w.render()).collect(),
            ]),
        )
    } else {
        (None, None, None)
    };
    PresentationReport {
        generators: p.alphabet().iter().map(|&c| gen_name(c)).collect(),
        relation_count: p.relations().len(),
        one_relator: p.is_one_relator(),
        redundant_generators: redundant,
        unused_generators: unused,
        first_letters_differ: first_differ,
        last_letters_differ: last_differ,
        overlap_sets: overlaps,
    }
}

/// True when `z` satisfies the four factor conditions that make it cut
/// every relator occurrence: `z` is not a factor of a relator side, no
/// relator side is a factor of `z`, no nonempty prefix of `z` is a
/// suffix of a relator side, and no nonempty suffix of `z` is a prefix
/// of a relator side.
fn separates(z: &Word, sides: &[&Word]) -> bool {
    if z.is_empty() {
        return false;
    }
    for side in sides {
        if side.contains_factor(z) || z.contains_factor(side) {
            return false;
        }
        for k in 1..=z.len() {
            if side.ends_with(&z.slice(0, k)) {
                return false;
            }
            if side.starts_with(&z.slice(z.len() - k, z.len())) {
                return false;
            }
        }
    }
    true
}

/// For a one-relator presentation on at least three generators, finds a
/// word `z` such that no occurrence of a relator side can overlap an
/// occurrence of `z`. Returns `Ok(None)` when the alphabet has fewer
/// than three generators (no such word is sought there).
pub fn find_separating_word(p: &Presentation) -> Result<Option<Word>> {
    let (u, v) = p.single_relation()?;
    if p.alphabet().len() < 3 {
        return Ok(None);
    }
    let sides = [u, v];
    let first_letters = [u.first(), v.first()];
    let last_letters = [u.last(), v.last()];
    let c = p
        .alphabet()
        .iter()
        .copied()
        .find(|&g| !first_letters.contains(&Some(g)));
    let a = p
        .alphabet()
        .iter()
        .copied()
        .find(|&g| !last_letters.contains(&Some(g)));
    let bound = u.len().max(v.len()) + 1;
    if let (Some(c), Some(a)) = (c, a) {
        let z = Word::letter(a).repeat(bound).concat(&Word::letter(c).repeat(bound));
        if separates(&z, &sides) {
            return Ok(Some(z));
        }
        // A relator side shaped a^k c^l defeats the plain candidate; keep
        // the block structure but insert a letter distinct from both.
        if let Some(m) = p.alphabet().iter().copied().find(|&g| g != a && g != c) {
            let z = Word::letter(a)
                .repeat(bound)
                .concat(&Word::letter(m))
                .concat(&Word::letter(c).repeat(bound));
            if separates(&z, &sides) {
                return Ok(Some(z));
            }
        }
    }
    // Bounded fallback: scan short words in ShortLex order.
    let cap = 2 * bound + 1;
    let mut layer = vec![Word::empty()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for w in &layer {
            for &g in p.alphabet() {
                let cand = w.append_letter(g);
                if separates(&cand, &sides) {
                    return Ok(Some(cand));
                }
                next.push(cand);
            }
        }
        layer = next;
        if layer.len() > 200_000 {
            break;
        }
    }
    Err(Error::Internal(
        "no separating word found within the search bound".into(),
    ))
}
