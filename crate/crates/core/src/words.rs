//! Positive words over a finite alphabet of single-character generators.
//!
//! A [`Word`] is a finite sequence of ASCII letters. Parsing accepts
//! run-length exponents both with a caret (`a^3 b`) and bare (`a3b`),
//! ignores whitespace, and reads the standalone token `1` as the empty
//! word. Rendering is canonical: runs of a letter print as `a` or `a^k`,
//! concatenated without spaces, so `parse(render(w)) == w` and equal
//! words render identically.

use std::cmp::Ordering;
use std::fmt;

use crate::{Error, Result};

/// Largest admissible word length after exponent expansion.
const MAX_WORD_LEN: usize = 1_000_000;

/// A positive word; letters are ASCII alphabetic bytes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    /// The empty word.
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Word from raw letter bytes. Letters must be ASCII alphabetic.
    pub fn from_letters(letters: impl Into<Vec<u8>>) -> Result<Self> {
        let letters = letters.into();
        for &c in &letters {
            if !c.is_ascii_alphabetic() {
                return Err(Error::Parse(format!(
                    "invalid generator byte 0x{c:02x}; generators are ASCII letters"
                )));
            }
        }
        Ok(Word(letters))
    }

    /// Single-letter word.
    pub fn letter(c: u8) -> Self {
        debug_assert!(c.is_ascii_alphabetic());
        Word(vec![c])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn push(&mut self, c: u8) {
        self.0.push(c);
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self` followed by one letter.
    pub fn append_letter(&self, c: u8) -> Word {
        let mut v = self.0.clone();
        v.push(c);
        Word(v)
    }

    /// Subword `self[range]` as a word.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Number of occurrences of the letter `c`.
    pub fn count_letter(&self, c: u8) -> usize {
        self.0.iter().filter(|&&x| x == c).count()
    }

    /// Occurrence counts in the order of `alphabet`.
    pub fn counts(&self, alphabet: &[u8]) -> Vec<i64> {
        alphabet
            .iter()
            .map(|&c| self.count_letter(c) as i64)
            .collect()
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// True when `factor` occurs as a contiguous subword.
    pub fn contains_factor(&self, factor: &Word) -> bool {
        if factor.is_empty() {
            return true;
        }
        if factor.len() > self.len() {
            return false;
        }
        self.0
            .windows(factor.len())
            .any(|win| win == factor.letters())
    }

    /// All positions at which `factor` occurs.
    pub fn factor_positions(&self, factor: &Word) -> Vec<usize> {
        if factor.is_empty() || factor.len() > self.len() {
            return Vec::new();
        }
        self.0
            .windows(factor.len())
            .enumerate()
            .filter_map(|(i, win)| (win == factor.letters()).then_some(i))
            .collect()
    }

    /// Replaces the factor at `pos` (must match `from`) by `to`.
    pub fn replace_at(&self, pos: usize, from: &Word, to: &Word) -> Word {
        debug_assert_eq!(&self.0[pos..pos + from.len()], from.letters());
        let mut v = Vec::with_capacity(self.len() - from.len() + to.len());
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(to.letters());
        v.extend_from_slice(&self.0[pos + from.len()..]);
        Word(v)
    }

    /// Word repeated `n` times.
    pub fn repeat(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    /// Plain letter-by-letter rendering (`aba`), used for vertex labels.
    pub fn expanded(&self) -> String {
        self.0.iter().map(|&c| c as char).collect()
    }

    /// Canonical run-length rendering; the empty word prints as `1`.
    pub fn render(&self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let c = self.0[i];
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == c {
                j += 1;
            }
            out.push(c as char);
            if j - i > 1 {
                out.push('^');
                out.push_str(&(j - i).to_string());
            }
            i = j;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// ShortLex order: by length first, then lexicographically.
pub fn shortlex_cmp(a: &Word, b: &Word) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.letters().cmp(b.letters()))
}

/// Parses a positive word. See the module docs for the grammar.
pub fn parse_word(text: &str) -> Result<Word> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() || compact == "1" {
        return Ok(Word::empty());
    }
    let bytes = compact.as_bytes();
    let mut letters = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if !c.is_ascii_alphabetic() {
            return Err(Error::Parse(format!(
                "unexpected character {:?} in word {text:?}",
                c as char
            )));
        }
        i += 1;
        let mut exp: usize = 1;
        let caret = i < bytes.len() && bytes[i] == b'^';
        if caret {
            i += 1;
        }
        if i < bytes.len() && bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            exp = compact[start..i]
                .parse()
                .map_err(|_| Error::Parse(format!("exponent out of range in {text:?}")))?;
            if exp == 0 {
                return Err(Error::Parse(format!(
                    "exponent 0 is not allowed in {text:?}"
                )));
            }
        } else if caret {
            return Err(Error::Parse(format!(
                "caret without exponent digits in {text:?}"
            )));
        }
        if letters.len() + exp > MAX_WORD_LEN {
            return Err(Error::Parse(format!(
                "word longer than {MAX_WORD_LEN} letters"
            )));
        }
        letters.extend(std::iter::repeat(c).take(exp));
    }
    Ok(Word(letters))
}

/// Overlap set of `v`: all proper borders, i.e. every word `x` with
/// `v = xy = wx` for nonempty `w`, `y`. The empty word is always a
/// member; `v` itself never is.
pub fn overlap_set(v: &Word) -> Vec<Word> {
    let n = v.len();
    let mut out = vec![Word::empty()];
    for k in 1..n {
        // borders of length k: prefix of length k equals suffix of length k
        if v.letters()[..k] == v.letters()[n - k..] {
            out.push(v.slice(0, k));
        }
    }
    out
}
