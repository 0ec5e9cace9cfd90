//! Confluent rewriting for one-relator presentations and a staged
//! word-equality decision procedure.
//!
//! A relation (u, v) yields a terminating confluent system v -> u when v
//! has no nonempty self-overlap and some generator occurs strictly less
//! often in u than in v (each step drops that count, and occurrences of
//! v in a word are pairwise disjoint). Under those preconditions the
//! irreducible form decides equality exactly. Otherwise equality falls
//! back to an abelianization test (distinctness only) and bidirectional
//! search over single relation applications.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::abelian::{lattice_contains, IntMatrix};
use crate::budget::{Budget, Meter};
use crate::presentation::Presentation;
use crate::words::{overlap_set, Word};
use crate::{Error, Result};

/// A single oriented rule: every occurrence of `replace` becomes `keep`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub keep: Word,
    pub replace: Word,
}

impl RewriteRule {
    /// Checks the confluence preconditions for replacing `v` by `u`,
    /// reporting the first failing condition.
    fn check(u: &Word, v: &Word, alphabet: &[u8]) -> std::result::Result<RewriteRule, String> {
        if overlap_set(v).len() != 1 {
            return Err(format!(
                "replaced side {v} has a nonempty self-overlap"
            ));
        }
        let decreasing = alphabet
            .iter()
            .any(|&c| u.count_letter(c) < v.count_letter(c));
        if !decreasing {
            return Err(format!(
                "no generator occurs strictly less often in {u} than in {v}"
            ));
        }
        Ok(RewriteRule {
            keep: u.clone(),
            replace: v.clone(),
        })
    }
}

/// Picks an orientation of the single relation satisfying the rewrite
/// preconditions, if either does. The stored orientation (replace the
/// second side) is preferred. Multi-relator presentations get `None`.
pub fn choose_rewrite_orientation(p: &Presentation) -> Option<RewriteRule> {
    if !p.is_one_relator() {
        return None;
    }
    let (u, v) = &p.relations()[0];
    RewriteRule::check(u, v, p.alphabet())
        .or_else(|_| RewriteRule::check(v, u, p.alphabet()))
        .ok()
}

/// Validates the preconditions for the stored orientation of the single
/// relation, naming the failed condition on error.
pub fn rewrite_preconditions(p: &Presentation) -> Result<RewriteRule> {
    let (u, v) = p.single_relation()?;
    RewriteRule::check(u, v, p.alphabet()).map_err(Error::Precondition)
}

/// Applies the rule once at the leftmost occurrence; None when
/// irreducible.
fn rewrite_leftmost(z: &Word, rule: &RewriteRule) -> Option<Word> {
    let pos = z.factor_positions(&rule.replace).first().copied()?;
    Some(z.replace_at(pos, &rule.replace, &rule.keep))
}

/// The chain `z -> ... -> irreducible` under leftmost rewriting,
/// starting with `z` itself.
fn rewrite_chain(z: &Word, rule: &RewriteRule) -> Vec<Word> {
    let mut chain = vec![z.clone()];
    while let Some(next) = rewrite_leftmost(chain.last().expect("nonempty"), rule) {
        chain.push(next);
    }
    chain
}

/// The unique irreducible form of `z` under the stored orientation of
/// the presentation's single relation.
pub fn rewrite_irreducible(z: &Word, p: &Presentation) -> Result<Word> {
    let rule = rewrite_preconditions(p)?;
    Ok(rewrite_chain(z, &rule).pop().expect("nonempty"))
}

/// Verdict of a word-equality query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EqualityStatus {
    Equal,
    Distinct,
    Unknown,
}

/// Result of [`words_equal`]: the status, a relation-application chain
/// from `x` to `y` when they are equal, the deciding stage, and the
/// number of search states spent.
#[derive(Debug, Clone, Serialize)]
pub struct EqualityVerdict {
    pub status: EqualityStatus,
    pub witness: Option<Vec<String>>,
    pub method: String,
    pub budget_used: u64,
}

impl EqualityVerdict {
    fn decided(status: EqualityStatus, witness: Option<Vec<Word>>, method: &str) -> Self {
        EqualityVerdict {
            status,
            witness: witness.map(|ws| ws.iter().map(|w| w.render()).collect()),
            method: method.to_string(),
            budget_used: 0,
        }
    }
}

/// Difference vectors of the relation sides, as columns; the lattice
/// they span contains the count difference of any equal pair.
fn relation_difference_lattice(p: &Presentation) -> IntMatrix {
    let n = p.alphabet().len();
    let mut m = IntMatrix::zeros(n, p.relations().len());
    for (j, (u, v)) in p.relations().iter().enumerate() {
        let cu = u.counts(p.alphabet());
        let cv = v.counts(p.alphabet());
        for i in 0..n {
            m.set(i, j, BigInt::from(cu[i] - cv[i]));
        }
    }
    m
}

/// All words one relation application away from `w`.
pub(crate) fn neighbors(w: &Word, p: &Presentation) -> Vec<Word> {
    let mut out = Vec::new();
    for (u, v) in p.relations() {
        for &pos in &w.factor_positions(u) {
            out.push(w.replace_at(pos, u, v));
        }
        for &pos in &w.factor_positions(v) {
            out.push(w.replace_at(pos, v, u));
        }
    }
    out
}

/// Decides whether `x` and `y` represent the same element, staging
/// syntactic equality, confluent rewriting (exact when it applies), an
/// abelianized distinctness test, and bidirectional search bounded by
/// `budget.bfs_states`.
pub fn words_equal(x: &Word, y: &Word, p: &Presentation, budget: &Budget) -> EqualityVerdict {
    if x == y {
        return EqualityVerdict::decided(EqualityStatus::Equal, Some(vec![x.clone()]), "syntactic");
    }
    if let Some(rule) = choose_rewrite_orientation(p) {
        let cx = rewrite_chain(x, &rule);
        let cy = rewrite_chain(y, &rule);
        if cx.last() == cy.last() {
            let mut witness = cx;
            witness.extend(cy.into_iter().rev().skip(1));
            return EqualityVerdict::decided(EqualityStatus::Equal, Some(witness), "rewriting");
        }
        return EqualityVerdict::decided(EqualityStatus::Distinct, None, "rewriting");
    }
    // Abelianization: equal words have count difference inside the
    // relation-difference lattice.
    let lattice = relation_difference_lattice(p);
    let cx = x.counts(p.alphabet());
    let cy = y.counts(p.alphabet());
    let diff: Vec<BigInt> = cx
        .iter()
        .zip(cy.iter())
        .map(|(a, b)| BigInt::from(a - b))
        .collect();
    if !lattice_contains(&lattice, &diff) {
        return EqualityVerdict::decided(EqualityStatus::Distinct, None, "abelianization");
    }
    bidirectional_search(x, y, p, budget)
}

/// Bidirectional breadth-first search over single relation
/// applications. Exhausting either side's frontier proves distinctness;
/// running out of budget yields Unknown.
fn bidirectional_search(x: &Word, y: &Word, p: &Presentation, budget: &Budget) -> EqualityVerdict {
    // parent maps: word -> predecessor toward the respective root
    let mut fwd: HashMap<Word, Option<Word>> = HashMap::new();
    let mut bwd: HashMap<Word, Option<Word>> = HashMap::new();
    fwd.insert(x.clone(), None);
    bwd.insert(y.clone(), None);
    let mut fwd_frontier = vec![x.clone()];
    let mut bwd_frontier = vec![y.clone()];
    let mut meter = Meter::new(budget.bfs_states);

    loop {
        if fwd_frontier.is_empty() || bwd_frontier.is_empty() {
            return EqualityVerdict {
                status: EqualityStatus::Distinct,
                witness: None,
                method: "search".into(),
                budget_used: meter.used(),
            };
        }
        // expand the smaller frontier
        let forward = fwd_frontier.len() <= bwd_frontier.len();
        let (frontier, this_side, other_side) = if forward {
            (&mut fwd_frontier, &mut fwd, &mut bwd)
        } else {
            (&mut bwd_frontier, &mut bwd, &mut fwd)
        };
        let mut next = Vec::new();
        let mut meeting: Option<Word> = None;
        'expand: for w in frontier.drain(..) {
            if !meter.tick() {
                return EqualityVerdict {
                    status: EqualityStatus::Unknown,
                    witness: None,
                    method: "search".into(),
                    budget_used: meter.used(),
                };
            }
            for n in neighbors(&w, p) {
                if this_side.contains_key(&n) {
                    continue;
                }
                this_side.insert(n.clone(), Some(w.clone()));
                if other_side.contains_key(&n) {
                    meeting = Some(n);
                    break 'expand;
                }
                next.push(n);
            }
        }
        if let Some(m) = meeting {
            let witness = stitch(&fwd, &bwd, &m);
            return EqualityVerdict {
                status: EqualityStatus::Equal,
                witness: Some(witness.iter().map(|w| w.render()).collect()),
                method: "search".into(),
                budget_used: meter.used(),
            };
        }
        *frontier = next;
    }
}

/// Joins the two parent chains through the meeting word into a single
/// chain from the forward root to the backward root.
fn stitch(
    fwd: &HashMap<Word, Option<Word>>,
    bwd: &HashMap<Word, Option<Word>>,
    meeting: &Word,
) -> Vec<Word> {
    let mut front = Vec::new();
    let mut cur = Some(meeting.clone());
    while let Some(w) = cur {
        cur = fwd[&w].clone();
        front.push(w);
    }
    front.reverse();
    let mut cur = bwd[meeting].clone();
    while let Some(w) = cur {
        cur = bwd[&w].clone();
        front.push(w);
    }
    front
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::words::parse_word;

    fn cd_rule() -> Presentation {
        Presentation::parse("generators: a b c d\nrelation: ab = cd").unwrap()
    }

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    /// One relation application transforms `a` into `b`.
    fn one_step(a: &Word, b: &Word, p: &Presentation) -> bool {
        neighbors(a, p).contains(b)
    }

    fn witness_is_valid(vs: &[String], x: &Word, y: &Word, p: &Presentation) {
        let words: Vec<Word> = vs.iter().map(|s| parse_word(s).unwrap()).collect();
        assert_eq!(words.first(), Some(x));
        assert_eq!(words.last(), Some(y));
        for pair in words.windows(2) {
            assert!(
                one_step(&pair[0], &pair[1], p),
                "witness step {} -> {} is not a relation application",
                pair[0],
                pair[1]
            );
        }
    }

    #[test]
    fn orientation_selection() {
        // cd -> ab qualifies as stored
        let rule = rewrite_preconditions(&cd_rule()).unwrap();
        assert_eq!(rule.replace, w("cd"));
        // aba = bab: both sides have nonempty overlaps
        assert!(choose_rewrite_orientation(&fixtures::braid3()).is_none());
        // b^2ab = a: left side has a self-overlap, right side is not
        // decreasing; no orientation qualifies
        assert!(choose_rewrite_orientation(&fixtures::remstill_lcm(2, 1).unwrap()).is_none());
        // b = aab: swapped orientation aab -> b qualifies
        let p = Presentation::parse("generators: a b\nrelation: b = aab").unwrap();
        let rule = choose_rewrite_orientation(&p).unwrap();
        assert_eq!(rule.replace, w("aab"));
        assert_eq!(rule.keep, w("b"));
    }

    #[test]
    fn irreducible_forms() {
        let p = cd_rule();
        assert_eq!(rewrite_irreducible(&w("acdb"), &p).unwrap(), w("aabb"));
        assert_eq!(rewrite_irreducible(&w("abba"), &p).unwrap(), w("abba"));
        // two disjoint occurrences both replaced
        assert_eq!(rewrite_irreducible(&w("cdcd"), &p).unwrap(), w("abab"));
        // each replacement re-creates the factor one step further left
        let p2 = Presentation::parse("generators: a b\nrelation: b = ab").unwrap();
        assert_eq!(rewrite_irreducible(&w("a^3b"), &p2).unwrap(), w("b"));
        assert_eq!(rewrite_irreducible(&w("ba"), &p2).unwrap(), w("ba"));
    }

    #[test]
    fn rewrite_order_does_not_change_the_result() {
        // exhaustive: apply occurrences in every order via recursion
        fn all_normal_forms(z: &Word, rule: &RewriteRule, out: &mut std::collections::HashSet<Word>) {
            let positions = z.factor_positions(&rule.replace);
            if positions.is_empty() {
                out.insert(z.clone());
                return;
            }
            for pos in positions {
                let next = z.replace_at(pos, &rule.replace, &rule.keep);
                all_normal_forms(&next, rule, out);
            }
        }
        let p = cd_rule();
        let rule = rewrite_preconditions(&p).unwrap();
        for z in ["cdacd", "cdcdcd", "ccdd", "acdbcdacd"] {
            let mut forms = std::collections::HashSet::new();
            all_normal_forms(&w(z), &rule, &mut forms);
            assert_eq!(forms.len(), 1, "multiple normal forms for {z}");
            assert_eq!(
                forms.into_iter().next().unwrap(),
                rewrite_irreducible(&w(z), &p).unwrap()
            );
        }
    }

    #[test]
    fn equality_in_the_three_strand_braid_monoid() {
        let p = fixtures::braid3();
        let budget = Budget::default();
        let v = words_equal(&w("aba"), &w("bab"), &p, &budget);
        assert_eq!(v.status, EqualityStatus::Equal);
        let ws = v.witness.unwrap();
        assert_eq!(ws.len(), 2, "aba = bab in one application");
        witness_is_valid(&ws, &w("aba"), &w("bab"), &p);

        let v = words_equal(&w("abaa"), &w("baba"), &p, &budget);
        assert_eq!(v.status, EqualityStatus::Equal);
        witness_is_valid(&v.witness.unwrap(), &w("abaa"), &w("baba"), &p);

        // singleton classes: frontier exhaustion proves distinctness
        let v = words_equal(&w("a"), &w("b"), &p, &budget);
        assert_eq!(v.status, EqualityStatus::Distinct);
        assert!(v.witness.is_none());

        // abelianization: count difference outside the lattice
        let v = words_equal(&w("aa"), &w("abb"), &p, &budget);
        assert_eq!(v.status, EqualityStatus::Distinct);
        assert_eq!(v.method, "abelianization");
    }

    #[test]
    fn rewriting_stage_decides_exactly() {
        let p = cd_rule();
        let budget = Budget::default();
        let v = words_equal(&w("acdb"), &w("aabb"), &p, &budget);
        assert_eq!(v.status, EqualityStatus::Equal);
        assert_eq!(v.method, "rewriting");
        witness_is_valid(&v.witness.unwrap(), &w("acdb"), &w("aabb"), &p);
        let v = words_equal(&w("acdb"), &w("abab"), &p, &budget);
        assert_eq!(v.status, EqualityStatus::Distinct);
    }

    #[test]
    fn budget_exhaustion_reports_unknown() {
        // torus relation grows classes without bound in both directions;
        // distinct words with matching abelianization force a search.
        let p = fixtures::torus(2, 3).unwrap();
        // a^2 and b^3 are equal: found fast
        let v = words_equal(&w("a^2"), &w("b^3"), &p, &Budget::default());
        assert_eq!(v.status, EqualityStatus::Equal);
        // starve the search with a one-state budget
        let tiny = Budget {
            reversing_steps: 1,
            bfs_states: 1,
        };
        let v = words_equal(&w("a^2b^3a^2"), &w("b^3a^2b^3"), &p, &tiny);
        assert_eq!(v.status, EqualityStatus::Unknown);
        assert!(v.budget_used >= 1);
    }

    #[test]
    fn equality_is_symmetric_on_fixtures() {
        let p = fixtures::braid3();
        let budget = Budget::default();
        for (x, y) in [("abab", "baba"), ("ab", "ba"), ("abaab", "ababa")] {
            let xy = words_equal(&w(x), &w(y), &p, &budget);
            let yx = words_equal(&w(y), &w(x), &p, &budget);
            assert_eq!(xy.status, yx.status, "asymmetry on ({x},{y})");
        }
    }
}
