//! Finite labeled graphs modeling the boundary of a one-relator monoid:
//! the non-reversible model, the reversible case-1 and case-2 models,
//! hand-rolled vertex families for dihedral and torus-knot monoids, and
//! graph-algebra K-theory from the adjacency matrix.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::{kernel_basis, FinAbGroup, IntMatrix};
use crate::budget::Budget;
use crate::fixtures::alternating;
use crate::par;
use crate::presentation::Presentation;
use crate::reversing::find_garside_like_w;
use crate::rewrite::{
    choose_rewrite_orientation, neighbors, rewrite_preconditions, words_equal, EqualityStatus,
};
use crate::words::{parse_word, Word};
use crate::{Error, Result};

/// Refuse to materialize graphs beyond this many vertices.
const MAX_VERTICES: usize = 200_000;

/// How a graph was produced; serialized with the graph so exports are
/// self-describing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "kebab-case")]
pub enum Provenance {
    Nonreversible { pruned: bool },
    ReversibleCase1 { pruned: bool },
    ReversibleCase2 { w: String, pruned: bool },
    DihedralFamily { m: u32 },
    TorusFamily { p: u32, q: u32 },
    Imported,
}

/// A labeled edge between vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub letter: u8,
}

/// An immutable vertex-labeled, edge-labeled digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelGraph {
    vertices: Vec<Word>,
    edges: Vec<Edge>,
    provenance: Provenance,
}

impl ModelGraph {
    pub fn new(vertices: Vec<Word>, edges: Vec<Edge>, provenance: Provenance) -> Result<Self> {
        for e in &edges {
            if e.src >= vertices.len() || e.dst >= vertices.len() {
                return Err(Error::Parse(format!(
                    "edge ({}, {}) is out of range for {} vertices",
                    e.src,
                    e.dst,
                    vertices.len()
                )));
            }
        }
        Ok(ModelGraph {
            vertices,
            edges,
            provenance,
        })
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// (out-degree, in-degree) per vertex.
    fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut out = vec![0usize; self.vertices.len()];
        let mut inc = vec![0usize; self.vertices.len()];
        for e in &self.edges {
            out[e.src] += 1;
            inc[e.dst] += 1;
        }
        (out, inc)
    }
}

/// All words of exactly `len` letters, in lexicographic order of the
/// alphabet.
fn words_of_length(alphabet: &[u8], len: usize) -> Vec<Word> {
    let mut layer = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for &c in alphabet {
                let mut n = w.clone();
                n.push(c);
                next.push(n);
            }
        }
        layer = next;
    }
    layer
}

fn contains_forbidden(w: &Word, forbidden: &[Word]) -> bool {
    forbidden.iter().any(|f| !w.factor_positions(f).is_empty())
}

/// The chaining test: y followed by x overlap so that y's letters from
/// the second position on match x shifted by one. Returns the junction,
/// the shortest word beginning with y whose final letters spell x.
fn junction(y: &Word, x: &Word) -> Option<Word> {
    let (ly, lx) = (y.len(), x.len());
    if ly == 0 || lx == 0 {
        return None;
    }
    for i in 1..ly.min(lx + 1) {
        if y.letters()[i] != x.letters()[i - 1] {
            return None;
        }
    }
    if ly > lx {
        Some(y.clone())
    } else {
        Some(y.concat(&x.slice(ly - 1, lx)))
    }
}

/// Every edge y -> x among `vertices` whose junction avoids all
/// forbidden factors. The edge label is y's first letter.
fn junction_edges(vertices: &[Word], forbidden: &[Word]) -> Vec<Edge> {
    par::flat_map_range(vertices.len(), |i| {
        let y = &vertices[i];
        let mut row = Vec::new();
        for (j, x) in vertices.iter().enumerate() {
            if let Some(jw) = junction(y, x) {
                if !contains_forbidden(&jw, forbidden) {
                    row.push(Edge {
                        src: i,
                        dst: j,
                        letter: y.letters()[0],
                    });
                }
            }
        }
        row
    })
}

/// Iteratively removes vertices missing an incoming or outgoing edge,
/// leaving exactly the vertices on bi-infinite paths.
fn trim(vertices: Vec<Word>, edges: Vec<Edge>) -> (Vec<Word>, Vec<Edge>) {
    let n = vertices.len();
    let mut alive = vec![true; n];
    loop {
        let mut out = vec![0usize; n];
        let mut inc = vec![0usize; n];
        for e in &edges {
            if alive[e.src] && alive[e.dst] {
                out[e.src] += 1;
                inc[e.dst] += 1;
            }
        }
        let mut changed = false;
        for v in 0..n {
            if alive[v] && (out[v] == 0 || inc[v] == 0) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for (v, w) in vertices.into_iter().enumerate() {
        if alive[v] {
            index[v] = kept.len();
            kept.push(w);
        }
    }
    let kept_edges = edges
        .into_iter()
        .filter(|e| alive[e.src] && alive[e.dst])
        .map(|e| Edge {
            src: index[e.src],
            dst: index[e.dst],
            letter: e.letter,
        })
        .collect();
    (kept, kept_edges)
}

fn check_vertex_budget(alphabet_len: usize, top: usize) -> Result<()> {
    let mut count: usize = 1;
    for _ in 0..top {
        count = count
            .checked_mul(alphabet_len)
            .filter(|&c| c <= MAX_VERTICES)
            .ok_or_else(|| {
                Error::CapExceeded(format!(
                    "graph would have over {MAX_VERTICES} vertices"
                ))
            })?;
    }
    Ok(())
}

/// Shared shape of the two-generator models: vertices are the
/// forbidden-factor-free words of length `top` (plus all shorter ones as
/// isolated sources when unpruned), edges chain length-`top` words.
fn stratified_graph(
    alphabet: &[u8],
    forbidden: &[Word],
    top: usize,
    pruned: bool,
    provenance: Provenance,
) -> Result<ModelGraph> {
    check_vertex_budget(alphabet.len(), top)?;
    let top_words: Vec<Word> = words_of_length(alphabet, top)
        .into_iter()
        .filter(|w| !contains_forbidden(w, forbidden))
        .collect();
    let edges = junction_edges(&top_words, forbidden);
    if pruned {
        let (vertices, edges) = trim(top_words, edges);
        return ModelGraph::new(vertices, edges, provenance);
    }
    let mut vertices = Vec::new();
    for len in 0..top {
        vertices.extend(
            words_of_length(alphabet, len)
                .into_iter()
                .filter(|w| !contains_forbidden(w, forbidden)),
        );
    }
    let offset = vertices.len();
    vertices.extend(top_words);
    let edges = edges
        .into_iter()
        .map(|e| Edge {
            src: e.src + offset,
            dst: e.dst + offset,
            letter: e.letter,
        })
        .collect();
    ModelGraph::new(vertices, edges, provenance)
}

/// Graph model for a one-relator presentation on at least three
/// generators whose relation admits a confluent orientation u = v with
/// neither side a factor of the other. Vertices are the words shorter
/// than v; edges y -> x exist when y followed by one letter equals one
/// letter followed by x without spelling v.
pub fn build_nonreversible_graph(p: &Presentation, pruned: bool) -> Result<ModelGraph> {
    p.single_relation()?;
    if p.alphabet().len() < 3 {
        return Err(Error::Precondition(
            "the non-reversible model needs at least three generators".into(),
        ));
    }
    let rule = match choose_rewrite_orientation(p) {
        Some(rule) => rule,
        // neither orientation passes; surface the stored orientation's failure
        None => match rewrite_preconditions(p) {
            Err(e) => return Err(e),
            Ok(_) => {
                return Err(Error::Internal(
                    "orientation choice disagrees with the precondition check".into(),
                ))
            }
        },
    };
    let (u, v) = (&rule.keep, &rule.replace);
    if !v.factor_positions(u).is_empty() || !u.factor_positions(v).is_empty() {
        return Err(Error::Precondition(
            "one relation side is a factor of the other".into(),
        ));
    }
    let top = v.len() - 1;
    let forbidden = vec![v.clone()];
    check_vertex_budget(p.alphabet().len(), top)?;
    if pruned {
        let top_words = words_of_length(p.alphabet(), top);
        let edges = junction_edges(&top_words, &forbidden);
        let (vertices, edges) = trim(top_words, edges);
        return ModelGraph::new(vertices, edges, Provenance::Nonreversible { pruned });
    }
    // unpruned: every stratum keeps its own chaining edges, including
    // one loop per letter at the empty word
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for len in 0..=top {
        let offset = vertices.len();
        let stratum = words_of_length(p.alphabet(), len);
        if len == 0 {
            for &c in p.alphabet() {
                if Word::letter(c) != *v {
                    edges.push(Edge {
                        src: offset,
                        dst: offset,
                        letter: c,
                    });
                }
            }
        } else {
            edges.extend(junction_edges(&stratum, &forbidden).into_iter().map(|e| {
                Edge {
                    src: e.src + offset,
                    dst: e.dst + offset,
                    letter: e.letter,
                }
            }));
        }
        vertices.extend(stratum);
    }
    ModelGraph::new(vertices, edges, Provenance::Nonreversible { pruned })
}

/// Graph model for a two-generator one-relator monoid whose Garside-like
/// element is the relator itself: vertices are relator-free words of
/// length max length minus one, chained when the junction stays
/// relator-free.
pub fn build_reversible_graph_case1(
    p: &Presentation,
    pruned: bool,
    budget: &Budget,
) -> Result<ModelGraph> {
    let (u, v) = p.single_relation()?;
    let (u, v) = (u.clone(), v.clone());
    if p.alphabet().len() != 2 {
        return Err(Error::Precondition(
            "the reversible models need exactly two generators".into(),
        ));
    }
    let bound = u.len().max(v.len());
    let w = find_garside_like_w(p, bound, budget)?.ok_or_else(|| {
        Error::Precondition(format!(
            "no Garside-like element of length at most {bound} exists"
        ))
    })?;
    let is_relator = w == u
        || w == v
        || words_equal(&w, &u, p, budget).status == EqualityStatus::Equal;
    if !is_relator {
        return Err(Error::Precondition(format!(
            "the Garside-like element {w} differs from the relation sides; use the case-2 model"
        )));
    }
    stratified_graph(
        p.alphabet(),
        &[u, v],
        bound - 1,
        pruned,
        Provenance::ReversibleCase1 { pruned },
    )
}

/// All words equal to `w`, by search over relation applications. Errors
/// when the class does not close within `budget.bfs_states` words.
fn word_class(w: &Word, p: &Presentation, budget: &Budget) -> Result<Vec<Word>> {
    let mut seen = BTreeSet::from([w.clone()]);
    let mut queue = VecDeque::from([w.clone()]);
    while let Some(cur) = queue.pop_front() {
        for next in neighbors(&cur, p) {
            if seen.contains(&next) {
                continue;
            }
            if seen.len() as u64 >= budget.bfs_states {
                return Err(Error::Budget(format!(
                    "the set of words equal to {w} did not close within {} words; \
                     it may be infinite",
                    budget.bfs_states
                )));
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    Ok(seen.into_iter().collect())
}

/// Graph model for a two-generator one-relator monoid with a
/// Garside-like element w longer than the relator. Forbidden factors are
/// the longer relation side v together with every word equal to w; the
/// join-coverage condition for w is verified first.
pub fn build_reversible_graph_case2(
    p: &Presentation,
    w: &Word,
    pruned: bool,
    budget: &Budget,
) -> Result<ModelGraph> {
    let (x, y) = p.single_relation()?;
    let (x, y) = (x.clone(), y.clone());
    if p.alphabet().len() != 2 {
        return Err(Error::Precondition(
            "the reversible models need exactly two generators".into(),
        ));
    }
    // v is the side starting with the first generator, as in the
    // coverage condition
    let a = p.alphabet()[0];
    let (u, v) = if x.first() == Some(a) { (y, x) } else { (x, y) };
    if !v.factor_positions(&u).is_empty() {
        return Err(Error::Precondition(format!(
            "{u} is a factor of {v}, so the case-2 model does not apply"
        )));
    }
    let report = crate::reversing::verify_condition_2_3prime(p, w, budget)?;
    if !report.all_hold {
        let bad = report
            .per_l
            .iter()
            .find(|e| !matches!(e.status, crate::reversing::LStatus::Holds | crate::reversing::LStatus::Vacuous))
            .map(|e| e.l)
            .unwrap_or(0);
        return Err(Error::Precondition(format!(
            "the join-coverage condition for {w} fails at prefix length {bad}"
        )));
    }
    let class = word_class(w, p, budget)?;
    let mut forbidden: BTreeSet<Word> = class.into_iter().collect();
    forbidden.insert(v.clone());
    let forbidden: Vec<Word> = forbidden.into_iter().collect();
    let top = forbidden.iter().map(Word::len).max().expect("nonempty") - 1;
    stratified_graph(
        p.alphabet(),
        &forbidden,
        top,
        pruned,
        Provenance::ReversibleCase2 {
            w: w.render(),
            pruned,
        },
    )
}

/// The fixed vertex family for the dihedral Artin monoid on two
/// generators with relation length m, chained by the junction rule with
/// the two relator sides forbidden. Never pruned.
pub fn builtin_dihedral(m: u32) -> Result<ModelGraph> {
    if m < 3 {
        return Err(Error::Precondition(
            "the dihedral family needs m >= 3".into(),
        ));
    }
    let m = m as usize;
    let (a, b) = (b'a', b'b');
    let ab = |k: usize| alternating(a, b, 2 * k);
    let ba = |k: usize| alternating(b, a, 2 * k);
    let aa = Word::letter(a).concat(&Word::letter(a));
    let bb = Word::letter(b).concat(&Word::letter(b));
    let mut vs: Vec<Word> = Vec::new();
    if m.is_multiple_of(2) {
        for k in 0..=(m - 4) / 2 {
            vs.push(ab(k).concat(&aa));
        }
        vs.push(alternating(a, b, m - 1));
        for k in (1..=(m - 2) / 2).rev() {
            vs.push(ab(k).concat(&Word::letter(b)));
        }
        for k in 1..=(m - 2) / 2 {
            vs.push(ba(k).concat(&Word::letter(a)));
        }
        vs.push(alternating(b, a, m - 1));
        for k in (0..=(m - 4) / 2).rev() {
            vs.push(ba(k).concat(&bb));
        }
    } else {
        for k in 0..=(m - 3) / 2 {
            vs.push(ab(k).concat(&aa));
        }
        vs.push(alternating(a, b, m - 1));
        for k in (1..=(m - 3) / 2).rev() {
            vs.push(ab(k).concat(&Word::letter(b)));
        }
        for k in 1..=(m - 3) / 2 {
            vs.push(ba(k).concat(&Word::letter(a)));
        }
        vs.push(alternating(b, a, m - 1));
        for k in (0..=(m - 3) / 2).rev() {
            vs.push(ba(k).concat(&bb));
        }
    }
    debug_assert_eq!(vs.len(), 2 * (m - 1));
    let forbidden = vec![alternating(a, b, m), alternating(b, a, m)];
    let edges = junction_edges(&vs, &forbidden);
    ModelGraph::new(vs, edges, Provenance::DihedralFamily { m: m as u32 })
}

/// The fixed vertex family for the torus-knot monoid a^p = b^q. The
/// list is asymmetric in a and b by design. Never pruned.
pub fn builtin_torus(p: u32, q: u32) -> Result<ModelGraph> {
    if p < 2 || q < 2 {
        return Err(Error::Precondition(
            "the torus-knot family needs p, q >= 2".into(),
        ));
    }
    let (pu, qu) = (p as usize, q as usize);
    let (a, b) = (b'a', b'b');
    let run = |c: u8, k: usize| {
        let mut w = Word::empty();
        for _ in 0..k {
            w.push(c);
        }
        w
    };
    let mut vs: Vec<Word> = Vec::new();
    for k in 1..=pu.saturating_sub(2) {
        let mut w = run(a, k);
        w.push(b);
        vs.push(w);
    }
    vs.push(run(a, pu - 1));
    for k in 1..=qu - 1 {
        let mut w = run(b, k);
        w.push(a);
        vs.push(w);
    }
    let forbidden = vec![run(a, pu), run(b, qu)];
    let edges = junction_edges(&vs, &forbidden);
    ModelGraph::new(vs, edges, Provenance::TorusFamily { p, q })
}

/// A hand-rolled vertex family by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFamily {
    Dihedral { m: u32 },
    Torus { p: u32, q: u32 },
}

pub fn builtin_model(family: BuiltinFamily) -> Result<ModelGraph> {
    match family {
        BuiltinFamily::Dihedral { m } => builtin_dihedral(m),
        BuiltinFamily::Torus { p, q } => builtin_torus(p, q),
    }
}

/// Adjacency matrix: entry (i, j) counts edges i -> j.
pub fn adjacency(g: &ModelGraph) -> IntMatrix {
    let n = g.vertices.len();
    let mut a = IntMatrix::zeros(n, n);
    for e in &g.edges {
        let bumped = a.at(e.src, e.dst) + BigInt::from(1);
        a.set(e.src, e.dst, bumped);
    }
    a
}

/// K-theory of the graph algebra: K0 = coker(I - A^t), K1 = ker(I - A^t).
/// Requires every vertex to have an incoming and an outgoing edge.
pub fn graph_k_theory(g: &ModelGraph) -> Result<(FinAbGroup, FinAbGroup)> {
    graph_k_theory_with_loops(g, 0)
}

/// Same K-theory after adding `n_extra` loops at every vertex, the
/// finite stand-in for extra free generators. With at least one loop
/// per vertex the degree requirement is automatic.
pub fn graph_k_theory_with_loops(
    g: &ModelGraph,
    n_extra: usize,
) -> Result<(FinAbGroup, FinAbGroup)> {
    if n_extra == 0 {
        let (out, inc) = g.degrees();
        if let Some(v) = (0..g.vertices.len()).find(|&v| out[v] == 0 || inc[v] == 0) {
            return Err(Error::Precondition(format!(
                "vertex {} has no {} edge; rebuild the graph pruned",
                g.vertices[v],
                if out[v] == 0 { "outgoing" } else { "incoming" }
            )));
        }
    }
    let n = g.vertices.len();
    let m = IntMatrix::identity(n)
        .scale(&BigInt::from(1 - n_extra as i64))
        .sub(&adjacency(g).transpose());
    let k1 = FinAbGroup::free(kernel_basis(&m).cols());
    let k0 = FinAbGroup::from_presentation(n, m);
    Ok((k0, k1))
}

/// Standard digraph analyses used as sanity checks on the models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphProperties {
    pub irreducible: bool,
    pub every_cycle_has_exit: bool,
    pub has_sources: bool,
    pub has_sinks: bool,
}

fn reaches_all(n: usize, succ: &[Vec<usize>], start: usize) -> bool {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

pub fn graph_properties(g: &ModelGraph) -> GraphProperties {
    let n = g.vertices.len();
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for e in &g.edges {
        succ[e.src].push(e.dst);
        pred[e.dst].push(e.src);
    }
    let irreducible = n == 0 || (reaches_all(n, &succ, 0) && reaches_all(n, &pred, 0));
    // a cycle with no exit is exactly a cycle all of whose vertices have
    // out-degree one
    let mut every_cycle_has_exit = true;
    let mut state = vec![0u8; n]; // 0 unvisited, 1 on path, 2 done
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while succ[v].len() == 1 && state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = succ[v][0];
        }
        if state[v] == 1 {
            every_cycle_has_exit = false;
        }
        for w in path {
            state[w] = 2;
        }
        if !every_cycle_has_exit {
            break;
        }
    }
    let (out, inc) = g.degrees();
    GraphProperties {
        irreducible,
        every_cycle_has_exit,
        has_sources: inc.contains(&0),
        has_sinks: out.contains(&0),
    }
}

/// DOT rendering: one line per edge, plus declarations for isolated
/// vertices so nothing is lost.
pub fn export_dot(g: &ModelGraph) -> String {
    let mut incident = vec![false; g.vertices.len()];
    for e in &g.edges {
        incident[e.src] = true;
        incident[e.dst] = true;
    }
    let mut s = String::from("digraph model {\n");
    for (v, word) in g.vertices.iter().enumerate() {
        if !incident[v] {
            s.push_str(&format!("  \"{}\";\n", word.render()));
        }
    }
    for e in &g.edges {
        s.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            g.vertices[e.src].render(),
            g.vertices[e.dst].render(),
            e.letter as char
        ));
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize, Deserialize)]
struct JsonVertex {
    id: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    src: usize,
    dst: usize,
    letter: String,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<JsonVertex>,
    edges: Vec<JsonEdge>,
    provenance: Provenance,
}

pub fn export_json(g: &ModelGraph) -> String {
    let doc = JsonGraph {
        vertices: g
            .vertices
            .iter()
            .enumerate()
            .map(|(id, w)| JsonVertex {
                id,
                label: w.render(),
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|e| JsonEdge {
                src: e.src,
                dst: e.dst,
                letter: (e.letter as char).to_string(),
            })
            .collect(),
        provenance: g.provenance.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}

pub fn import_json(text: &str) -> Result<ModelGraph> {
    let doc: JsonGraph =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
    for (pos, v) in doc.vertices.iter().enumerate() {
        if v.id != pos {
            return Err(Error::Parse(format!(
                "vertex ids must be dense and ordered; found {} at position {pos}",
                v.id
            )));
        }
    }
    let vertices = doc
        .vertices
        .iter()
        .map(|v| parse_word(&v.label))
        .collect::<Result<Vec<_>>>()?;
    let edges = doc
        .edges
        .iter()
        .map(|e| {
            let mut chars = e.letter.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::Parse(format!(
                    "edge letter {:?} must be a single character",
                    e.letter
                )));
            };
            Ok(Edge {
                src: e.src,
                dst: e.dst,
                letter: c as u8,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ModelGraph::new(vertices, edges, doc.provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn four_letter_fixture() -> Presentation {
        Presentation::parse("generators: a b c d\nrelation: ab = cd\n").unwrap()
    }

    fn edge_labels(g: &ModelGraph) -> Vec<(String, String, char)> {
        let mut out: Vec<_> = g
            .edges()
            .iter()
            .map(|e| {
                (
                    g.vertices()[e.src].render(),
                    g.vertices()[e.dst].render(),
                    e.letter as char,
                )
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn nonreversible_model_of_the_two_charm_relation() {
        let p = four_letter_fixture();
        let unpruned = build_nonreversible_graph(&p, false).unwrap();
        assert_eq!(unpruned.vertices().len(), 5);
        assert_eq!(unpruned.edges().len(), 19);
        // one loop per letter at the empty word
        let loops = unpruned
            .edges()
            .iter()
            .filter(|e| e.src == 0 && e.dst == 0)
            .count();
        assert_eq!(loops, 4);

        let pruned = build_nonreversible_graph(&p, true).unwrap();
        assert_eq!(pruned.vertices().len(), 4);
        assert_eq!(pruned.edges().len(), 15);
        let (k0, k1) = graph_k_theory(&pruned).unwrap();
        assert_eq!(k0, FinAbGroup::cyclic(2));
        assert!(k1.is_trivial());
    }

    #[test]
    fn nonreversible_model_rejects_bad_presentations() {
        let two = fixtures::braid3();
        assert!(matches!(
            build_nonreversible_graph(&two, true),
            Err(Error::Precondition(_))
        ));
        let factor = Presentation::parse("generators: a b c\nrelation: b = ab\n").unwrap();
        let err = build_nonreversible_graph(&factor, true).unwrap_err();
        assert!(err.to_string().contains("factor"));
        let overlap = Presentation::parse("generators: a b c\nrelation: aa = abab\n").unwrap();
        let err = build_nonreversible_graph(&overlap, true).unwrap_err();
        assert!(err.to_string().contains("self-overlap"));
        let balanced = Presentation::parse("generators: a b c\nrelation: ab = ba\n").unwrap();
        let err = build_nonreversible_graph(&balanced, true).unwrap_err();
        assert!(err.to_string().contains("strictly less often"));
    }

    #[test]
    fn case1_model_of_the_braid_relation() {
        let budget = Budget::default();
        let pruned = build_reversible_graph_case1(&fixtures::braid3(), true, &budget).unwrap();
        let names: Vec<String> = pruned.vertices().iter().map(Word::render).collect();
        assert_eq!(names, ["a^2", "ab", "ba", "b^2"]);
        assert_eq!(
            edge_labels(&pruned),
            [
                ("a^2".into(), "a^2".into(), 'a'),
                ("a^2".into(), "ab".into(), 'a'),
                ("ab".into(), "b^2".into(), 'a'),
                ("b^2".into(), "b^2".into(), 'b'),
                ("b^2".into(), "ba".into(), 'b'),
                ("ba".into(), "a^2".into(), 'b'),
            ]
        );
        let a = adjacency(&pruned).to_i64_rows().unwrap();
        assert_eq!(
            a,
            [
                [1, 1, 0, 0],
                [0, 0, 0, 1],
                [1, 0, 0, 0],
                [0, 0, 1, 1]
            ]
        );

        let unpruned = build_reversible_graph_case1(&fixtures::braid3(), false, &budget).unwrap();
        assert_eq!(unpruned.vertices().len(), 7);
        assert_eq!(unpruned.edges().len(), 6);
        assert!(graph_properties(&unpruned).has_sources);
        assert!(graph_k_theory(&unpruned).is_err());
    }

    #[test]
    fn case1_model_of_the_torus_knot_relation() {
        let budget = Budget::default();
        let p = fixtures::torus(2, 3).unwrap();
        let pruned = build_reversible_graph_case1(&p, true, &budget).unwrap();
        let names: Vec<String> = pruned.vertices().iter().map(Word::render).collect();
        assert_eq!(names, ["ab", "ba", "b^2"]);
        assert_eq!(pruned.edges().len(), 4);
    }

    #[test]
    fn case1_model_requires_the_relator_to_be_garside_like() {
        // here the Garside-like element is b^3, not the relator b^2
        let p = fixtures::ex_u_bj(1, 2).unwrap();
        let err = build_reversible_graph_case1(&p, true, &Budget::default()).unwrap_err();
        assert!(err.to_string().contains("case-2"));
    }

    #[test]
    fn case2_model_of_the_bb_equals_aba_monoid() {
        let budget = Budget::default();
        let p = fixtures::ex_u_bj(1, 2).unwrap();
        let class = word_class(&w("b^3"), &p, &budget).unwrap();
        assert_eq!(class, [w("abab"), w("baba"), w("b^3")]);

        let pruned = build_reversible_graph_case2(&p, &w("b^3"), true, &budget).unwrap();
        let names: Vec<String> = pruned.vertices().iter().map(Word::render).collect();
        assert_eq!(names, ["a^3", "a^2b", "ab^2", "ba^2", "bab", "b^2a"]);
        assert_eq!(
            edge_labels(&pruned),
            [
                ("a^2b".into(), "ab^2".into(), 'a'),
                ("a^3".into(), "a^2b".into(), 'a'),
                ("a^3".into(), "a^3".into(), 'a'),
                ("ab^2".into(), "b^2a".into(), 'a'),
                ("b^2a".into(), "ba^2".into(), 'b'),
                ("b^2a".into(), "bab".into(), 'b'),
                ("ba^2".into(), "a^2b".into(), 'b'),
                ("ba^2".into(), "a^3".into(), 'b'),
                ("bab".into(), "ab^2".into(), 'b'),
            ]
        );
        let props = graph_properties(&pruned);
        assert!(!props.has_sources && !props.has_sinks);
        assert!(graph_k_theory(&pruned).is_ok());
    }

    #[test]
    fn case2_word_class_respects_the_budget() {
        let p = fixtures::ex_u_bj(1, 2).unwrap();
        let tiny = Budget {
            reversing_steps: 100_000,
            bfs_states: 1,
        };
        assert!(matches!(
            word_class(&w("b^3"), &p, &tiny),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn builtin_dihedral_families() {
        let g3 = builtin_dihedral(3).unwrap();
        let names: Vec<String> = g3.vertices().iter().map(Word::render).collect();
        assert_eq!(names, ["a^2", "ab", "ba", "b^2"]);
        let g5 = builtin_dihedral(5).unwrap();
        let names: Vec<String> = g5.vertices().iter().map(Word::render).collect();
        assert_eq!(
            names,
            ["a^2", "aba^2", "abab", "ab^2", "ba^2", "baba", "bab^2", "b^2"]
        );
        let g4 = builtin_dihedral(4).unwrap();
        let names: Vec<String> = g4.vertices().iter().map(Word::render).collect();
        assert_eq!(names, ["a^2", "aba", "ab^2", "ba^2", "bab", "b^2"]);
        for m in 3..=8 {
            let g = builtin_dihedral(m).unwrap();
            assert_eq!(g.vertices().len() as u32, 2 * (m - 1));
            let props = graph_properties(&g);
            assert!(!props.has_sources && !props.has_sinks, "m = {m}");
        }
    }

    #[test]
    fn builtin_torus_families() {
        let g = builtin_torus(2, 3).unwrap();
        let names: Vec<String> = g.vertices().iter().map(Word::render).collect();
        assert_eq!(names, ["a", "ba", "b^2a"]);
        assert_eq!(
            edge_labels(&g),
            [
                ("a".into(), "b^2a".into(), 'a'),
                ("a".into(), "ba".into(), 'a'),
                ("b^2a".into(), "ba".into(), 'b'),
                ("ba".into(), "a".into(), 'b'),
            ]
        );
        let a = adjacency(&g).to_i64_rows().unwrap();
        assert_eq!(a, [[0, 1, 1], [1, 0, 0], [0, 1, 0]]);

        let g22 = builtin_torus(2, 2).unwrap();
        let names: Vec<String> = g22.vertices().iter().map(Word::render).collect();
        assert_eq!(names, ["a", "ba"]);
        let (k0, k1) = graph_k_theory(&g22).unwrap();
        assert_eq!(k0, FinAbGroup::free(1));
        assert_eq!(k1, FinAbGroup::free(1));
    }

    #[test]
    fn builtin_k_theory_matches_the_closed_forms() {
        // odd m: (Z/(m-2), 0); even m: (Z + Z/((m-2)/2), Z)
        for m in [3u32, 5, 7] {
            let (k0, k1) = graph_k_theory(&builtin_dihedral(m).unwrap()).unwrap();
            assert_eq!(k0, FinAbGroup::cyclic((m - 2) as u64), "m = {m}");
            assert!(k1.is_trivial(), "m = {m}");
        }
        for m in [4u32, 6, 8] {
            let (k0, k1) = graph_k_theory(&builtin_dihedral(m).unwrap()).unwrap();
            let expected = FinAbGroup::free(1).direct_sum(&FinAbGroup::cyclic(((m - 2) / 2) as u64));
            assert_eq!(k0, expected, "m = {m}");
            assert_eq!(k1, FinAbGroup::free(1), "m = {m}");
        }
        for (p, q) in [(2u32, 3u32), (3, 3), (2, 5), (3, 4)] {
            let (k0, k1) = graph_k_theory(&builtin_torus(p, q).unwrap()).unwrap();
            let order = ((p - 1) * (q - 1)) as i64 - 1;
            assert_eq!(k0, FinAbGroup::cyclic(order as u64), "({p},{q})");
            assert!(k1.is_trivial(), "({p},{q})");
        }
    }

    #[test]
    fn builtin_and_generic_case1_models_agree_on_k_theory() {
        let budget = Budget::default();
        for m in 3..=6u32 {
            let builtin = graph_k_theory(&builtin_dihedral(m).unwrap()).unwrap();
            let p = fixtures::dihedral(m).unwrap();
            let generic =
                graph_k_theory(&build_reversible_graph_case1(&p, true, &budget).unwrap()).unwrap();
            assert_eq!(builtin, generic, "m = {m}");
        }
        for (p, q) in [(2u32, 2u32), (2, 3), (3, 3), (2, 5)] {
            let builtin = graph_k_theory(&builtin_torus(p, q).unwrap()).unwrap();
            let pres = fixtures::torus(p, q).unwrap();
            let generic =
                graph_k_theory(&build_reversible_graph_case1(&pres, true, &budget).unwrap())
                    .unwrap();
            assert_eq!(builtin, generic, "({p},{q})");
        }
    }

    #[test]
    fn k_theory_is_invariant_under_vertex_reordering() {
        let g = builtin_dihedral(5).unwrap();
        let n = g.vertices().len();
        // fixed rotation-plus-swap permutation
        let perm: Vec<usize> = (0..n).map(|i| (i * 3 + 1) % n).collect();
        let mut spots = perm.clone();
        spots.sort_unstable();
        assert_eq!(spots, (0..n).collect::<Vec<_>>());
        let vertices: Vec<Word> = (0..n)
            .map(|i| g.vertices()[perm.iter().position(|&p| p == i).unwrap()].clone())
            .collect();
        let edges: Vec<Edge> = g
            .edges()
            .iter()
            .map(|e| Edge {
                src: perm[e.src],
                dst: perm[e.dst],
                letter: e.letter,
            })
            .collect();
        let shuffled = ModelGraph::new(vertices, edges, Provenance::Imported).unwrap();
        assert_eq!(
            graph_k_theory(&g).unwrap(),
            graph_k_theory(&shuffled).unwrap()
        );
    }

    #[test]
    fn extra_loops_match_materialized_loops() {
        let p = four_letter_fixture();
        let g = build_nonreversible_graph(&p, true).unwrap();
        assert_eq!(
            graph_k_theory_with_loops(&g, 0).unwrap(),
            graph_k_theory(&g).unwrap()
        );
        let mut edges = g.edges().to_vec();
        for v in 0..g.vertices().len() {
            edges.push(Edge {
                src: v,
                dst: v,
                letter: b'z',
            });
        }
        let looped = ModelGraph::new(g.vertices().to_vec(), edges, Provenance::Imported).unwrap();
        assert_eq!(
            graph_k_theory_with_loops(&g, 1).unwrap(),
            graph_k_theory(&looped).unwrap()
        );
    }

    #[test]
    fn digraph_properties() {
        let g = builtin_torus(2, 3).unwrap();
        let props = graph_properties(&g);
        assert!(props.irreducible);
        assert!(props.every_cycle_has_exit);
        assert!(!props.has_sources && !props.has_sinks);

        let single_loop = ModelGraph::new(
            vec![w("a")],
            vec![Edge {
                src: 0,
                dst: 0,
                letter: b'a',
            }],
            Provenance::Imported,
        )
        .unwrap();
        let props = graph_properties(&single_loop);
        assert!(props.irreducible);
        assert!(!props.every_cycle_has_exit);
    }

    #[test]
    fn dot_export_shape() {
        let single_loop = ModelGraph::new(
            vec![w("a")],
            vec![Edge {
                src: 0,
                dst: 0,
                letter: b'a',
            }],
            Provenance::Imported,
        )
        .unwrap();
        assert_eq!(
            export_dot(&single_loop),
            "digraph model {\n  \"a\" -> \"a\" [label=\"a\"];\n}\n"
        );
        let g3 = builtin_dihedral(3).unwrap();
        let dot = export_dot(&g3);
        assert!(dot.starts_with("digraph model {\n"));
        assert!(dot.contains("  \"a^2\" -> \"ab\" [label=\"a\"];\n"));
        assert_eq!(dot.lines().count(), 2 + g3.edges().len());
    }

    #[test]
    fn json_round_trip() {
        let budget = Budget::default();
        let graphs = vec![
            builtin_dihedral(4).unwrap(),
            builtin_torus(2, 3).unwrap(),
            build_reversible_graph_case1(&fixtures::braid3(), false, &budget).unwrap(),
            build_nonreversible_graph(&four_letter_fixture(), true).unwrap(),
        ];
        for g in graphs {
            let text = export_json(&g);
            let back = import_json(&text).unwrap();
            assert_eq!(back, g);
        }
        assert!(import_json("{\"vertices\": []}").is_err());
    }
}
