//! Named presentations used throughout the test suite and the CLI.

use crate::presentation::Presentation;
use crate::words::Word;
use crate::{Error, Result};

pub use crate::kpipeline::{artin_rep_coefficients, b4_coefficients};

/// Alternating word `first second first ...` of the given length.
pub fn alternating(first: u8, second: u8, len: usize) -> Word {
    let mut w = Word::empty();
    for i in 0..len {
        w.push(if i % 2 == 0 { first } else { second });
    }
    w
}

/// `<a,b | aba = bab>`: the positive braid monoid on three strands.
pub fn braid3() -> Presentation {
    Presentation::new(
        vec![b'a', b'b'],
        vec![(alternating(b'a', b'b', 3), alternating(b'b', b'a', 3))],
    )
    .expect("valid")
}

/// `<a,b,c | aba = bab, bcb = cbc, ac = ca>`: the positive braid monoid
/// on four strands.
pub fn braid4() -> Presentation {
    Presentation::new(
        vec![b'a', b'b', b'c'],
        vec![
            (alternating(b'a', b'b', 3), alternating(b'b', b'a', 3)),
            (alternating(b'b', b'c', 3), alternating(b'c', b'b', 3)),
            (
                Word::from_letters([b'a', b'c']).expect("valid"),
                Word::from_letters([b'c', b'a']).expect("valid"),
            ),
        ],
    )
    .expect("valid")
}

/// `<a,b | alt_a(m) = alt_b(m)>` for m >= 3: the dihedral-type monoid.
pub fn dihedral(m: u32) -> Result<Presentation> {
    if m < 3 {
        return Err(Error::Precondition(format!(
            "dihedral parameter must be at least 3, got {m}"
        )));
    }
    Presentation::new(
        vec![b'a', b'b'],
        vec![(
            alternating(b'a', b'b', m as usize),
            alternating(b'b', b'a', m as usize),
        )],
    )
}

/// `<a,b | a^p = b^q>` for p, q >= 2: the torus-knot-type monoid.
pub fn torus(p: u32, q: u32) -> Result<Presentation> {
    if p < 2 || q < 2 {
        return Err(Error::Precondition(format!(
            "torus parameters must be at least 2, got ({p},{q})"
        )));
    }
    Presentation::new(
        vec![b'a', b'b'],
        vec![(
            Word::from_letters(vec![b'a'; p as usize])?,
            Word::from_letters(vec![b'b'; q as usize])?,
        )],
    )
}

/// `<a,b | b^d a b^c = a>` for d, c >= 1: lcms exist but no
/// homogeneity certificate does.
pub fn remstill_lcm(d: u32, c: u32) -> Result<Presentation> {
    if d < 1 || c < 1 {
        return Err(Error::Precondition(format!(
            "remstill-lcm parameters must be at least 1, got ({d},{c})"
        )));
    }
    let mut left = Word::from_letters(vec![b'b'; d as usize])?;
    left.push(b'a');
    for _ in 0..c {
        left.push(b'b');
    }
    Presentation::new(
        vec![b'a', b'b'],
        vec![(left, Word::letter(b'a'))],
    )
}

/// `<a,b | b^j = a b^i a>` for i >= 1, j >= 2.
pub fn ex_u_bj(i: u32, j: u32) -> Result<Presentation> {
    if i < 1 || j < 2 {
        return Err(Error::Precondition(format!(
            "parameters must satisfy i >= 1, j >= 2, got ({i},{j})"
        )));
    }
    let mut right = Word::letter(b'a');
    for _ in 0..i {
        right.push(b'b');
    }
    right.push(b'a');
    Presentation::new(
        vec![b'a', b'b'],
        vec![(Word::from_letters(vec![b'b'; j as usize])?, right)],
    )
}

/// Looks up a presentation by compact name: `braid3`, `braid4`,
/// `dihedral(5)`, `torus(2,3)`, `remstill-lcm(2,1)`, `ex-u-bj(1,2)`.
pub fn by_name(name: &str) -> Result<Presentation> {
    let name = name.trim();
    match name {
        "braid3" => return Ok(braid3()),
        "braid4" => return Ok(braid4()),
        _ => {}
    }
    let (head, args) = match name.find('(') {
        Some(p) if name.ends_with(')') => (&name[..p], &name[p + 1..name.len() - 1]),
        _ => {
            return Err(Error::Parse(format!(
                "unknown fixture name {name:?}; expected braid3, braid4, dihedral(m), torus(p,q), remstill-lcm(d,c) or ex-u-bj(i,j)"
            )))
        }
    };
    let nums: Vec<u32> = args
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad fixture argument {s:?} in {name:?}")))
        })
        .collect::<Result<_>>()?;
    match (head, nums.as_slice()) {
        ("dihedral", [m]) => dihedral(*m),
        ("torus", [p, q]) => torus(*p, *q),
        ("remstill-lcm", [d, c]) => remstill_lcm(*d, *c),
        ("ex-u-bj", [i, j]) => ex_u_bj(*i, *j),
        _ => Err(Error::Parse(format!(
            "unknown fixture {head:?} with {} argument(s)",
            nums.len()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_fixtures_render_expected_relations() {
        assert_eq!(braid3().render(), "generators: a b\nrelation: aba = bab\n");
        assert_eq!(
            dihedral(5).unwrap().render(),
            "generators: a b\nrelation: ababa = babab\n"
        );
        assert_eq!(
            torus(2, 3).unwrap().render(),
            "generators: a b\nrelation: a^2 = b^3\n"
        );
        assert_eq!(
            remstill_lcm(2, 1).unwrap().render(),
            "generators: a b\nrelation: b^2ab = a\n"
        );
        assert_eq!(
            ex_u_bj(1, 2).unwrap().render(),
            "generators: a b\nrelation: b^2 = aba\n"
        );
        assert_eq!(braid4().relations().len(), 3);
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(by_name("torus(2, 3)").unwrap(), torus(2, 3).unwrap());
        assert_eq!(by_name("braid3").unwrap(), braid3());
        assert!(by_name("dihedral(2)").is_err());
        assert!(by_name("torus(2)").is_err());
        assert!(by_name("nonsense").is_err());
    }
}
