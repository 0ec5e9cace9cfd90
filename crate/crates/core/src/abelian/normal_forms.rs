//! Hermite and Smith normal forms with unimodular transforms.
//!
//! Hermite convention (pinned): the column-style form `M V = H` acts by
//! unimodular column operations and is lower-left echelon: reading
//! columns left to right, the topmost nonzero entry (pivot) of each
//! column sits in a strictly increasing row, pivots are positive, and in
//! a pivot's row every entry to its left lies in `[0, pivot)`. Zero
//! columns come last. This form is unique for the column lattice, so two
//! generating sets span the same lattice iff their forms agree after
//! dropping zero columns. The row-style form is the transpose statement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite form: returns (U, H) with U unimodular, U*M = H.
pub fn hnf_row(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        // Clear column j below row r using Bezout row transforms.
        let mut pivot_exists = false;
        for i in r..rows {
            if !h.at(i, j).is_zero() {
                if !pivot_exists {
                    h.swap_rows(r, i);
                    u.swap_rows(r, i);
                    pivot_exists = true;
                } else {
                    let a = h.at(r, j).clone();
                    let b = h.at(i, j).clone();
                    let e = a.extended_gcd(&b);
                    // [[x, y], [-b/g, a/g]] has determinant +1
                    let z = -(&b / &e.gcd);
                    let w = &a / &e.gcd;
                    h.transform_rows(r, i, &e.x, &e.y, &z, &w);
                    u.transform_rows(r, i, &e.x, &e.y, &z, &w);
                }
            }
        }
        if !pivot_exists {
            continue;
        }
        if h.at(r, j).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        // Reduce entries above the pivot into [0, pivot).
        let pivot = h.at(r, j).clone();
        for i in 0..r {
            let q = h.at(i, j).div_floor(&pivot);
            if !q.is_zero() {
                let c = -q;
                h.add_row_multiple(i, r, &c);
                u.add_row_multiple(i, r, &c);
            }
        }
        r += 1;
    }
    (u, h)
}

/// Column-style Hermite form: returns (H, V) with V unimodular, M*V = H.
pub fn hnf_col(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (u, h) = hnf_row(&m.transpose());
    (h.transpose(), u.transpose())
}

/// Canonical basis matrix of the column lattice: the column Hermite form
/// with zero columns dropped. Equal outputs characterize equal lattices.
pub fn lattice_canonical_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf_col(m);
    let keep: Vec<usize> = (0..h.cols())
        .filter(|&j| (0..h.rows()).any(|i| !h.at(i, j).is_zero()))
        .collect();
    h.select_columns(&keep)
}

/// Basis of the integer kernel `{x : M x = 0}` as matrix columns.
///
/// The kernel of an integer matrix is a saturated sublattice; the
/// returned columns generate it exactly (they are the transform columns
/// matching the zero columns of the column Hermite form).
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (h, v) = hnf_col(m);
    let keep: Vec<usize> = (0..h.cols())
        .filter(|&j| (0..h.rows()).all(|i| h.at(i, j).is_zero()))
        .collect();
    v.select_columns(&keep)
}

/// Pivot positions (row, col) of a column Hermite form.
fn pivots(h: &IntMatrix) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..h.cols() {
        if let Some(i) = (0..h.rows()).find(|&i| !h.at(i, j).is_zero()) {
            out.push((i, j));
        }
    }
    out
}

/// Solves `M x = t` over the integers, returning a particular solution.
pub fn solve(m: &IntMatrix, t: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(t.len(), m.rows());
    let (h, v) = hnf_col(m);
    let mut rest = t.to_vec();
    let mut y = vec![BigInt::zero(); h.cols()];
    for (pi, pj) in pivots(&h) {
        let pivot = h.at(pi, pj);
        let (q, r) = rest[pi].div_rem(pivot);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (i, r) in rest.iter_mut().enumerate() {
                *r -= &q * h.at(i, pj);
            }
            y[pj] = q;
        }
    }
    if rest.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(v.apply(&y))
}

/// True when `t` lies in the column lattice of `m`.
pub fn lattice_contains(m: &IntMatrix, t: &[BigInt]) -> bool {
    solve(m, t).is_some()
}

/// True when every column of `n` lies in the column lattice of `m`.
pub fn lattice_contains_all(m: &IntMatrix, n: &IntMatrix) -> bool {
    assert_eq!(m.rows(), n.rows());
    (0..n.cols()).all(|j| lattice_contains(m, &n.column(j)))
}

/// Smith normal form decomposition `U * M * V = S`.
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries of S (including zeros), in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.at(i, i).clone()).collect()
    }
}

/// Computes the Smith normal form with transforms.
///
/// S is diagonal with nonnegative entries d_1 | d_2 | ... ; U and V are
/// unimodular.
pub fn smith(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        // Choose the minimal-magnitude nonzero entry as pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s.at(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if s.at(i, j).abs() < s.at(pi, pj).abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // Clear column t below the pivot.
            for i in t + 1..rows {
                if s.at(i, t).is_zero() {
                    continue;
                }
                let a = s.at(t, t).clone();
                let b = s.at(i, t).clone();
                if (&b % &a).is_zero() {
                    let c = -(&b / &a);
                    s.add_row_multiple(i, t, &c);
                    u.add_row_multiple(i, t, &c);
                } else {
                    let e = a.extended_gcd(&b);
                    let z = -(&b / &e.gcd);
                    let w = &a / &e.gcd;
                    s.transform_rows(t, i, &e.x, &e.y, &z, &w);
                    u.transform_rows(t, i, &e.x, &e.y, &z, &w);
                }
            }
            // Clear row t to the right of the pivot.
            for j in t + 1..cols {
                if s.at(t, j).is_zero() {
                    continue;
                }
                let a = s.at(t, t).clone();
                let b = s.at(t, j).clone();
                if (&b % &a).is_zero() {
                    let c = -(&b / &a);
                    s.add_col_multiple(j, t, &c);
                    v.add_col_multiple(j, t, &c);
                } else {
                    let e = a.extended_gcd(&b);
                    let z = -(&b / &e.gcd);
                    let w = &a / &e.gcd;
                    s.transform_cols(t, j, &e.x, &e.y, &z, &w);
                    v.transform_cols(t, j, &e.x, &e.y, &z, &w);
                }
            }
            let col_clear = (t + 1..rows).all(|i| s.at(i, t).is_zero());
            let row_clear = (t + 1..cols).all(|j| s.at(t, j).is_zero());
            if !col_clear || !row_clear {
                continue;
            }
            // Enforce the divisibility chain: the pivot must divide every
            // remaining entry; pull an offender into row t and re-clear.
            let pivot_val = s.at(t, t).clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(s.at(i, j) % &pivot_val).is_zero());
            match offender {
                Some((i, _)) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.at(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { u, s, v }
}
