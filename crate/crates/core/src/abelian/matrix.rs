//! Dense integer matrices with exact arithmetic.
//!
//! Entries are arbitrary-precision integers; all eliminations are
//! fraction free. Sizes are capped to keep accidental blowups loud.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::{Error, Result};

/// Largest admissible dimension per side.
pub const MAX_DIM: usize = 512;

/// A rows x cols integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            rows <= MAX_DIM && cols <= MAX_DIM,
            "matrix dimensions {rows}x{cols} exceed {MAX_DIM}"
        );
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    /// Parses one row per line, entries whitespace separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let x: BigInt = tok.parse().map_err(|_| {
                    Error::Parse(format!("line {}: bad integer {tok:?}", lineno + 1))
                })?;
                row.push(x);
            }
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(Error::Parse(format!(
                        "line {}: expected {} entries, found {}",
                        lineno + 1,
                        first.len(),
                        row.len()
                    )));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        let r = rows.len();
        let c = rows[0].len();
        if r > MAX_DIM || c > MAX_DIM {
            return Err(Error::Parse(format!(
                "matrix dimensions {r}x{c} exceed {MAX_DIM}"
            )));
        }
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut m = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.at(k, j);
                    if !add.is_zero() {
                        let cur = m.at(i, j) + add;
                        m.set(i, j, cur);
                    }
                }
            }
        }
        m
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        m
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        m
    }

    pub fn neg(&self) -> IntMatrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = -x.clone();
        }
        m
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x *= c;
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.at(i, j).clone());
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut m = IntMatrix::zeros(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                m.set(self.rows + i, j, other.at(i, j).clone());
            }
        }
        m
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.at(i, j).clone());
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn column_matrix(&self, j: usize) -> IntMatrix {
        self.submatrix(0, self.rows, j, j + 1)
    }

    /// Columns selected by `keep`, in order.
    pub fn select_columns(&self, keep: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, keep.len());
        for (jj, &j) in keep.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.at(i, j).clone());
            }
        }
        m
    }

    pub fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(i * self.cols + j, k * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, j: usize, l: usize) {
        if j == l {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + j, i * self.cols + l);
        }
    }

    /// row_i += c * row_k
    pub fn add_row_multiple(&mut self, i: usize, k: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = c * self.at(k, j);
            let cur = self.at(i, j) + add;
            self.set(i, j, cur);
        }
    }

    /// col_j += c * col_l
    pub fn add_col_multiple(&mut self, j: usize, l: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = c * self.at(i, l);
            let cur = self.at(i, j) + add;
            self.set(i, j, cur);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -self.at(i, j).clone();
            self.set(i, j, x);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = -self.at(i, j).clone();
            self.set(i, j, x);
        }
    }

    /// Replaces rows i and k by (x*row_i + y*row_k, z*row_i + w*row_k).
    /// The 2x2 block [[x,y],[z,w]] must be unimodular.
    pub fn transform_rows(
        &mut self,
        i: usize,
        k: usize,
        x: &BigInt,
        y: &BigInt,
        z: &BigInt,
        w: &BigInt,
    ) {
        for j in 0..self.cols {
            let a = self.at(i, j).clone();
            let b = self.at(k, j).clone();
            self.set(i, j, x * &a + y * &b);
            self.set(k, j, z * &a + w * &b);
        }
    }

    /// Column analogue of `transform_rows`.
    pub fn transform_cols(
        &mut self,
        j: usize,
        l: usize,
        x: &BigInt,
        y: &BigInt,
        z: &BigInt,
        w: &BigInt,
    ) {
        for i in 0..self.rows {
            let a = self.at(i, j).clone();
            let b = self.at(i, l).clone();
            self.set(i, j, x * &a + y * &b);
            self.set(i, l, z * &a + w * &b);
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j) * &v[j])
                    .sum::<BigInt>()
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination; square only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.at(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                    let q = &num / &prev; // exact by Bareiss
                    a.set(i, j, q);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.at(k, k).clone();
        }
        sign * a.at(n - 1, n - 1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Entries as i64 rows, for serialization into reports.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                let x = self.at(i, j);
                row.push(i64::try_from(x.clone()).map_err(|_| {
                    Error::Internal(format!("matrix entry {x} does not fit in i64"))
                })?);
            }
            out.push(row);
        }
        Ok(out)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self
            .to_i64_rows()
            .map_err(|e| serde::ser::Error::custom(e.to_string()))?;
        rows.serialize(ser)
    }
}
