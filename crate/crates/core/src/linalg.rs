//! Dense matrices over F_q: reduced row-echelon form, rank, kernels and
//! span membership.
//!
//! Over F_2 elimination runs on a word-packed copy of the matrix
//! ([`BitMatrix`]); every other field uses one [`Elem`] per entry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows<R: AsRef<[Elem]>>(cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let acc = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a != 0 {
                    f.axpy(acc, a, other.row(k));
                }
            }
        }
        out
    }

    /// `v · M` for a row vector `v`.
    pub fn left_mul_vec(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (r, &c) in v.iter().enumerate() {
            f.axpy(&mut out, c, self.row(r));
        }
        out
    }

    /// `M · v` for a column vector `v`.
    pub fn mul_vec(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        self.row_iter().map(|row| f.dot(row, v)).collect()
    }

    pub fn rref(&self, f: &Field) -> Rref {
        if f.is_binary() {
            let mut bits = BitMatrix::from_matrix(self);
            let pivots = bits.rref();
            return Rref {
                matrix: bits.to_matrix(),
                rank: pivots.len(),
                pivots,
            };
        }
        let mut m = self.clone();
        let pivots = rref_in_place(f, &mut m);
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self, f: &Field) -> usize {
        if f.is_binary() {
            return BitMatrix::from_matrix(self).rref().len();
        }
        self.rref(f).rank
    }

    /// Rows form a basis of the right kernel `{v : M v = 0}`.
    pub fn kernel_basis(&self, f: &Field) -> Matrix {
        let Rref {
            matrix: r, pivots, ..
        } = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Matrix::zeros(0, self.cols);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(row, free));
            }
            out.push_row(&v);
        }
        out
    }

    /// Row-major digit string: base-36 digits when `q <= 36`, otherwise
    /// decimal entries separated by `.`.
    pub fn digit_string(&self, q: u32) -> String {
        encode_digits(&self.data, q)
    }

    pub fn from_digit_string(rows: usize, cols: usize, s: &str, q: u32) -> Result<Matrix> {
        let data = decode_digits(s, q)?;
        if data.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }
}

/// Gauss-Jordan elimination. Pivot for each column is the first nonzero row
/// at or below the current row.
fn rref_in_place(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m.get(i, c) != 0) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                m.data.swap(pr * cols + k, r * cols + k);
            }
        }
        let inv = f.inv(m.get(r, c));
        for k in c..cols {
            let x = m.get(r, k);
            m.set(r, k, f.mul(inv, x));
        }
        let pivot_row: Vec<Elem> = m.row(r)[c..].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor != 0 {
                let neg = f.neg(factor);
                let target = &mut m.data[i * cols + c..(i + 1) * cols];
                f.axpy(target, neg, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `c · basis = target` for the row vector `c`, or `None` when
/// `target` is outside the row space. Basis rows must be independent.
pub fn solve_in_span(f: &Field, basis: &Matrix, target: &[Elem]) -> Option<Vec<Elem>> {
    assert_eq!(basis.cols(), target.len());
    let k = basis.rows();
    // columns of the augmented system [basis^T | target^T]
    let mut aug = Matrix::zeros(basis.cols(), k + 1);
    for i in 0..basis.cols() {
        for j in 0..k {
            aug.set(i, j, basis.get(j, i));
        }
        aug.set(i, k, target[i]);
    }
    let Rref { matrix, pivots, .. } = aug.rref(f);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![0; k];
    for (row, &p) in pivots.iter().enumerate() {
        c[p] = matrix.get(row, k);
    }
    Some(c)
}

pub(crate) fn encode_digits(data: &[Elem], q: u32) -> String {
    if q <= 36 {
        data.iter()
            .map(|&x| std::char::from_digit(x as u32, 36).expect("digit below 36"))
            .collect()
    } else {
        data.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

pub(crate) fn decode_digits(s: &str, q: u32) -> Result<Vec<Elem>> {
    let bad = |what: &str| Error::Parse(format!("bad element {what:?} for q={q}"));
    let out: Result<Vec<Elem>> = if q <= 36 {
        s.chars()
            .map(|ch| match ch.to_digit(36) {
                Some(d) if d < q => Ok(d as Elem),
                _ => Err(bad(&ch.to_string())),
            })
            .collect()
    } else if s.is_empty() {
        Ok(Vec::new())
    } else {
        s.split('.')
            .map(|tok| match tok.parse::<u32>() {
                Ok(d) if d < q => Ok(d as Elem),
                _ => Err(bad(tok)),
            })
            .collect()
    };
    out
}

/// JSON fixture form of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub q: u32,
    pub rows: usize,
    pub cols: usize,
    pub digits: String,
}

impl MatrixRecord {
    pub fn new(m: &Matrix, q: u32) -> Self {
        MatrixRecord {
            q,
            rows: m.rows,
            cols: m.cols,
            digits: m.digit_string(q),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        Matrix::from_digit_string(self.rows, self.cols, &self.digits, self.q)
    }
}

/// Row-major matrix over F_2 with rows packed into `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        let mut b = Self::zeros(m.rows, m.cols);
        for r in 0..m.rows {
            for (c, &x) in m.row(r).iter().enumerate() {
                if x & 1 == 1 {
                    b.data[r * b.words + c / 64] |= 1 << (c % 64);
                }
            }
        }
        b
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    m.set(r, c, 1);
                }
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// In-place reduced row-echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let w = self.words;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let (word, bit) = (c / 64, 1u64 << (c % 64));
            let Some(pr) = (r..self.rows).find(|&i| self.data[i * w + word] & bit != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..w {
                    self.data.swap(pr * w + k, r * w + k);
                }
            }
            let (before, rest) = self.data.split_at_mut(r * w);
            let (pivot, after) = rest.split_at_mut(w);
            for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
                if row[word] & bit != 0 {
                    for k in word..w {
                        row[k] ^= pivot[k];
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}
