//! Dense linear algebra over GF(2).
//!
//! Rows are packed into 64-bit words. Every matrix carries one label per
//! column; callers address columns by label. Matrices are values: every
//! operation returns a new matrix.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::label::Label;

/// Largest `cols - rank` for which nullspace or row-space enumeration is
/// attempted by default.
pub const DEFAULT_ENUMERATION_BUDGET: usize = 24;

const WORD: usize = 64;

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `mask`; bit `i` is position `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "mask vectors hold at most 64 positions");
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = mask & keep;
        }
        v
    }

    /// Parses the row text form: `'0'`/`'1'` characters, leftmost is position 0.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                _ => return Err(Error::InvalidBitstring(s.into())),
            }
        }
        Ok(v)
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    /// Coordinatewise sum mod 2.
    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        let mut out = self.clone();
        out.xor_in_place(other);
        Ok(out)
    }

    fn xor_in_place(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Appends one position.
    pub fn pushed(&self, value: bool) -> BitVec {
        let mut out = BitVec::zeros(self.len + 1);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out.set(self.len, value);
        out
    }

    /// Positions as a 64-bit mask, if they fit.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ if self.words[1..].iter().all(|&w| w == 0) => Some(self.words[0]),
            _ => None,
        }
    }
}

impl core::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// Coordinatewise sum of two column vectors.
pub fn col_xor(u: &BitVec, v: &BitVec) -> Result<BitVec> {
    u.xor(v)
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: GF2Matrix,
    pub pivots: Vec<usize>,
}

/// Dense matrix over GF(2) with labeled columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GF2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
    labels: Vec<Label>,
}

fn check_distinct(labels: &[Label]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel(l.as_str().into()));
        }
    }
    Ok(())
}

impl GF2Matrix {
    pub fn new(rows: Vec<BitVec>, labels: Vec<Label>) -> Result<Self> {
        let cols = labels.len();
        check_distinct(&labels)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(GF2Matrix { rows, cols, labels })
    }

    pub fn zeros(nrows: usize, labels: Vec<Label>) -> Result<Self> {
        let cols = labels.len();
        Self::new(vec![BitVec::zeros(cols); nrows], labels)
    }

    pub fn identity(labels: Vec<Label>) -> Result<Self> {
        let n = labels.len();
        Self::new(
            (0..n).map(|i| BitVec::from_indices(n, [i])).collect(),
            labels,
        )
    }

    pub fn from_bitstrings<S: AsRef<str>>(rows: &[S], labels: Vec<Label>) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| BitVec::from_bitstring(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, labels)
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        self.rows.iter().map(BitVec::to_bitstring).collect()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn col_index(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn column_at(&self, j: usize) -> BitVec {
        BitVec::from_indices(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.get(j))
                .map(|(i, _)| i),
        )
    }

    pub fn column(&self, label: &Label) -> Result<BitVec> {
        self.col_index(label)
            .map(|j| self.column_at(j))
            .ok_or_else(|| Error::UnknownLabel(label.as_str().into()))
    }

    pub fn transpose(&self) -> GF2Matrix {
        let labels = (0..self.nrows())
            .map(|i| Label::new(alloc::format!("row{i}")))
            .collect();
        let rows = (0..self.cols).map(|j| self.column_at(j)).collect();
        GF2Matrix {
            rows,
            cols: self.nrows(),
            labels,
        }
    }

    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_in_place(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: GF2Matrix {
                rows,
                cols: self.cols,
                labels: self.labels.clone(),
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Row-reduced form with zero rows removed. Two GF(2) representations of
    /// the same binary matroid on the same column order reduce to the same
    /// matrix.
    pub fn reduced(&self) -> GF2Matrix {
        let Rref { mut matrix, pivots } = self.rref();
        matrix.rows.truncate(pivots.len());
        matrix
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(BitVec::from_indices(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.dot(v))
                .map(|(i, _)| i),
        ))
    }

    pub fn nullspace_basis(&self) -> Vec<BitVec> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::zeros(self.cols);
                v.set(f, true);
                for (row, &p) in matrix.rows.iter().zip(&pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    pub fn nullspace_vectors(&self) -> Result<Vec<BitVec>> {
        self.nullspace_vectors_within(DEFAULT_ENUMERATION_BUDGET)
    }

    /// All `2^(cols - rank)` solutions of `m v = 0`, zero included.
    pub fn nullspace_vectors_within(&self, limit: usize) -> Result<Vec<BitVec>> {
        span(&self.nullspace_basis(), self.cols, limit)
    }

    /// All vectors of the row space, zero included.
    pub fn row_space_vectors_within(&self, limit: usize) -> Result<Vec<BitVec>> {
        span(&self.reduced().rows, self.cols, limit)
    }

    pub fn hstack(a: &GF2Matrix, b: &GF2Matrix) -> Result<GF2Matrix> {
        if a.nrows() != b.nrows() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: b.nrows(),
            });
        }
        let mut labels = a.labels.clone();
        labels.extend(b.labels.iter().cloned());
        let rows = a
            .rows
            .iter()
            .zip(&b.rows)
            .map(|(ra, rb)| {
                BitVec::from_indices(
                    a.cols + b.cols,
                    ra.ones().chain(rb.ones().map(|j| j + a.cols)),
                )
            })
            .collect();
        GF2Matrix::new(rows, labels)
    }

    pub fn add_row(&self, v: &BitVec) -> Result<GF2Matrix> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = self.clone();
        out.rows.push(v.clone());
        Ok(out)
    }

    pub fn push_column(&self, label: Label, col: &BitVec) -> Result<GF2Matrix> {
        if col.len() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                found: col.len(),
            });
        }
        if self.col_index(&label).is_some() {
            return Err(Error::DuplicateLabel(label.as_str().into()));
        }
        let mut labels = self.labels.clone();
        labels.push(label);
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.pushed(col.get(i)))
            .collect();
        Ok(GF2Matrix {
            rows,
            cols: self.cols + 1,
            labels,
        })
    }

    /// Columns named by `order`, in that order.
    pub fn select_columns(&self, order: &[Label]) -> Result<GF2Matrix> {
        let idx = order
            .iter()
            .map(|l| {
                self.col_index(l)
                    .ok_or_else(|| Error::UnknownLabel(l.as_str().into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                BitVec::from_indices(
                    idx.len(),
                    idx.iter()
                        .enumerate()
                        .filter(|(_, &j)| r.get(j))
                        .map(|(k, _)| k),
                )
            })
            .collect();
        GF2Matrix::new(rows, order.to_vec())
    }

    pub fn relabeled(&self, labels: Vec<Label>) -> Result<GF2Matrix> {
        if labels.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: labels.len(),
            });
        }
        GF2Matrix::new(self.rows.clone(), labels)
    }

    /// Rank of the submatrix on the given column indices.
    pub fn column_rank(&self, cols: impl IntoIterator<Item = usize>) -> usize {
        let cols: Vec<BitVec> = cols.into_iter().map(|j| self.column_at(j)).collect();
        independent_count(cols)
    }
}

/// Rank of a list of equal-length vectors, by incremental elimination.
pub(crate) fn independent_count(vectors: impl IntoIterator<Item = BitVec>) -> usize {
    let mut basis: Vec<(usize, BitVec)> = Vec::new();
    for mut v in vectors {
        for (p, b) in &basis {
            if v.get(*p) {
                v.xor_in_place(b);
            }
        }
        let lead = v.ones().next();
        if let Some(p) = lead {
            for (_, b) in basis.iter_mut() {
                if b.get(p) {
                    b.xor_in_place(&v);
                }
            }
            basis.push((p, v));
        }
    }
    basis.len()
}

fn span(basis: &[BitVec], len: usize, limit: usize) -> Result<Vec<BitVec>> {
    let d = basis.len();
    if d > limit {
        return Err(Error::MemoryBudget { required: d, limit });
    }
    let mut out = Vec::with_capacity(1 << d);
    let mut cur = BitVec::zeros(len);
    out.push(cur.clone());
    // Gray-code walk: step k flips the basis vector at trailing_zeros(k).
    for k in 1u64..(1u64 << d) {
        cur.xor_in_place(&basis[k.trailing_zeros() as usize]);
        out.push(cur.clone());
    }
    Ok(out)
}
