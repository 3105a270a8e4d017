//! Dense bit-packed matrices over GF(2).
//!
//! Rows are stored as runs of `u64` words, least significant bit first. Bits
//! beyond `cols` in the last word of a row are always zero; every operation
//! in this module preserves that.

use std::fmt;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {op} of {lhs_rows}x{lhs_cols} and {rhs_rows}x{rhs_cols}")]
    DimensionMismatch {
        op: &'static str,
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },
    #[error("column index {index} out of range for matrix with {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },
    #[error("column indices must be strictly increasing (found {prev} then {next})")]
    NotIncreasing { prev: usize, next: usize },
    #[error("ragged input: row {row} has {len} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },
}

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Iterates over the indices of set bits in a packed word slice.
pub fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * WORD_BITS + bit)
            }
        })
    })
}

/// Index of the first set bit at or after `from`.
#[inline]
pub(crate) fn next_one(words: &[u64], from: usize) -> Option<usize> {
    let mut w = from / WORD_BITS;
    if w >= words.len() {
        return None;
    }
    let mut word = words[w] & (!0u64 << (from % WORD_BITS));
    loop {
        if word != 0 {
            return Some(w * WORD_BITS + word.trailing_zeros() as usize);
        }
        w += 1;
        if w == words.len() {
            return None;
        }
        word = words[w];
    }
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Dense matrix over GF(2), row-major and bit-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. Any nonzero entry counts as 1.
    ///
    /// An empty slice gives the 0x0 matrix; use [`BitMatrix::zeros`] for
    /// other empty shapes.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Gf2Error::RaggedRows {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix with `cols` columns from packed row words.
    pub(crate) fn from_packed_rows(cols: usize, rows: usize, data: Vec<u64>) -> Self {
        let stride = words_for(cols);
        debug_assert_eq!(data.len(), rows * stride);
        let m = Self {
            rows,
            cols,
            stride,
            data,
        };
        debug_assert!(m.padding_is_clean());
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of `u64` words per packed row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row}, {col}) out of bounds"
        );
        (self.data[row * self.stride + col / WORD_BITS] >> (col % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row}, {col}) out of bounds"
        );
        let word = &mut self.data[row * self.stride + col / WORD_BITS];
        let mask = 1u64 << (col % WORD_BITS);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[u64] {
        &self.data[row * self.stride..(row + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.data[row * self.stride..(row + 1) * self.stride]
    }

    /// XORs row `src` into row `dst`.
    fn add_row(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(src.max(dst) * s);
        if src < dst {
            xor_into(&mut hi[..s], &lo[src * s..src * s + s]);
        } else {
            xor_into(&mut lo[dst * s..dst * s + s], &hi[..s]);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(a.max(b) * s);
        let low = a.min(b);
        lo[low * s..low * s + s].swap_with_slice(&mut hi[..s]);
    }

    pub fn row_ones(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        iter_ones(self.row(row))
    }

    pub fn row_weight(&self, row: usize) -> usize {
        self.row(row).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, col: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, col)).count()
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// True when every padding bit past `cols` is zero.
    pub fn padding_is_clean(&self) -> bool {
        let tail = self.cols % WORD_BITS;
        if tail == 0 || self.stride == 0 {
            return true;
        }
        let mask = !((1u64 << tail) - 1);
        (0..self.rows).all(|r| self.data[r * self.stride + self.stride - 1] & mask == 0)
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) as u8).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in iter_ones(self.row(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Dimension of the row space.
    ///
    /// Forward elimination on a scratch copy; `self` is left untouched.
    pub fn rank(&self) -> usize {
        let mut scratch = self.clone();
        scratch.eliminate_in_place(false).len()
    }

    /// Row-reduces in place and returns the pivot columns in order. With
    /// `full` set the result is in reduced row echelon form, otherwise only
    /// entries below each pivot are cleared.
    fn eliminate_in_place(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let word = col / WORD_BITS;
            let mask = 1u64 << (col % WORD_BITS);
            let Some(found) =
                (pivot_row..self.rows).find(|&r| self.data[r * self.stride + word] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(pivot_row, found);
            let start = if full { 0 } else { pivot_row + 1 };
            for r in start..self.rows {
                if r != pivot_row && self.data[r * self.stride + word] & mask != 0 {
                    self.add_row(pivot_row, r);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        debug_assert!(self.padding_is_clean());
        pivots
    }

    /// Reduced row echelon form together with its pivot columns. Zero rows
    /// are dropped, so the result has exactly `rank` rows.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut scratch = self.clone();
        let pivots = scratch.eliminate_in_place(true);
        scratch.data.truncate(pivots.len() * scratch.stride);
        scratch.rows = pivots.len();
        (scratch, pivots)
    }

    /// A basis of `{v : self * v^T = 0}`, one vector per row.
    pub fn kernel_basis(&self) -> Self {
        let (reduced, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.set(k, f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if reduced.get(r, f) {
                    basis.set(k, p, true);
                }
            }
        }
        basis
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, Gf2Error> {
        if self.cols != rhs.rows {
            return Err(self.mismatch("mul", rhs));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in iter_ones(self.row(r)) {
                xor_into(out.row_mut(r), rhs.row(k));
            }
        }
        Ok(out)
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i1 in 0..self.rows {
            for j1 in iter_ones(self.row(i1)) {
                for i2 in 0..rhs.rows {
                    for j2 in iter_ones(rhs.row(i2)) {
                        out.set(i1 * rhs.rows + i2, j1 * rhs.cols + j2, true);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self, Gf2Error> {
        if self.rows != rhs.rows {
            return Err(self.mismatch("hstack", rhs));
        }
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            out.row_mut(r)[..self.stride].copy_from_slice(self.row(r));
            for c in iter_ones(rhs.row(r)) {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    /// Vertical concatenation, `self` on top.
    pub fn vstack(&self, rhs: &Self) -> Result<Self, Gf2Error> {
        if self.cols != rhs.cols {
            return Err(self.mismatch("vstack", rhs));
        }
        let mut data = Vec::with_capacity(self.data.len() + rhs.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&rhs.data);
        Ok(Self::from_packed_rows(
            self.cols,
            self.rows + rhs.rows,
            data,
        ))
    }

    /// Rows at the given indices, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.stride);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Self::from_packed_rows(self.cols, idx.len(), data)
    }

    /// Submatrix keeping the given columns, which must be strictly increasing.
    pub fn select_columns(&self, idx: &[usize]) -> Result<Self, Gf2Error> {
        for (k, &c) in idx.iter().enumerate() {
            if c >= self.cols {
                return Err(Gf2Error::IndexOutOfRange {
                    index: c,
                    cols: self.cols,
                });
            }
            if k > 0 && idx[k - 1] >= c {
                return Err(Gf2Error::NotIncreasing {
                    prev: idx[k - 1],
                    next: c,
                });
            }
        }
        let mut out = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            let src = self.row(r);
            let dst = out.row_mut(r);
            for (k, &c) in idx.iter().enumerate() {
                let bit = (src[c / WORD_BITS] >> (c % WORD_BITS)) & 1;
                dst[k / WORD_BITS] |= bit << (k % WORD_BITS);
            }
        }
        Ok(out)
    }

    fn mismatch(&self, op: &'static str, rhs: &Self) -> Gf2Error {
        Gf2Error::DimensionMismatch {
            op,
            lhs_rows: self.rows,
            lhs_cols: self.cols,
            rhs_rows: rhs.rows,
            rhs_cols: rhs.cols,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Incrementally built basis of a subspace of GF(2)^width.
///
/// Each stored vector is keyed by its lowest set bit, and no two stored
/// vectors share one, so reducing a vector only ever moves its lowest set
/// bit upward.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    width: usize,
    stride: usize,
    slots: Vec<u64>,
    occupied: Vec<bool>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        let stride = words_for(width);
        Self {
            width,
            stride,
            slots: vec![0; width * stride],
            occupied: vec![false; width],
            rank: 0,
        }
    }

    pub fn from_rows(m: &BitMatrix) -> Self {
        let mut basis = Self::new(m.cols());
        for r in 0..m.rows() {
            basis.insert(m.row(r));
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduces `v` in place against the basis. Afterwards `v` is zero iff
    /// it was in the span.
    pub fn reduce(&self, v: &mut [u64]) {
        debug_assert_eq!(v.len(), self.stride);
        let mut from = 0;
        while let Some(bit) = next_one(v, from) {
            if self.occupied[bit] {
                xor_into(v, &self.slots[bit * self.stride..(bit + 1) * self.stride]);
            }
            from = bit + 1;
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut scratch = v.to_vec();
        self.reduce(&mut scratch);
        scratch.iter().all(|&w| w == 0)
    }

    /// Adds `v` to the basis; returns true if it was independent.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut scratch = v.to_vec();
        let mut from = 0;
        loop {
            let Some(bit) = next_one(&scratch, from) else {
                return false;
            };
            from = bit;
            if self.occupied[bit] {
                xor_into(
                    &mut scratch,
                    &self.slots[bit * self.stride..(bit + 1) * self.stride],
                );
            } else {
                self.slots[bit * self.stride..(bit + 1) * self.stride].copy_from_slice(&scratch);
                self.occupied[bit] = true;
                self.rank += 1;
                return true;
            }
        }
    }
}
