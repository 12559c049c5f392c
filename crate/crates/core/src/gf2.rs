//! Dense bit vectors and bit matrices over GF(2).
//!
//! Rows are packed into `u64` words, row-major. Padding bits past the last
//! logical column are kept at zero so that word-level popcounts and equality
//! never see garbage.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the bitwise AND, i.e. the standard GF(2) dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits in ascending order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let tz = w.trailing_zeros() as usize;
                out.push(wi * WORD + tz);
                w &= w - 1;
            }
        }
        out
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.support() {
            out.set(i, true);
        }
        for i in other.support() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense row-major matrix over GF(2).
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

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BitVec], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            m.row_words_mut(r).copy_from_slice(row.words());
        }
        Ok(m)
    }

    /// Builds a matrix from nested 0/1 values; all rows must share a length.
    pub fn from_dense<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.stride + c / WORD;
        let mask = 1u64 << (c % WORD);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst, "adding a row to itself zeroes it");
        let (s, d) = (src * self.stride, dst * self.stride);
        for i in 0..self.stride {
            let w = self.data[s + i];
            self.data[d + i] ^= w;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.stride {
            self.data.swap(a * self.stride + i, b * self.stride + i);
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut out = vec![0; self.cols];
        for r in 0..self.rows {
            for (c, slot) in out.iter_mut().enumerate() {
                if self.get(r, c) {
                    *slot += 1;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Support of row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.row_words(r).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * WORD + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in self.row_support(r1) {
                for r2 in 0..other.rows {
                    for c2 in other.row_support(r2) {
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, true);
                    }
                }
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                out.set(r, c, true);
            }
            for c in other.row_support(r) {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Brings a copy into row echelon form and returns it with its pivot columns.
    fn echelon(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(row, p);
            for r in 0..m.rows {
                if r != row && m.get(r, col) {
                    m.add_row(row, r);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }
}

/// GF(2) rank. The input is left untouched.
pub fn rank(m: &BitMatrix) -> usize {
    m.echelon().1.len()
}

/// True iff `v` is a GF(2) combination of the rows of `m`.
pub fn in_row_span(v: &BitVec, m: &BitMatrix) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            found: v.len(),
        });
    }
    Ok(RowSpan::new(m).contains(v))
}

/// `a · bᵀ` over GF(2).
pub fn multiply_transpose(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: b.cols(),
        });
    }
    let mut out = BitMatrix::zeros(a.rows(), b.rows());
    for i in 0..a.rows() {
        let ra = a.row_words(i);
        for j in 0..b.rows() {
            let parity = ra
                .iter()
                .zip(b.row_words(j))
                .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones());
            if parity & 1 == 1 {
                out.set(i, j, true);
            }
        }
    }
    Ok(out)
}

/// A reduced row echelon basis kept around for repeated span-membership
/// queries. Reducing a vector against it costs one XOR per pivot.
#[derive(Clone, Debug)]
pub struct RowSpan {
    basis: BitMatrix,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(m: &BitMatrix) -> Self {
        let (basis, pivots) = m.echelon();
        Self { basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.basis.cols()
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (r, &col) in self.pivots.iter().enumerate() {
            if v.get(col) {
                for (a, b) in v.words.iter_mut().zip(self.basis.row_words(r)) {
                    *a ^= b;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        debug_assert_eq!(v.len(), self.basis.cols());
        self.reduce(v).is_zero()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        write!(f, "{}", self)
    }
}

/// One row per line, `0`/`1` characters, no separators.
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

impl FromStr for BitMatrix {
    type Err = Error;

    /// Parses the text format written by `Display`. Blank lines and lines
    /// starting with `#` are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = Vec::with_capacity(line.len());
            for ch in line.chars() {
                match ch {
                    '0' => row.push(0),
                    '1' => row.push(1),
                    other => {
                        return Err(Error::Parse {
                            line: i + 1,
                            msg: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("row has {} columns, expected {}", row.len(), first.len()),
                    });
                }
            }
            rows.push(row);
        }
        BitMatrix::from_dense(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force_span(v: &BitVec, m: &BitMatrix) -> bool {
        let rows = m.rows();
        (0u32..(1 << rows)).any(|mask| {
            let mut acc = BitVec::zeros(m.cols());
            for r in 0..rows {
                if mask >> r & 1 == 1 {
                    acc.xor_assign(&m.row(r));
                }
            }
            acc == *v
        })
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
                .prop_map(|rows| BitMatrix::from_dense(&rows).unwrap())
        })
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(rank(&BitMatrix::zeros(3, 5)), 0);
        assert_eq!(rank(&BitMatrix::identity(4)), 4);
    }

    #[test]
    fn rank_does_not_modify_input() {
        let m = BitMatrix::from_dense(&[[1, 1, 0], [1, 1, 0], [0, 1, 1]]).unwrap();
        let before = m.clone();
        assert_eq!(rank(&m), 2);
        assert_eq!(m, before);
    }

    #[test]
    fn span_membership_examples() {
        let m = BitMatrix::from_dense(&[[1, 0, 0], [0, 1, 0]]).unwrap();
        assert!(in_row_span(&BitVec::zeros(3), &m).unwrap());
        assert!(in_row_span(&m.row(1), &m).unwrap());
        assert!(in_row_span(&BitVec::from_bools(&[true, true, false]), &m).unwrap());
        assert!(!in_row_span(&BitVec::from_bools(&[false, false, true]), &m).unwrap());
        assert!(matches!(
            in_row_span(&BitVec::zeros(4), &m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multiply_transpose_examples() {
        let i4 = BitMatrix::identity(4);
        assert_eq!(multiply_transpose(&i4, &i4).unwrap(), i4);
        let a = BitMatrix::from_dense(&[[1, 1]]).unwrap();
        assert_eq!(multiply_transpose(&a, &a).unwrap(), BitMatrix::zeros(1, 1));
        let b = BitMatrix::zeros(2, 3);
        assert!(multiply_transpose(&a, &b).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let m = BitMatrix::from_dense(&[[1, 0, 1, 1], [0, 1, 1, 0]]).unwrap();
        let text = m.to_string();
        assert_eq!(text, "1011\n0110\n");
        assert_eq!(text.parse::<BitMatrix>().unwrap(), m);
        assert!("10\n1".parse::<BitMatrix>().is_err());
        assert!("1a".parse::<BitMatrix>().is_err());
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = BitMatrix::from_dense(&[[1, 1]]).unwrap();
        let i2 = BitMatrix::identity(2);
        let k = a.kron(&i2);
        assert_eq!(
            k,
            BitMatrix::from_dense(&[[1, 0, 1, 0], [0, 1, 0, 1]]).unwrap()
        );
    }

    #[test]
    fn padding_stays_zero_after_row_ops() {
        let mut m = BitMatrix::from_dense(&[vec![1u8; 70], vec![0u8; 70]]).unwrap();
        m.add_row(0, 1);
        assert_eq!(m.row_weight(1), 70);
        assert_eq!(m.row(1), BitVec::ones(70));
    }

    proptest! {
        #[test]
        fn rank_bounded(m in arb_matrix(12, 12)) {
            prop_assert!(rank(&m) <= m.rows().min(m.cols()));
        }

        #[test]
        fn span_agrees_with_enumeration(m in arb_matrix(12, 10), bits in proptest::collection::vec(any::<bool>(), 10)) {
            let v = BitVec::from_bools(&bits[..m.cols()]);
            prop_assert_eq!(in_row_span(&v, &m).unwrap(), brute_force_span(&v, &m));
        }

        #[test]
        fn multiply_transpose_bilinear(
            a in proptest::collection::vec(proptest::collection::vec(0u8..2, 9), 4),
            a2 in proptest::collection::vec(proptest::collection::vec(0u8..2, 9), 4),
            b in proptest::collection::vec(proptest::collection::vec(0u8..2, 9), 5),
        ) {
            let a = BitMatrix::from_dense(&a).unwrap();
            let a2 = BitMatrix::from_dense(&a2).unwrap();
            let b = BitMatrix::from_dense(&b).unwrap();
            let mut sum = a.clone();
            for r in 0..sum.rows() {
                for c in 0..sum.cols() {
                    sum.set(r, c, a.get(r, c) ^ a2.get(r, c));
                }
            }
            let lhs = multiply_transpose(&sum, &b).unwrap();
            let p = multiply_transpose(&a, &b).unwrap();
            let q = multiply_transpose(&a2, &b).unwrap();
            for r in 0..lhs.rows() {
                for c in 0..lhs.cols() {
                    prop_assert_eq!(lhs.get(r, c), p.get(r, c) ^ q.get(r, c));
                }
            }
        }
    }
}
