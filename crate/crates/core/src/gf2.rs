//! Dense linear algebra over GF(2).
//!
//! Matrices are stored row-major with each row packed into `u64` words, so a
//! row operation is a word-wise XOR. Elimination pivots on the first nonzero
//! entry of each column scanning rows top-down.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    /// Builds a vector with ones at the given positions. Repeated indices cancel.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    #[must_use]
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    #[must_use]
    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// # Panics
    /// Panics if `i >= len`.
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Positions of the set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    /// `self += other` over GF(2).
    ///
    /// # Panics
    /// Panics on a length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[must_use]
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    #[must_use]
    pub fn as_words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[{}](", self.len)?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

/// A dense row-major binary matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from nested 0/1 rows.
    ///
    /// # Panics
    /// Panics if the rows have unequal lengths.
    #[must_use]
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                if v & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[must_use]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[must_use]
    pub fn row(&self, r: usize) -> BitVector {
        BitVector { len: self.cols, words: self.row_words(r).to_vec() }
    }

    #[must_use]
    pub fn col(&self, c: usize) -> BitVector {
        BitVector::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn clear_row(&mut self, r: usize) {
        assert!(r < self.rows, "row {r} out of range");
        self.data[r * self.stride..(r + 1) * self.stride].fill(0);
    }

    pub fn clear_col(&mut self, c: usize) {
        assert!(c < self.cols, "column {c} out of range");
        let mask = !(1u64 << (c % WORD));
        let w = c / WORD;
        for r in 0..self.rows {
            self.data[r * self.stride + w] &= mask;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.stride {
                self.data.swap(a * self.stride + w, b * self.stride + w);
            }
        }
    }

    /// Row `dst` += row `src`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert!(src < self.rows && dst < self.rows && src != dst);
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(src.max(dst) * s);
        let (src_row, dst_row) = if src < dst {
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, v) in dst_row.iter_mut().zip(src_row) {
            *d ^= v;
        }
    }

    #[must_use]
    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    #[must_use]
    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let dst = r * out.stride;
            for k in self.row(r).iter_ones() {
                let src = other.row_words(k);
                for (d, v) in out.data[dst..dst + out.stride].iter_mut().zip(src) {
                    *d ^= v;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector, Gf2Error> {
        if x.len != self.cols {
            return Err(Gf2Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows, self.cols, x.len
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity: u32 = self.row_words(r).iter().zip(&x.words).map(|(a, b)| (a & b).count_ones()).sum();
            if parity % 2 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Outcome of a single `Mx = b` query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solvability {
    pub rank: usize,
    pub aug_rank: usize,
    /// Present when requested and the system is consistent.
    pub solution: Option<BitVector>,
}

impl Solvability {
    #[must_use]
    pub fn is_solvable(&self) -> bool {
        self.rank == self.aug_rank
    }
}

/// Row-reduces `[M | B]` over the first `cols` columns and returns the pivot columns.
/// With `full` set, entries above pivots are cleared too (reduced echelon form).
fn eliminate(work: &mut BitMatrix, cols: usize, full: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == work.rows {
            break;
        }
        let Some(p) = (next..work.rows).find(|&r| work.get(r, c)) else { continue };
        work.swap_rows(p, next);
        let start = if full { 0 } else { next + 1 };
        for r in start..work.rows {
            if r != next && work.get(r, c) {
                work.add_row(next, r);
            }
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

/// GF(2) rank. The input is left untouched.
#[must_use]
pub fn rank(m: &BitMatrix) -> usize {
    let mut work = m.clone();
    eliminate(&mut work, m.cols, false).len()
}

/// Whether `Mx = b` has a solution.
pub fn solvable(m: &BitMatrix, b: &BitVector) -> Result<bool, Gf2Error> {
    Ok(analyze(m, std::slice::from_ref(b), false)?[0].is_solvable())
}

/// Some `x` with `Mx = b`, or `None`. Free variables are set to zero.
pub fn solve(m: &BitMatrix, b: &BitVector) -> Result<Option<BitVector>, Gf2Error> {
    Ok(analyze(m, std::slice::from_ref(b), true)?.pop().and_then(|s| s.solution))
}

/// Answers several right-hand sides with one elimination over `[M | b_1 ... b_k]`.
pub fn analyze(m: &BitMatrix, targets: &[BitVector], want_solution: bool) -> Result<Vec<Solvability>, Gf2Error> {
    if let Some(bad) = targets.iter().find(|b| b.len != m.rows) {
        return Err(Gf2Error::DimensionMismatch(format!(
            "right-hand side of length {} for a matrix with {} rows",
            bad.len, m.rows
        )));
    }
    let k = targets.len();
    let mut work = BitMatrix::zeros(m.rows, m.cols + k);
    for r in 0..m.rows {
        let dst = r * work.stride;
        work.data[dst..dst + m.stride].copy_from_slice(m.row_words(r));
        for (t, b) in targets.iter().enumerate() {
            if b.get(r) {
                work.set(r, m.cols + t, true);
            }
        }
    }
    let pivots = eliminate(&mut work, m.cols, want_solution);
    let rank = pivots.len();
    Ok((0..k)
        .map(|t| {
            let col = m.cols + t;
            let consistent = (rank..m.rows).all(|r| !work.get(r, col));
            let solution = (want_solution && consistent).then(|| {
                BitVector::from_indices(
                    m.cols,
                    pivots.iter().enumerate().filter(|&(r, _)| work.get(r, col)).map(|(_, &p)| p),
                )
            });
            Solvability { rank, aug_rank: if consistent { rank } else { rank + 1 }, solution }
        })
        .collect())
}
