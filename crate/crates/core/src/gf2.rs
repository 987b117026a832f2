//! Dense GF(2) vectors and matrices.
//!
//! Vectors are bit-packed into `u64` words, least significant bit first.
//! Matrices are stored as packed rows. All products use the row-vector
//! convention: a codeword is `message * generator`.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector from a slice of bits; any nonzero byte counts as a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        v
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        v
    }

    /// Parses a string of `0` and `1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        let bits: Option<Vec<u8>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect();
        bits.map(|b| Self::from_bits(&b))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    /// The bit at `i` as `0` or `1`.
    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        self.get(i) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Index of the first one, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of the ones, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Copies the bits into `out`, which must have the same length.
    pub fn write_bits(&self, out: &mut [u8]) {
        assert_eq!(out.len(), self.len);
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.bit(i);
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A dense binary matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// The 2x2 kernel `[[1, 0], [1, 1]]`.
    pub fn kernel() -> Self {
        BitMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).expect("static kernel")
    }

    /// `n`-fold Kronecker power of the kernel; the 1x1 identity for `n = 0`.
    pub fn kernel_power(n: u32) -> Self {
        let k = Self::kernel();
        (0..n).fold(Self::identity(1), |acc, _| acc.kron(&k))
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                what: "matrix row length",
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(BitMatrix {
            cols,
            rows: rows.iter().map(|r| BitVector::from_bits(r)).collect(),
        })
    }

    pub fn from_bit_vectors(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                what: "matrix row length",
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_fn(self.rows(), |r| self.get(r, c))
    }

    pub fn transpose(&self) -> Self {
        BitMatrix {
            cols: self.rows(),
            rows: (0..self.cols).map(|c| self.column(c)).collect(),
        }
    }

    /// Kronecker product: block `(i, j)` of the result is `a[i][j] * b`.
    pub fn kron(&self, other: &BitMatrix) -> Self {
        let cols = self.cols * other.cols;
        let mut rows = Vec::with_capacity(self.rows() * other.rows());
        for ra in &self.rows {
            for rb in &other.rows {
                let mut row = BitVector::zeros(cols);
                for ca in ra.ones() {
                    for cb in rb.ones() {
                        row.set(ca * other.cols + cb, true);
                    }
                }
                rows.push(row);
            }
        }
        BitMatrix { cols, rows }
    }

    /// Row vector times matrix: `v * self`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                what: "vector length for vector-matrix product",
                expected: self.rows(),
                found: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for r in v.ones() {
            out.xor_assign(&self.rows[r]);
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows() {
            return Err(Error::DimensionMismatch {
                what: "inner dimension of matrix product",
                expected: self.cols,
                found: other.rows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| other.vec_mul(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix {
            cols: other.cols,
            rows,
        })
    }

    /// Rank over GF(2) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..work.len()).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, pivot);
            let pivot_row = work[rank].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            rank += 1;
            if rank == work.len() {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// `v * m` over GF(2).
pub fn mat_vec_gf2(v: &BitVector, m: &BitMatrix) -> Result<BitVector> {
    m.vec_mul(v)
}

pub fn kron(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    a.kron(b)
}

pub fn rank_gf2(m: &BitMatrix) -> usize {
    m.rank()
}
