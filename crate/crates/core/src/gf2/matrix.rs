use std::fmt;

use super::budget::{matrix_bytes, MemoryGate};
use super::elim::{self, RankOptions};
use super::vector::{words_for, Gf2Vector};
use crate::error::{Error, Result};

/// Dense matrix over F₂ with rows packed 64 bits per word.
///
/// Rows are stored contiguously with a fixed word stride so elimination can
/// XOR whole rows at once. Unused bits past `cols` in each row are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    /// Zero matrix, subject to the global memory budget.
    pub fn try_zeros(rows: usize, cols: usize) -> Result<Self> {
        MemoryGate::global().check("matrix", matrix_bytes(rows, cols))?;
        let stride = words_for(cols);
        Ok(Gf2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        })
    }

    /// Zero matrix. Panics if it exceeds the memory budget; use
    /// [`Gf2Matrix::try_zeros`] for sizes coming from user input.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::try_zeros(rows, cols).expect("matrix exceeds memory budget")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks row vectors; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Gf2Vector]) -> Result<Self> {
        let mut m = Self::try_zeros(rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Parses rows of `0`/`1` characters (whitespace inside a row ignored).
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::parse(0, format!("unexpected character {other:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let cols = parsed.first().map_or(0, Vec::len);
        if parsed.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let vecs: Vec<Gf2Vector> = parsed.into_iter().map(Gf2Vector::from_bools).collect();
        Self::from_rows(cols, &vecs)
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
    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub(crate) fn data_mut(&mut self) -> &mut [u64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        (self.data[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        let w = &mut self.data[i * self.stride + j / 64];
        let mask = 1u64 << (j % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> Gf2Vector {
        Gf2Vector::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<Gf2Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        Gf2Vector::from_bools((0..self.rows).map(|i| self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Positions of the ones in row `i`.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    /// Product over F₂. Each set bit `(i, j)` of `self` adds row `j` of
    /// `other` into row `i` of the result.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Gf2Matrix::try_zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            let ones: Vec<usize> = self.row_ones(i).collect();
            let dst = out.row_words_mut(i);
            for j in ones {
                for (d, s) in dst.iter_mut().zip(other.row_words(j)) {
                    *d ^= *s;
                }
            }
        }
        Ok(out)
    }

    /// `self · vᵀ` as a column vector of length `rows`.
    pub fn mul_vec(&self, v: &Gf2Vector) -> Gf2Vector {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        Gf2Vector::from_bools((0..self.rows).map(|i| {
            self.row_words(i)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 1
        }))
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut m = Gf2Matrix::try_zeros(self.rows + other.rows, self.cols)?;
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        Ok(m)
    }

    /// Rank over F₂ on a working copy, plain elimination.
    pub fn rank(&self) -> Result<usize> {
        MemoryGate::global().check("rank working copy", matrix_bytes(self.rows, self.cols))?;
        Ok(self.clone().into_rank(&RankOptions::default()))
    }

    /// Rank, consuming the matrix (no working copy).
    pub fn into_rank(mut self, opts: &RankOptions<'_>) -> usize {
        elim::rank_in_place(&mut self, opts)
    }

    /// `cols − rank`: the dimension of `{x : M·xᵀ = 0}`.
    pub fn kernel_dimension(&self) -> Result<usize> {
        Ok(self.cols - self.rank()?)
    }

    /// Reduced row echelon form in place; returns pivot columns in row order.
    /// Zero rows are removed.
    pub fn rref(&mut self) -> Vec<usize> {
        let pivots = elim::rref_in_place(self);
        self.rows = pivots.len();
        self.data.truncate(self.rows * self.stride);
        pivots
    }

    /// Row-reduced basis of the row space.
    pub fn row_basis(&self) -> Gf2Matrix {
        let mut m = self.clone();
        m.rref();
        m
    }

    /// Basis of the right kernel as the rows of a matrix.
    pub fn kernel_basis(&self) -> Result<Gf2Matrix> {
        MemoryGate::global().check("kernel working copy", matrix_bytes(self.rows, self.cols))?;
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut basis = Gf2Matrix::try_zeros(free.len(), self.cols)?;
        for (b, &f) in free.iter().enumerate() {
            basis.set(b, f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if reduced.get(row, f) {
                    basis.set(b, p, true);
                }
            }
        }
        Ok(basis)
    }

    /// True if `v` lies in the row space.
    pub fn row_space_contains(&self, v: &Gf2Vector) -> bool {
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let mut v = v.clone();
        for (row, &p) in pivots.iter().enumerate() {
            if v.get(p) {
                v.xor_assign(&reduced.row(row));
            }
        }
        v.is_zero()
    }

    /// Equality of row spaces.
    pub fn same_row_space(&self, other: &Gf2Matrix) -> bool {
        self.cols == other.cols && self.row_basis() == other.row_basis()
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}
