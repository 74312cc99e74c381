//! Compressed-sparse-row storage for complex operators over a Fock basis.

use std::io::{self, Write};

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows above this count are multiplied in parallel.
const PARALLEL_ROWS: usize = 4096;

/// Square sparse matrix in CSR layout with complex entries.
///
/// `hermitian` records how the operator was built; it is a promise made by
/// the constructor, checkable with [`SparseOperator::hermiticity_defect`].
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
    hermitian: bool,
}

impl SparseOperator {
    /// Assembles a matrix from per-row `(column, value)` lists. Duplicate
    /// columns within a row are summed and exact zeros are dropped.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, Complex64)>>, hermitian: bool) -> Result<Self> {
        if rows.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rows.len(),
            });
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                if c >= dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: c + 1,
                    });
                }
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != Complex64::new(0.0, 0.0) {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            dim,
            row_ptr,
            col_idx,
            values,
            hermitian,
        })
    }

    /// Builds a Hermitian operator from a generator of its columns.
    ///
    /// `column(j)` returns the nonzero `(i, A[i][j])` pairs. Since `A` is
    /// Hermitian, row `j` is the conjugate of column `j`, so columns can be
    /// produced independently (and in parallel) without a transpose pass.
    pub fn from_hermitian_columns<F>(dim: usize, column: F) -> Result<Self>
    where
        F: Fn(usize) -> Vec<(usize, Complex64)> + Sync,
    {
        let rows: Vec<Vec<(usize, Complex64)>> = (0..dim)
            .into_par_iter()
            .map(|j| column(j).into_iter().map(|(i, v)| (i, v.conj())).collect())
            .collect();
        Self::from_rows(dim, rows, true)
    }

    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, Complex64)], hermitian: bool) -> Result<Self> {
        let mut rows = vec![Vec::new(); dim];
        for &(r, c, v) in triplets {
            if r >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r + 1,
                });
            }
            rows[r].push((c, v));
        }
        Self::from_rows(dim, rows, hermitian)
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[f64]) -> Self {
        let rows = values
            .iter()
            .enumerate()
            .map(|(i, &v)| vec![(i, Complex64::new(v, 0.0))])
            .collect();
        Self::from_rows(values.len(), rows, true).expect("diagonal rows are in range")
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Stored entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `(row, column, value)` for every stored entry, row-major.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(i, j, _)| i == j)
    }

    pub fn diagonal_values(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|A[i][j] - conj(A[j][i])|` over stored entries.
    pub fn hermiticity_defect(&self) -> f64 {
        self.triplets()
            .map(|(i, j, v)| (v - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `y = A x`. Each row is summed sequentially, so results do not depend
    /// on the thread count.
    pub fn mul_vec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim, "operand length");
        assert_eq!(y.len(), self.dim, "output length");
        let row_dot = |i: usize| -> Complex64 { self.row(i).map(|(j, v)| v * x[j]).sum() };
        if self.dim >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row_dot(i));
        } else {
            y.iter_mut().enumerate().for_each(|(i, yi)| *yi = row_dot(i));
        }
    }

    /// Interval guaranteed to contain the spectrum of a Hermitian operator.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let mut center = 0.0;
            let mut radius = 0.0;
            for (j, v) in self.row(i) {
                if i == j {
                    center = v.re;
                } else {
                    radius += v.norm();
                }
            }
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        if self.dim == 0 {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }

    /// `(A - shift·1) / scale`.
    pub fn shifted_scaled(&self, shift: f64, scale: f64) -> Self {
        let rows = (0..self.dim)
            .map(|i| {
                let mut row: Vec<(usize, Complex64)> = self.row(i).map(|(j, v)| (j, v / scale)).collect();
                row.push((i, Complex64::new(-shift / scale, 0.0)));
                row
            })
            .collect();
        Self::from_rows(self.dim, rows, self.hermitian).expect("same sparsity pattern")
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// Sparse product `self · other`.
    pub fn matmul(&self, other: &SparseOperator) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let rows = (0..self.dim)
            .into_par_iter()
            .map(|i| {
                let mut acc: Vec<(usize, Complex64)> = Vec::new();
                for (k, a) in self.row(i) {
                    acc.extend(other.row(k).map(|(j, b)| (j, a * b)));
                }
                acc
            })
            .collect();
        // The product of commuting Hermitian operators is Hermitian; callers
        // that need the flag check commutation themselves.
        Self::from_rows(self.dim, rows, false)
    }

    pub fn with_hermitian_flag(mut self, hermitian: bool) -> Self {
        self.hermitian = hermitian;
        self
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        let mut m = Mat::<Complex64>::zeros(self.dim, self.dim);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// Debug dump as whitespace-separated `row col re im` lines.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# dim {} nnz {}", self.dim, self.nnz())?;
        for (i, j, v) in self.triplets() {
            writeln!(out, "{} {} {:.17e} {:.17e}", i, j, v.re, v.im)?;
        }
        Ok(())
    }
}
