//! State-vector helpers and dense Hermitian diagonalization.

use faer::{Col, Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

/// Amplitudes over a Fock basis.
pub type StateVector = Vec<Complex64>;

/// `<a|b>`, conjugate-linear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalizes in place and returns the original norm.
pub fn normalize(a: &mut [Complex64]) -> Result<f64> {
    let n = norm(a);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Numerical(format!("cannot normalize a vector of norm {n}")));
    }
    a.iter_mut().for_each(|x| *x /= n);
    Ok(n)
}

/// `<a|A|a>` for Hermitian `A`, real part.
pub fn expectation(op: &SparseOperator, a: &[Complex64]) -> f64 {
    inner(a, &op.mul_vec(a)).re
}

/// `|<a|b>|^2` for normalized inputs.
pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    inner(a, b).norm_sqr()
}

/// `min_φ ‖a − e^{iφ} b‖`.
pub fn distance_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ov = inner(b, a);
    let phase = if ov.norm() > 0.0 {
        ov / ov.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn difference_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Full eigendecomposition `A = V diag(values) V†` of a Hermitian matrix,
/// eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    values: Vec<f64>,
    vectors: Mat<Complex64>,
}

impl HermitianEigen {
    pub fn of_operator(op: &SparseOperator) -> Result<Self> {
        Self::of_dense(&op.to_dense())
    }

    pub fn of_dense(m: &Mat<Complex64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 {
            return Ok(Self {
                values: Vec::new(),
                vectors: Mat::zeros(0, 0),
            });
        }
        let evd = m
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numerical(format!("dense eigensolver failed: {e:?}")))?;
        let s = evd.S().column_vector();
        let values = (0..n).map(|i| s[i].re).collect();
        Ok(Self {
            values,
            vectors: evd.U().to_owned(),
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &Mat<Complex64> {
        &self.vectors
    }

    /// Eigenvector `k` as an owned state.
    pub fn vector(&self, k: usize) -> StateVector {
        (0..self.dim()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// Components `V† v` in the eigenbasis.
    pub fn project(&self, v: &[Complex64]) -> Vec<Complex64> {
        let col = Col::<Complex64>::from_fn(v.len(), |i| v[i]);
        let out = self.vectors.adjoint() * &col;
        (0..out.nrows()).map(|i| out[i]).collect()
    }

    /// `V c` for eigenbasis components `c`.
    pub fn synthesize(&self, c: &[Complex64]) -> StateVector {
        let col = Col::<Complex64>::from_fn(c.len(), |i| c[i]);
        let out = &self.vectors * &col;
        (0..out.nrows()).map(|i| out[i]).collect()
    }

    /// `f(A) v`.
    pub fn apply<F: Fn(f64) -> Complex64>(&self, f: F, v: &[Complex64]) -> StateVector {
        let mut c = self.project(v);
        c.iter_mut().zip(&self.values).for_each(|(ci, &l)| *ci *= f(l));
        self.synthesize(&c)
    }

    /// Dense `f(A)` as a matrix.
    pub fn function_matrix<F: Fn(f64) -> Complex64>(&self, f: F) -> Mat<Complex64> {
        let n = self.dim();
        let scaled = Mat::<Complex64>::from_fn(n, n, |i, k| self.vectors[(i, k)] * f(self.values[k]));
        &scaled * self.vectors.adjoint()
    }
}
