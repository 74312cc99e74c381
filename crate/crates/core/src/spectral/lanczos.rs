//! Hermitian Lanczos with full reorthogonalization.
//!
//! Reorthogonalizing every new vector against the whole basis costs
//! `O(k² n)` but keeps the Ritz values free of ghosts, which matters here
//! because Ritz weights are read off directly as spectral weights.

use faer::{Mat, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{inner, norm, StateVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanczosOptions {
    /// Target residual `‖Aψ − θψ‖` relative to the spectral radius estimate.
    pub tol: f64,
    /// Maximum Krylov dimension.
    pub max_iter: usize,
    /// Seed for the pseudo-random start vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 600,
            seed: 0x6c61_6e63,
        }
    }
}

/// Orthonormal Krylov basis with the tridiagonal recurrence coefficients.
pub(crate) struct Krylov {
    pub basis: Vec<StateVector>,
    pub alpha: Vec<f64>,
    /// `beta[k]` couples `basis[k]` and `basis[k + 1]`; the last entry is the
    /// residual coupling out of the subspace.
    pub beta: Vec<f64>,
    pub breakdown: bool,
}

/// Ritz decomposition of the tridiagonal matrix.
pub(crate) struct Ritz {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `T` for `values[i]`.
    pub vectors: Mat<f64>,
}

pub(crate) fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> Result<Ritz> {
    let k = alpha.len();
    let t = Mat::<f64>::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j || j + 1 == i {
            beta[i.min(j)]
        } else {
            0.0
        }
    });
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("tridiagonal eigensolver failed: {e:?}")))?;
    let s = evd.S().column_vector();
    Ok(Ritz {
        values: (0..k).map(|i| s[i]).collect(),
        vectors: evd.U().to_owned(),
    })
}

pub(crate) fn random_start(dim: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: StateVector = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Runs the recurrence from a normalized `start`, calling `converged` after
/// each step with `(alpha, beta)`; stops on breakdown, convergence, or
/// `max_steps`.
pub(crate) fn run<A, C>(apply: A, start: StateVector, max_steps: usize, mut converged: C) -> Krylov
where
    A: Fn(&[Complex64]) -> StateVector,
    C: FnMut(&[f64], &[f64]) -> bool,
{
    let mut basis = vec![start];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut scale: f64 = 0.0;
    let dim = basis[0].len();
    let mut breakdown = false;
    for k in 0..max_steps.min(dim) {
        let mut w = apply(&basis[k]);
        let a = inner(&basis[k], &w).re;
        alpha.push(a);
        scale = scale.max(a.abs()).max(norm(&w));
        // Two passes of classical Gram-Schmidt against the full basis.
        for _ in 0..2 {
            for v in &basis {
                let proj = inner(v, &w);
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= proj * vi);
            }
        }
        let b = norm(&w);
        beta.push(b);
        if b <= 1e-13 * scale.max(f64::MIN_POSITIVE) || k + 1 == dim {
            breakdown = true;
            break;
        }
        if converged(&alpha, &beta) {
            break;
        }
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
    }
    basis.truncate(alpha.len());
    Krylov {
        basis,
        alpha,
        beta,
        breakdown,
    }
}

impl Krylov {
    /// `Σ_i s_i v_i` for a Ritz coefficient column.
    pub fn ritz_vector(&self, ritz: &Ritz, column: usize) -> StateVector {
        let dim = self.basis[0].len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (i, v) in self.basis.iter().enumerate() {
            let s = ritz.vectors[(i, column)];
            out.iter_mut().zip(v).for_each(|(o, x)| *o += s * x);
        }
        out
    }

    /// Residual norm of Ritz pair `column`.
    pub fn residual(&self, ritz: &Ritz, column: usize) -> f64 {
        if self.breakdown {
            return 0.0;
        }
        let last = self.alpha.len() - 1;
        self.beta[last] * ritz.vectors[(last, column)].abs()
    }
}

/// Lowest eigenpair of the Hermitian operator applied by `apply`.
pub(crate) fn lowest<A>(apply: A, dim: usize, opts: &LanczosOptions) -> Result<(f64, StateVector, f64)>
where
    A: Fn(&[Complex64]) -> StateVector,
{
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    let start = random_start(dim, opts.seed);
    let mut best = f64::INFINITY;
    let tol = opts.tol;
    let krylov = run(&apply, start, opts.max_iter, |alpha, beta| {
        let k = alpha.len();
        if k > 30 && k % 5 != 0 {
            return false;
        }
        let Ok(ritz) = tridiagonal_eigen(alpha, &beta[..k - 1]) else {
            return false;
        };
        let radius = ritz.values[0]
            .abs()
            .max(ritz.values[k - 1].abs())
            .max(f64::MIN_POSITIVE);
        let res = beta[k - 1] * ritz.vectors[(k - 1, 0)].abs();
        best = best.min(res / radius);
        res <= tol * radius
    });
    let k = krylov.alpha.len();
    let ritz = tridiagonal_eigen(&krylov.alpha, &krylov.beta[..k - 1])?;
    let radius = ritz.values[0]
        .abs()
        .max(ritz.values[k - 1].abs())
        .max(f64::MIN_POSITIVE);
    let residual = krylov.residual(&ritz, 0);
    if residual > tol * radius {
        return Err(Error::Convergence {
            iterations: k,
            residual: best.min(residual / radius),
        });
    }
    let mut psi = krylov.ritz_vector(&ritz, 0);
    let n = norm(&psi);
    psi.iter_mut().for_each(|x| *x /= n);
    Ok((ritz.values[0], psi, residual))
}
