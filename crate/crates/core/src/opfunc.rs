//! Exact action of oscillatory operator functions: `sin(sA)`, `cos(sA)` and
//! `exp(-isA)` on a state.
//!
//! Three back ends are used, chosen from the operator's structure:
//! diagonal operators are handled elementwise, small operators by dense
//! eigendecomposition, and everything else by a Chebyshev expansion whose
//! truncation order comes from the Bessel bound `|J_k(a)| ≤ (a/2)^k / k!`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{HermitianEigen, StateVector};
use crate::sparse::SparseOperator;

/// Default truncation tolerance of the Chebyshev back end.
pub const CHEBYSHEV_TOL: f64 = 1e-14;

const MAX_CHEBYSHEV_ORDER: usize = 1 << 20;

/// Scalar function `g(A)` with a known oscillation frequency `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Oscillator {
    /// `sin(sA)`
    Sin(f64),
    /// `cos(sA)`
    Cos(f64),
    /// `exp(-isA)`
    Exp(f64),
}

impl Oscillator {
    pub fn eval(self, x: f64) -> Complex64 {
        match self {
            Oscillator::Sin(s) => Complex64::new((s * x).sin(), 0.0),
            Oscillator::Cos(s) => Complex64::new((s * x).cos(), 0.0),
            Oscillator::Exp(s) => Complex64::from_polar(1.0, -s * x),
        }
    }

    fn frequency(self) -> f64 {
        match self {
            Oscillator::Sin(s) | Oscillator::Cos(s) | Oscillator::Exp(s) => s.abs(),
        }
    }
}

/// Smallest order `K` with `Σ_{k>K} 2 (a/2)^k / k! ≤ tol`.
///
/// The Chebyshev coefficients of `sin`, `cos` and `exp(-i·)` on `[-1, 1]`
/// scaled by `a` are `2 J_k(a)` up to phases, so this bounds the truncation
/// remainder for a unit-norm input.
pub fn chebyshev_order(a: f64, tol: f64) -> Result<usize> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::Numerical(format!("invalid Chebyshev argument {a}")));
    }
    if a == 0.0 {
        return Ok(1);
    }
    let half = a / 2.0;
    let ln_half = half.ln();
    let ln_tol = (tol / 2.0).ln();
    // ln((a/2)^k / k!) tracked incrementally.
    let mut ln_term = 0.0;
    for k in 0..MAX_CHEBYSHEV_ORDER {
        let next = k + 1;
        ln_term += ln_half - (next as f64).ln();
        let ratio = half / (next as f64 + 1.0);
        if ratio < 1.0 {
            let ln_tail = ln_term - (1.0 - ratio).ln();
            if ln_tail <= ln_tol {
                return Ok(next.max(1));
            }
        }
    }
    Err(Error::Numerical(format!(
        "Chebyshev series for argument {a} needs more than {MAX_CHEBYSHEV_ORDER} terms"
    )))
}

/// Chebyshev coefficients of `g` on `[-1, 1]` via a discrete cosine sum at
/// `nodes` Chebyshev points. `c[0]` is already halved.
fn chebyshev_coefficients<G: Fn(f64) -> Complex64>(g: G, order: usize, nodes: usize) -> Vec<Complex64> {
    let thetas: Vec<f64> = (0..nodes)
        .map(|j| std::f64::consts::PI * (j as f64 + 0.5) / nodes as f64)
        .collect();
    let samples: Vec<Complex64> = thetas.iter().map(|t| g(t.cos())).collect();
    let scale = 2.0 / nodes as f64;
    (0..=order)
        .map(|k| {
            let s: Complex64 = samples
                .iter()
                .zip(&thetas)
                .map(|(gj, t)| gj * (k as f64 * t).cos())
                .sum();
            if k == 0 {
                s * scale * 0.5
            } else {
                s * scale
            }
        })
        .collect()
}

/// `g(A) v` by Chebyshev expansion on the spectral interval `[lo, hi]`.
pub fn chebyshev_apply(
    op: &SparseOperator,
    interval: (f64, f64),
    f: Oscillator,
    v: &[Complex64],
    tol: f64,
) -> Result<StateVector> {
    let (lo, hi) = interval;
    let center = 0.5 * (lo + hi);
    let radius = 0.5 * (hi - lo);
    if radius <= 0.0 {
        let g = f.eval(center);
        return Ok(v.iter().map(|x| x * g).collect());
    }
    let order = chebyshev_order(f.frequency() * radius, tol)?;
    let coeffs = chebyshev_coefficients(|x| f.eval(center + radius * x), order, 2 * order + 32);

    // X = (A - center) / radius
    let apply_x = |w: &[Complex64]| -> StateVector {
        let mut aw = op.mul_vec(w);
        aw.iter_mut().zip(w).for_each(|(a, x)| *a = (*a - center * x) / radius);
        aw
    };

    let mut prev: StateVector = v.to_vec();
    let mut curr = apply_x(v);
    let mut out: StateVector = v.iter().map(|x| x * coeffs[0]).collect();
    out.iter_mut().zip(&curr).for_each(|(o, c)| *o += coeffs[1] * c);
    for ck in coeffs.iter().skip(2) {
        let mut next = apply_x(&curr);
        next.iter_mut().zip(&prev).for_each(|(n, p)| *n = 2.0 * *n - p);
        out.iter_mut().zip(&next).for_each(|(o, n)| *o += ck * n);
        prev = std::mem::replace(&mut curr, next);
    }
    Ok(out)
}

enum Backend<'a> {
    Diagonal(Vec<f64>),
    Dense(HermitianEigen),
    Chebyshev {
        op: &'a SparseOperator,
        interval: (f64, f64),
    },
}

/// Prepared evaluator for functions of one Hermitian operator.
pub struct OperatorFunctions<'a> {
    backend: Backend<'a>,
    dim: usize,
}

impl<'a> OperatorFunctions<'a> {
    /// Picks the back end: elementwise for diagonal operators, dense
    /// eigendecomposition up to `dense_cap` rows, Chebyshev otherwise.
    pub fn new(op: &'a SparseOperator, dense_cap: usize) -> Result<Self> {
        let dim = op.dim();
        let backend = if op.is_diagonal() {
            Backend::Diagonal(op.diagonal_values().iter().map(|v| v.re).collect())
        } else if dim <= dense_cap {
            Backend::Dense(HermitianEigen::of_operator(op)?)
        } else {
            Backend::Chebyshev {
                op,
                interval: op.gershgorin_bounds(),
            }
        };
        Ok(Self { backend, dim })
    }

    /// Forces the Chebyshev back end regardless of size.
    pub fn chebyshev(op: &'a SparseOperator) -> Self {
        Self {
            backend: Backend::Chebyshev {
                op,
                interval: op.gershgorin_bounds(),
            },
            dim: op.dim(),
        }
    }

    pub fn from_eigen(eigen: HermitianEigen) -> Self {
        let dim = eigen.dim();
        Self {
            backend: Backend::Dense(eigen),
            dim,
        }
    }

    pub fn apply(&self, f: Oscillator, v: &[Complex64]) -> Result<StateVector> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        match &self.backend {
            Backend::Diagonal(d) => Ok(v.iter().zip(d).map(|(x, &l)| x * f.eval(l)).collect()),
            Backend::Dense(e) => Ok(e.apply(|l| f.eval(l), v)),
            Backend::Chebyshev { op, interval } => {
                let out = chebyshev_apply(op, *interval, f, v, CHEBYSHEV_TOL)?;
                if out.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                    return Err(Error::Numerical("Chebyshev propagation diverged".into()));
                }
                Ok(out)
            }
        }
    }

    /// Largest `|eigenvalue|` when it is known without extra work.
    pub fn cheap_norm(&self) -> Option<f64> {
        match &self.backend {
            Backend::Diagonal(d) => Some(d.iter().fold(0.0, |m, x| m.max(x.abs()))),
            Backend::Dense(e) => Some(e.values().iter().fold(0.0, |m, x| m.max(x.abs()))),
            Backend::Chebyshev { .. } => None,
        }
    }
}

#[cfg(test)]
fn zeros(n: usize) -> StateVector {
    vec![Complex64::new(0.0, 0.0); n]
}
