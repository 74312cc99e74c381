//! Ground state, spectral width, the shifted/scaled Hamiltonian
//! `H̄ = (H − E0) / ΔH`, and spectral weights of a state in the eigenbasis
//! of `H̄`.

mod lanczos;

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use lanczos::LanczosOptions;

use crate::error::{Error, Result};
use crate::linalg::{norm, HermitianEigen, StateVector};
use crate::sparse::SparseOperator;

/// Slack allowed when checking `λ ∈ [0, 1]`.
pub const LAMBDA_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralOptions {
    pub lanczos: LanczosOptions,
    /// `ΔH` is multiplied by this factor so the top eigenvalue maps to
    /// `λ ≤ 1` even with Ritz-value rounding.
    pub margin: f64,
    /// Largest dimension diagonalized densely.
    pub dense_cap: usize,
    /// Use a Krylov expansion of the state above `dense_cap`.
    pub krylov_fallback: bool,
    /// Eigenvalues closer than this are merged into one spectral line.
    pub merge_tol: f64,
    /// Lines lighter than this are dropped.
    pub weight_floor: f64,
    /// Keep the normalized eigenspace components of the state.
    pub keep_vectors: bool,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            lanczos: LanczosOptions::default(),
            margin: 1.0 + 1e-9,
            dense_cap: 5000,
            krylov_fallback: true,
            merge_tol: 1e-12,
            weight_floor: 1e-20,
            keep_vectors: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub vector: StateVector,
    /// `‖Hψ − Eψ‖` of the returned pair.
    pub residual: f64,
}

/// Lanczos ground state from a seeded start vector.
pub fn ground_state(h: &SparseOperator, opts: &LanczosOptions) -> Result<GroundState> {
    let (energy, vector, _) = lanczos::lowest(|x| h.mul_vec(x), h.dim(), opts)?;
    let hv = h.mul_vec(&vector);
    let residual = hv
        .iter()
        .zip(&vector)
        .map(|(a, b)| (a - energy * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(GroundState {
        energy,
        vector,
        residual,
    })
}

/// Extremes of the spectrum and the width used to scale it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralBounds {
    pub e0: f64,
    pub e_max: f64,
    /// `(e_max − e0) · margin`.
    pub delta_h: f64,
}

impl SpectralBounds {
    pub fn new(e0: f64, e_max: f64, margin: f64) -> Result<Self> {
        if !(e_max >= e0) || !(margin >= 1.0) {
            return Err(Error::InconsistentInputs(format!(
                "invalid bounds e0 = {e0}, e_max = {e_max}, margin = {margin}"
            )));
        }
        Ok(Self {
            e0,
            e_max,
            delta_h: (e_max - e0) * margin,
        })
    }
}

/// Lowest and highest eigenvalues from two Lanczos runs (on `H` and `−H`).
pub fn spectral_bounds(h: &SparseOperator, opts: &SpectralOptions) -> Result<SpectralBounds> {
    let (e0, _, _) = lanczos::lowest(|x| h.mul_vec(x), h.dim(), &opts.lanczos)?;
    let (neg_max, _, _) = lanczos::lowest(
        |x| {
            let mut y = h.mul_vec(x);
            y.iter_mut().for_each(|v| *v = -*v);
            y
        },
        h.dim(),
        &opts.lanczos,
    )?;
    // Ritz values can cross by rounding on a one-point spectrum.
    let e_max = (-neg_max).max(e0);
    SpectralBounds::new(e0, e_max, opts.margin)
}

/// `H̄ = (H − e0) / ΔH`; the zero operator on a one-dimensional space.
pub fn scale_hamiltonian(h: &SparseOperator, bounds: &SpectralBounds) -> Result<SparseOperator> {
    if h.dim() == 1 {
        return SparseOperator::from_rows(1, vec![Vec::new()], true);
    }
    if !(bounds.delta_h > 0.0) {
        return Err(Error::DegenerateSpectrum { dimension: h.dim() });
    }
    Ok(h.shifted_scaled(bounds.e0, bounds.delta_h))
}

/// Spectral lines `(λν, wν)` of a state, with optional eigenspace components.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    lambdas: Vec<f64>,
    weights: Vec<f64>,
    components: Option<Vec<StateVector>>,
}

impl SpectralData {
    /// Validates `λ ∈ [0, 1]` (clamping within [`LAMBDA_SLACK`]) and `w ≥ 0`.
    pub fn new(lambdas: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::with_components(lambdas, weights, None)
    }

    pub fn with_components(
        mut lambdas: Vec<f64>,
        weights: Vec<f64>,
        components: Option<Vec<StateVector>>,
    ) -> Result<Self> {
        if lambdas.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: lambdas.len(),
                found: weights.len(),
            });
        }
        if let Some(c) = &components {
            if c.len() != lambdas.len() {
                return Err(Error::DimensionMismatch {
                    expected: lambdas.len(),
                    found: c.len(),
                });
            }
        }
        for l in lambdas.iter_mut() {
            if !(*l >= -LAMBDA_SLACK && *l <= 1.0 + LAMBDA_SLACK) {
                return Err(Error::SpectrumOutOfRange { lambda: *l });
            }
            *l = l.clamp(0.0, 1.0);
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(Error::InconsistentInputs(format!("negative spectral weight {w}")));
        }
        Ok(Self {
            lambdas,
            weights,
            components,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Normalized projections `P_ν φ / ‖P_ν φ‖`, when retained.
    pub fn components(&self) -> Option<&[StateVector]> {
        self.components.as_deref()
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ wν λν`.
    pub fn mean_lambda(&self) -> f64 {
        self.lambdas.iter().zip(&self.weights).map(|(l, w)| l * w).sum()
    }

    /// Index of the heaviest line.
    pub fn dominant(&self) -> Option<usize> {
        (0..self.len()).max_by(|&a, &b| self.weights[a].total_cmp(&self.weights[b]))
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "lambda,weight")?;
        for (l, w) in self.lambdas.iter().zip(&self.weights) {
            writeln!(out, "{l:.17e},{w:.17e}")?;
        }
        Ok(())
    }
}

/// Groups eigenpairs `(λ_i, ⟨ψ_i|φ⟩, ψ_i)` sorted by `λ` into spectral lines.
fn merge_lines<V>(pairs: &[(f64, Complex64)], vector: V, dim: usize, opts: &SpectralOptions) -> Result<SpectralData>
where
    V: Fn(usize) -> StateVector,
{
    let mut lambdas = Vec::new();
    let mut weights = Vec::new();
    let mut components = Vec::new();
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= opts.merge_tol {
            end += 1;
        }
        let group = &pairs[start..end];
        let weight: f64 = group.iter().map(|(_, c)| c.norm_sqr()).sum();
        if weight >= opts.weight_floor {
            let lambda = group.iter().map(|(l, _)| l).sum::<f64>() / group.len() as f64;
            lambdas.push(lambda);
            weights.push(weight);
            if opts.keep_vectors {
                let mut comp = vec![Complex64::new(0.0, 0.0); dim];
                for (k, (_, c)) in group.iter().enumerate() {
                    let v = vector(start + k);
                    comp.iter_mut().zip(&v).for_each(|(o, x)| *o += c * x);
                }
                let n = norm(&comp);
                comp.iter_mut().for_each(|x| *x /= n);
                components.push(comp);
            }
        }
        start = end;
    }
    SpectralData::with_components(lambdas, weights, opts.keep_vectors.then_some(components))
}

fn check_normalized(phi: &[Complex64]) -> Result<()> {
    let n = norm(phi);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("state must be normalized, has norm {n}")));
    }
    Ok(())
}

/// Spectral lines of `phi` from a precomputed eigendecomposition of `H̄`.
pub fn spectral_weights_from_eigen(
    eigen: &HermitianEigen,
    phi: &[Complex64],
    opts: &SpectralOptions,
) -> Result<SpectralData> {
    check_normalized(phi)?;
    let comps = eigen.project(phi);
    let pairs: Vec<(f64, Complex64)> = eigen.values().iter().copied().zip(comps).collect();
    merge_lines(&pairs, |k| eigen.vector(k), phi.len(), opts)
}

/// Spectral lines `(λν, |⟨ψν|φ⟩|²)` of a normalized state under `H̄`.
///
/// Dense diagonalization up to `opts.dense_cap`; above it, a Lanczos run
/// seeded with `phi` itself until the Krylov space closes, whose Ritz
/// weights are the exact spectral measure of `phi`.
pub fn spectral_weights(h_scaled: &SparseOperator, phi: &[Complex64], opts: &SpectralOptions) -> Result<SpectralData> {
    if phi.len() != h_scaled.dim() {
        return Err(Error::DimensionMismatch {
            expected: h_scaled.dim(),
            found: phi.len(),
        });
    }
    check_normalized(phi)?;
    if h_scaled.dim() <= opts.dense_cap {
        let eigen = HermitianEigen::of_operator(h_scaled)?;
        return spectral_weights_from_eigen(&eigen, phi, opts);
    }
    if !opts.krylov_fallback {
        return Err(Error::Capacity(format!(
            "dimension {} exceeds the dense cap {} and the Krylov fallback is disabled",
            h_scaled.dim(),
            opts.dense_cap
        )));
    }
    krylov_weights(h_scaled, phi, opts)
}

fn krylov_weights(h_scaled: &SparseOperator, phi: &[Complex64], opts: &SpectralOptions) -> Result<SpectralData> {
    let start: StateVector = phi.to_vec();
    let max_steps = opts.lanczos.max_iter.max(h_scaled.dim().min(4000));
    let krylov = lanczos::run(|x| h_scaled.mul_vec(x), start, max_steps, |_, _| false);
    let k = krylov.alpha.len();
    let ritz = lanczos::tridiagonal_eigen(&krylov.alpha, &krylov.beta[..k - 1])?;
    let mut pairs = Vec::with_capacity(k);
    for i in 0..k {
        let overlap = ritz.vectors[(0, i)];
        if overlap * overlap >= opts.weight_floor {
            let res = krylov.residual(&ritz, i);
            if res > opts.lanczos.tol.max(1e-10) {
                return Err(Error::Convergence {
                    iterations: k,
                    residual: res,
                });
            }
        }
        // ⟨Vs|φ⟩ = s[0] because φ is the first Krylov vector.
        pairs.push((ritz.values[i], Complex64::new(overlap, 0.0)));
    }
    merge_lines(&pairs, |i| krylov.ritz_vector(&ritz, i), phi.len(), opts)
}
