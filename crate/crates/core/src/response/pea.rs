use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::fejer::fejer_cycles;
use crate::error::{Error, Result};
use crate::linalg::{HermitianEigen, StateVector};
use crate::sparse::SparseOperator;
use crate::spectral::SpectralData;

/// Default upper limit on the number of ancilla qubits.
pub const MAX_W_QUBITS: u32 = 24;
/// Largest joint register, `2^W · dim`, the statevector simulation builds.
pub const MAX_REGISTER_SIZE: usize = 1 << 22;

/// Outcome distribution of phase estimation on a `W`-qubit register.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeaDistribution {
    w_qubits: u32,
    probabilities: Vec<f64>,
    /// Number of spectral lines the distribution was built from.
    lines: usize,
}

impl PeaDistribution {
    /// Wraps a probability vector whose length must be `2^W`.
    pub fn from_probabilities(w_qubits: u32, mut probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != 1usize << w_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << w_qubits,
                found: probabilities.len(),
            });
        }
        for p in probabilities.iter_mut() {
            if !p.is_finite() || *p < -1e-12 {
                return Err(Error::Numerical(format!("invalid probability {p}")));
            }
            *p = p.max(0.0);
        }
        Ok(Self {
            w_qubits,
            probabilities,
            lines: 0,
        })
    }

    pub fn w_qubits(&self) -> u32 {
        self.w_qubits
    }

    /// `2^W`.
    pub fn bins(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `Σ_y P(y) y / 2^W`.
    pub fn mean_scaled_energy(&self) -> f64 {
        let n = self.bins() as f64;
        self.probabilities
            .iter()
            .enumerate()
            .map(|(y, p)| p * y as f64 / n)
            .sum()
    }

    /// Outcome with the largest probability; the lowest such `y` on ties.
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (y, &p) in self.probabilities.iter().enumerate() {
            if p > self.probabilities[best] {
                best = y;
            }
        }
        best
    }

    /// Outcomes ordered by decreasing probability, ties broken by `y`.
    pub fn top(&self, k: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.bins()).collect();
        order.sort_by(|&a, &b| self.probabilities[b].total_cmp(&self.probabilities[a]).then(a.cmp(&b)));
        order.truncate(k);
        order
    }

    /// Sums groups of `2^(W − w)` neighbouring bins, centred on the coarse
    /// grid points: coarse bin `y` collects fine bins
    /// `[s y − s/2, s y + s/2)` modulo `2^W`.
    pub fn coarse_grain(&self, w: u32) -> Result<PeaDistribution> {
        if w > self.w_qubits || w == 0 {
            return Err(Error::Domain(format!(
                "cannot coarse-grain {} qubits onto {w}",
                self.w_qubits
            )));
        }
        let stride = 1usize << (self.w_qubits - w);
        let n = self.bins();
        let mut out = vec![0.0; 1 << w];
        for (y, slot) in out.iter_mut().enumerate() {
            let start = (y * stride + n - stride / 2) % n;
            *slot = (0..stride).map(|k| self.probabilities[(start + k) % n]).sum();
        }
        PeaDistribution::from_probabilities(w, out)
    }

    /// `½ Σ_y |P(y) − Q(y)|`.
    pub fn total_variation(&self, other: &PeaDistribution) -> Result<f64> {
        if self.bins() != other.bins() {
            return Err(Error::DimensionMismatch {
                expected: self.bins(),
                found: other.bins(),
            });
        }
        Ok(0.5
            * self
                .probabilities
                .iter()
                .zip(&other.probabilities)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }

    /// `y,p` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "y,p")?;
        for (y, p) in self.probabilities.iter().enumerate() {
            writeln!(out, "{y},{p:.17e}")?;
        }
        Ok(())
    }
}

fn check_w(w_qubits: u32, cap: u32) -> Result<()> {
    if w_qubits == 0 {
        return Err(Error::Domain("at least one ancilla qubit is required".into()));
    }
    if w_qubits > cap {
        return Err(Error::Capacity(format!(
            "W = {w_qubits} exceeds the register cap {cap}"
        )));
    }
    Ok(())
}

/// `P(y) = (1/2^W) Σν wν F_{2^W}(2π(λν − y/2^W))`.
pub fn pea_distribution(spectral: &SpectralData, w_qubits: u32) -> Result<PeaDistribution> {
    pea_distribution_with_cap(spectral, w_qubits, MAX_W_QUBITS)
}

pub fn pea_distribution_with_cap(spectral: &SpectralData, w_qubits: u32, cap: u32) -> Result<PeaDistribution> {
    check_w(w_qubits, cap)?;
    let total = spectral.total_weight();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("spectral weights sum to {total}, expected 1")));
    }
    let n = 1u64 << w_qubits;
    let nf = n as f64;
    let lines: Vec<(f64, f64)> = spectral
        .lambdas()
        .iter()
        .copied()
        .zip(spectral.weights().iter().copied())
        .collect();
    let probabilities: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|y| {
            let grid = y as f64 / nf;
            let p: f64 = lines.iter().map(|&(l, w)| w * fejer_cycles(l - grid, n)).sum::<f64>() / nf;
            p.max(0.0)
        })
        .collect();
    Ok(PeaDistribution {
        w_qubits,
        probabilities,
        lines: lines.len(),
    })
}

/// Joint ancilla ⊗ system amplitudes after phase estimation, before the
/// ancilla is read out. Row `y` holds the unnormalized system state
/// conditioned on outcome `y`.
#[derive(Clone, Debug)]
pub struct PeaRegister {
    w_qubits: u32,
    dim: usize,
    amplitudes: Vec<Complex64>,
}

impl PeaRegister {
    pub fn w_qubits(&self) -> u32 {
        self.w_qubits
    }

    pub fn row(&self, y: usize) -> &[Complex64] {
        &self.amplitudes[y * self.dim..(y + 1) * self.dim]
    }

    /// Marginal distribution of the ancilla.
    pub fn distribution(&self) -> Result<PeaDistribution> {
        let probs = (0..1usize << self.w_qubits)
            .map(|y| self.row(y).iter().map(|a| a.norm_sqr()).sum())
            .collect();
        PeaDistribution::from_probabilities(self.w_qubits, probs)
    }

    /// Normalized system state after reading `y`.
    pub fn conditional_state(&self, y: usize) -> Option<StateVector> {
        let row = self.row(y);
        let n = row.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        (n > 0.0).then(|| row.iter().map(|a| a / n).collect())
    }
}

/// Builds the full register: uniform superposition on the ancilla,
/// controlled `exp(i 2π k H̄)` on the system, inverse Fourier transform on
/// the ancilla.
pub fn simulate_pea_register(h_scaled: &SparseOperator, phi: &[Complex64], w_qubits: u32) -> Result<PeaRegister> {
    check_w(w_qubits, MAX_W_QUBITS)?;
    let dim = h_scaled.dim();
    if phi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: phi.len(),
        });
    }
    let n = 1usize << w_qubits;
    if n.saturating_mul(dim) > MAX_REGISTER_SIZE {
        return Err(Error::Capacity(format!(
            "register of 2^{w_qubits} x {dim} amplitudes exceeds {MAX_REGISTER_SIZE}"
        )));
    }
    let eigen = HermitianEigen::of_operator(h_scaled)?;
    let coeffs = eigen.project(phi);
    let scale = 1.0 / (n as f64).sqrt();
    // columns[i][k]: system amplitude i on ancilla value k.
    let mut columns: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; dim];
    for k in 0..n {
        let phased: Vec<Complex64> = coeffs
            .iter()
            .zip(eigen.values())
            .map(|(c, &l)| c * Complex64::from_polar(scale, 2.0 * PI * ((k as f64 * l) % 1.0)))
            .collect();
        let state = eigen.synthesize(&phased);
        for (col, a) in columns.iter_mut().zip(state) {
            col[k] = a;
        }
    }
    // Forward FFT is Σ_k e^{−2πi k y / N}: the inverse quantum Fourier transform.
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    for col in columns.iter_mut() {
        fft.process(col);
        col.iter_mut().for_each(|a| *a *= scale);
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n * dim];
    for (i, col) in columns.iter().enumerate() {
        for (y, a) in col.iter().enumerate() {
            amplitudes[y * dim + i] = *a;
        }
    }
    Ok(PeaRegister {
        w_qubits,
        dim,
        amplitudes,
    })
}

/// Ancilla marginal of [`simulate_pea_register`].
pub fn statevector_pea_oracle(h_scaled: &SparseOperator, phi: &[Complex64], w_qubits: u32) -> Result<PeaDistribution> {
    let mut dist = simulate_pea_register(h_scaled, phi, w_qubits)?.distribution()?;
    dist.lines = h_scaled.dim();
    Ok(dist)
}
