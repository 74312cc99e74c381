use std::f64::consts::PI;

use serde::Serialize;

use super::sampling::hoeffding_n;
use crate::error::{Error, Result};
use crate::prep::gamma_bound;
use crate::spectral::SpectralBounds;

/// Inputs to [`resource_estimate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResourceInputs {
    /// Target energy resolution `Δω`.
    pub delta_omega: f64,
    pub bounds: SpectralBounds,
    /// Per-bin precision `δ_S`.
    pub delta_s: f64,
    /// Failure probability `ε`.
    pub epsilon: f64,
    pub o_norm: f64,
    pub o_sq_expectation: f64,
    /// Constant in `γ = C √δ_S / ‖O‖`.
    pub c: f64,
    pub amplify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResourceEstimate {
    pub w_qubits: u32,
    /// Largest power of `U` applied, `2^W − 1`.
    pub k_max: u64,
    /// `2π / Δω`.
    pub t_max: f64,
    pub n_rep: u64,
    pub p_success: f64,
    pub gamma: f64,
    /// Order-of-magnitude count `1 / p_success²` of extra excitation-oracle
    /// calls with amplitude amplification; not a precise count.
    pub amplified_calls: Option<f64>,
}

/// Ancilla count `⌈log₂(ΔH / Δω)⌉`, at least one.
///
/// Ratios within `1e-6` (relative, in the exponent) of a power of two round
/// down so that a safety-widened `ΔH` does not cost an extra qubit.
pub fn ancilla_qubits(delta_h: f64, delta_omega: f64) -> Result<u32> {
    if !(delta_omega > 0.0) || !delta_omega.is_finite() {
        return Err(Error::Domain(format!("resolution must be positive, got {delta_omega}")));
    }
    if !(delta_h > 0.0) {
        return Err(Error::DegenerateSpectrum { dimension: 0 });
    }
    if delta_omega > delta_h * (1.0 + 1e-6) {
        return Err(Error::Domain(format!(
            "resolution {delta_omega} is coarser than the spectral width {delta_h}"
        )));
    }
    Ok(((delta_h / delta_omega).log2() - 1e-6).ceil().max(1.0) as u32)
}

pub fn resource_estimate(inputs: &ResourceInputs) -> Result<ResourceEstimate> {
    let w_qubits = ancilla_qubits(inputs.bounds.delta_h, inputs.delta_omega)?;
    if !(inputs.o_sq_expectation >= 0.0) {
        return Err(Error::Domain(format!(
            "⟨O²⟩0 must be non-negative, got {}",
            inputs.o_sq_expectation
        )));
    }
    let gamma = gamma_bound(inputs.delta_s, inputs.o_norm, inputs.c)?;
    let p_success = (gamma * gamma * inputs.o_sq_expectation).min(1.0);
    Ok(ResourceEstimate {
        w_qubits,
        k_max: (1u64 << w_qubits) - 1,
        t_max: 2.0 * PI / inputs.delta_omega,
        n_rep: hoeffding_n(inputs.delta_s, inputs.epsilon)?,
        p_success,
        gamma,
        amplified_calls: inputs.amplify.then(|| 1.0 / (p_success * p_success)),
    })
}
