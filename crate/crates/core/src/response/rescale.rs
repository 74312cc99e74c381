use serde::Serialize;

use super::pea::PeaDistribution;
use crate::error::{Error, Result};
use crate::spectral::SpectralBounds;

/// One outcome bin in physical units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResponseRow {
    pub y: usize,
    /// `ω̄ = y / 2^W`.
    pub omega_scaled: f64,
    /// Excitation energy above the ground state, `ω̄ ΔH`.
    pub omega_physical: f64,
    pub probability: f64,
    /// `S_O(ω) = ⟨O²⟩0 P(y) 2^W / ΔH`.
    pub strength: f64,
}

/// Response function on the phase-estimation grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResponseTable {
    pub rows: Vec<ResponseRow>,
    /// Energy spacing `ΔH / 2^W` between rows.
    pub bin_width: f64,
}

impl ResponseTable {
    /// `Σ S_O(ω) Δω`, which recovers `⟨O²⟩0`.
    pub fn riemann_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.strength).sum::<f64>() * self.bin_width
    }

    /// Row with the largest strength.
    pub fn peak(&self) -> Option<&ResponseRow> {
        self.rows.iter().fold(None, |best: Option<&ResponseRow>, r| match best {
            Some(b) if b.strength >= r.strength => Some(b),
            _ => Some(r),
        })
    }
}

/// Undoes the spectral scaling and the normalization by `⟨O²⟩0`.
pub fn rescale(dist: &PeaDistribution, bounds: &SpectralBounds, o_sq_expectation: f64) -> Result<ResponseTable> {
    if !(bounds.delta_h > 0.0) {
        return Err(Error::DegenerateSpectrum { dimension: 0 });
    }
    if !(o_sq_expectation >= 0.0) {
        return Err(Error::Domain(format!(
            "⟨O²⟩0 must be non-negative, got {o_sq_expectation}"
        )));
    }
    let n = dist.bins() as f64;
    let bin_width = bounds.delta_h / n;
    let rows = dist
        .probabilities()
        .iter()
        .enumerate()
        .map(|(y, &p)| {
            let omega_scaled = y as f64 / n;
            ResponseRow {
                y,
                omega_scaled,
                omega_physical: omega_scaled * bounds.delta_h,
                probability: p,
                strength: o_sq_expectation * p / bin_width,
            }
        })
        .collect();
    Ok(ResponseTable { rows, bin_width })
}
