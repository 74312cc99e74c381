//! Phase-estimation statistics: the exact outcome distribution, a
//! brute-force register simulation to check it, sampling and error
//! analysis, conversion back to physical units, and cost estimates.
//!
//! With `N = 2^W` ancilla values, an eigenstate of `H̄` with eigenvalue `λ`
//! produces outcome `y` with probability `F_N(2π(λ − y/N)) / N`, where `F_N`
//! is the Fejér kernel. A superposition contributes incoherently, weighted
//! by its spectral weights.
//!
//! `U = exp(i 2π H̄)` is periodic in `λ` with period one, so a line at
//! `λ ≈ 1` shows up next to `y = 0` as well as next to `y = N − 1`.

mod fejer;
mod pea;
mod rescale;
mod resources;
mod sampling;

pub use fejer::{fejer_cycles, fejer_kernel};
pub use pea::{
    pea_distribution, pea_distribution_with_cap, simulate_pea_register, statevector_pea_oracle, PeaDistribution,
    PeaRegister, MAX_REGISTER_SIZE, MAX_W_QUBITS,
};
pub use rescale::{rescale, ResponseRow, ResponseTable};
pub use resources::{ancilla_qubits, resource_estimate, ResourceEstimate, ResourceInputs};
pub use sampling::{hoeffding_n, max_error, sample, SampleHistogram};
