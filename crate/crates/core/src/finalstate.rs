//! Final states left behind by phase estimation, and one- and two-mode
//! occupation measurements on them.
//!
//! Reading outcome `y` projects the register onto
//! `Σν cν βν(y) |ψν⟩`, a superposition of eigenstates whose energies lie
//! within a few bins of `y / 2^W`. Occupations are then measured with a
//! Hadamard test on `U = exp(−iπ n̂)`: for a projector `n̂` the ancilla reads
//! `|1⟩` with probability `⟨n̂⟩`, and on that branch the register is left in
//! `n̂|Ψ⟩ / ‖n̂|Ψ⟩‖`, ready for a second measurement.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{difference_norm, expectation, norm, StateVector};
use crate::opfunc::{OperatorFunctions, Oscillator};
use crate::sparse::SparseOperator;
use crate::spectral::SpectralData;

/// Outcomes less likely than this cannot be conditioned on.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-14;
/// Tolerance of the idempotence and commutation checks.
pub const CONTRACT_TOL: f64 = 1e-10;

/// Normalized register state after reading outcome `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapsedState {
    pub y: usize,
    pub w_qubits: u32,
    pub vector: StateVector,
    /// Probability of having read `y`.
    pub p_y: f64,
}

/// Amplitude `β(y) = (1/N) Σ_k exp(i 2π k (λ − y/N))` that an eigenstate
/// with scaled energy `λ` contributes to outcome `y`, `N = 2^W`.
pub fn outcome_amplitude(lambda: f64, y: usize, w_qubits: u32) -> Complex64 {
    let n = (1u64 << w_qubits) as f64;
    let d = lambda - y as f64 / n;
    let r = d - d.round();
    let nr = n * r;
    let m = nr.round();
    // Phase π (N − 1) r, reduced modulo 2π.
    let phase = PI * ((nr - 2.0 * (nr / 2.0).round()) - r);
    let ratio = if nr.abs() < 1e-4 {
        let u = PI * r;
        1.0 - (n * n - 1.0) * u * u / 6.0
    } else {
        let sign = if (m as i64) % 2 == 0 { 1.0 } else { -1.0 };
        sign * (PI * (nr - m)).sin() / ((PI * r).sin() * n)
    };
    Complex64::from_polar(ratio, phase)
}

/// Collapses the state described by `spectral` (which must carry
/// eigenspace components) on outcome `y` of a `W`-qubit register.
pub fn collapse(spectral: &SpectralData, w_qubits: u32, y: usize) -> Result<CollapsedState> {
    let comps = spectral
        .components()
        .ok_or_else(|| Error::InconsistentInputs("spectral data was built without eigenvectors".into()))?;
    if w_qubits == 0 || w_qubits > 62 {
        return Err(Error::Domain(format!("invalid register size W = {w_qubits}")));
    }
    if y >= 1usize << w_qubits {
        return Err(Error::Domain(format!(
            "outcome {y} is outside a {w_qubits}-qubit register"
        )));
    }
    let dim = comps.first().map_or(0, Vec::len);
    let mut vector = vec![Complex64::new(0.0, 0.0); dim];
    let mut p_y = 0.0;
    for ((&lambda, &weight), comp) in spectral.lambdas().iter().zip(spectral.weights()).zip(comps) {
        let amp = weight.sqrt() * outcome_amplitude(lambda, y, w_qubits);
        p_y += amp.norm_sqr();
        vector.iter_mut().zip(comp).for_each(|(v, c)| *v += amp * c);
    }
    if p_y < MIN_OUTCOME_PROBABILITY {
        return Err(Error::ImprobableOutcome { y, probability: p_y });
    }
    let n = norm(&vector);
    vector.iter_mut().for_each(|v| *v /= n);
    Ok(CollapsedState {
        y,
        w_qubits,
        vector,
        p_y,
    })
}

/// Exact and shot-sampled outcome of one Hadamard-test measurement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub id: String,
    /// Exact probability of reading the ancilla in `|1⟩`.
    pub p1: f64,
    pub n_shots: u64,
    pub successes: u64,
    /// `successes / n_shots`; absent without shots.
    pub estimate: Option<f64>,
    /// Binomial standard error of `estimate`.
    pub stderr: Option<f64>,
}

impl MeasurementRecord {
    fn sampled<R: Rng>(id: &str, p1: f64, n_shots: u64, rng: &mut R) -> Self {
        let successes = (0..n_shots).filter(|_| rng.random::<f64>() < p1).count() as u64;
        let (estimate, stderr) = if n_shots > 0 {
            let e = successes as f64 / n_shots as f64;
            (Some(e), Some((e * (1.0 - e) / n_shots as f64).sqrt()))
        } else {
            (None, None)
        };
        Self {
            id: id.to_string(),
            p1,
            n_shots,
            successes,
            estimate,
            stderr,
        }
    }
}

/// Options shared by the measurement routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureOptions {
    /// Dimension up to which `exp(−iπ n̂)` is built by dense diagonalization.
    pub dense_cap: usize,
    /// Random probe vectors used to check idempotence and commutation.
    pub probes: usize,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            dense_cap: 5000,
            probes: 3,
        }
    }
}

fn probe_vectors(dim: usize, count: usize) -> Vec<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7072_6f62);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}

/// Checks `n̂ = n̂†` and `n̂² = n̂` on random probes.
fn check_projector(op: &SparseOperator, name: &str, opts: &MeasureOptions) -> Result<()> {
    if !op.is_hermitian() || op.hermiticity_defect() > CONTRACT_TOL {
        return Err(Error::Contract(format!("{name} is not Hermitian")));
    }
    for v in probe_vectors(op.dim(), opts.probes) {
        let nv = op.mul_vec(&v);
        let nnv = op.mul_vec(&nv);
        if difference_norm(&nnv, &nv) > CONTRACT_TOL * norm(&v) {
            return Err(Error::Contract(format!("{name} is not idempotent")));
        }
    }
    Ok(())
}

fn check_commuting(a: &SparseOperator, b: &SparseOperator, opts: &MeasureOptions) -> Result<()> {
    for v in probe_vectors(a.dim(), opts.probes) {
        let ab = a.mul_vec(&b.mul_vec(&v));
        let ba = b.mul_vec(&a.mul_vec(&v));
        if difference_norm(&ab, &ba) > CONTRACT_TOL * norm(&v) {
            return Err(Error::Contract("occupation operators do not commute".into()));
        }
    }
    Ok(())
}

fn check_dim(op: &SparseOperator, state: &[Complex64]) -> Result<()> {
    if op.dim() != state.len() {
        return Err(Error::DimensionMismatch {
            expected: state.len(),
            found: op.dim(),
        });
    }
    Ok(())
}

/// Exact Hadamard test on `U = exp(−iπ n̂)`: returns `P(|1⟩) = 1 − P(|0⟩)`
/// and the normalized register state on the `|1⟩` branch.
///
/// `U` is built from the spectrum of `n̂` and never assumes `U = 1 − 2n̂`.
pub fn hadamard_test_exact(
    state: &[Complex64],
    n_op: &SparseOperator,
    opts: &MeasureOptions,
) -> Result<(f64, Option<StateVector>)> {
    check_dim(n_op, state)?;
    let u_psi = OperatorFunctions::new(n_op, opts.dense_cap)?.apply(Oscillator::Exp(PI), state)?;
    let plus: StateVector = state.iter().zip(&u_psi).map(|(a, b)| (a + b) * 0.5).collect();
    let mut minus: StateVector = state.iter().zip(&u_psi).map(|(a, b)| (a - b) * 0.5).collect();
    let p0 = norm(&plus).powi(2);
    let m = norm(&minus);
    let post = (m > 0.0).then(|| {
        minus.iter_mut().for_each(|x| *x /= m);
        minus
    });
    Ok(((1.0 - p0).clamp(0.0, 1.0), post))
}

/// One-mode occupation `n1(A) = ⟨Ψ|n̂_A|Ψ⟩`.
pub fn hadamard_test_n1<R: Rng>(
    state: &CollapsedState,
    n_op: &SparseOperator,
    id: &str,
    n_shots: u64,
    rng: &mut R,
    opts: &MeasureOptions,
) -> Result<MeasurementRecord> {
    check_dim(n_op, &state.vector)?;
    check_projector(n_op, id, opts)?;
    let (p1, _) = hadamard_test_exact(&state.vector, n_op, opts)?;
    Ok(MeasurementRecord::sampled(id, p1, n_shots, rng))
}

/// Two-mode occupation `n2(A, B) = ⟨Ψ|n̂_A n̂_B|Ψ⟩` from a Hadamard test on
/// `exp(−iπ n̂_A n̂_B)`.
pub fn hadamard_test_n2<R: Rng>(
    state: &CollapsedState,
    n_a: &SparseOperator,
    n_b: &SparseOperator,
    id: &str,
    n_shots: u64,
    rng: &mut R,
    opts: &MeasureOptions,
) -> Result<MeasurementRecord> {
    check_dim(n_a, &state.vector)?;
    check_dim(n_b, &state.vector)?;
    check_projector(n_a, "first operator", opts)?;
    check_projector(n_b, "second operator", opts)?;
    check_commuting(n_a, n_b, opts)?;
    let product = n_a.matmul(n_b)?.with_hermitian_flag(true);
    let (p1, _) = hadamard_test_exact(&state.vector, &product, opts)?;
    Ok(MeasurementRecord::sampled(id, p1, n_shots, rng))
}

/// Two-stage protocol: measure `n̂_A`, then measure `n̂_B` on the register
/// left behind by each `|1⟩` outcome. The second record's exact value is
/// `n2(A, B) / n1(A)` and its shot count is the number of first-stage
/// successes.
#[allow(clippy::too_many_arguments)]
pub fn conditional_n2<R: Rng>(
    state: &CollapsedState,
    n_a: &SparseOperator,
    n_b: &SparseOperator,
    ids: (&str, &str),
    n_shots: u64,
    rng: &mut R,
    opts: &MeasureOptions,
) -> Result<(MeasurementRecord, MeasurementRecord)> {
    check_dim(n_a, &state.vector)?;
    check_dim(n_b, &state.vector)?;
    check_projector(n_a, ids.0, opts)?;
    check_projector(n_b, ids.1, opts)?;
    check_commuting(n_a, n_b, opts)?;
    let (p1, post) = hadamard_test_exact(&state.vector, n_a, opts)?;
    let post = match post {
        Some(v) if p1 >= MIN_OUTCOME_PROBABILITY => v,
        _ => return Err(Error::NullCondition { probability: p1 }),
    };
    let first = MeasurementRecord::sampled(ids.0, p1, n_shots, rng);
    let (p_cond, _) = hadamard_test_exact(&post, n_b, opts)?;
    let second = MeasurementRecord::sampled(ids.1, p_cond, first.successes, rng);
    Ok((first, second))
}

/// `exp(−iHt)` applied to a collapsed state.
pub fn evolve_final_state(
    state: &CollapsedState,
    h: &SparseOperator,
    time: f64,
    dense_cap: usize,
) -> Result<CollapsedState> {
    check_dim(h, &state.vector)?;
    if !time.is_finite() {
        return Err(Error::Domain(format!("evolution time must be finite, got {time}")));
    }
    if time == 0.0 {
        return Ok(state.clone());
    }
    let fns = OperatorFunctions::new(h, dense_cap)?;
    evolve_with(state, &fns, time)
}

/// As [`evolve_final_state`] with a prepared evaluator for `H`.
pub fn evolve_with(state: &CollapsedState, h: &OperatorFunctions, time: f64) -> Result<CollapsedState> {
    let vector = h.apply(Oscillator::Exp(time), &state.vector)?;
    let n = norm(&vector);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Numerical(format!("evolution changed the norm to {n}")));
    }
    Ok(CollapsedState {
        vector,
        ..state.clone()
    })
}

/// `⟨Ψ|Q|Ψ⟩` for a Hermitian observable.
pub fn observable(state: &CollapsedState, q: &SparseOperator) -> f64 {
    expectation(q, &state.vector)
}
