//! Heralded preparation of the excited state `O|ψ0⟩ / ‖O|ψ0⟩‖`.
//!
//! An ancilla starts in `|1⟩` and the unitary `exp(-iγ O ⊗ σ_y)` is applied;
//! measuring the ancilla in `|0⟩` leaves the register in `sin(γO)|ψ0⟩`
//! (normalized), which approaches the target state as `γ → 0` with success
//! probability `⟨ψ0|sin²(γO)|ψ0⟩ ≈ γ²⟨O²⟩0`. On failure the register holds
//! `cos(γO)|ψ0⟩ ≈ |ψ0⟩`, so the rotation can simply be repeated.

use faer::prelude::SolveLstsq;
use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{difference_norm, norm, StateVector};
use crate::model::{DensityExcitation, FockBasis, SpinMode};
use crate::opfunc::{OperatorFunctions, Oscillator};
use crate::sparse::SparseOperator;
use crate::spectral::LanczosOptions;

/// Below this norm `O|ψ0⟩` is treated as zero.
const NULL_NORM: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrepOptions {
    /// Dimension up to which operator functions use dense diagonalization.
    pub dense_cap: usize,
    /// Constant `C` in the bias bound `C γ² ‖O‖²` and in [`gamma_bound`].
    pub c: f64,
    pub lanczos: LanczosOptions,
}

impl Default for PrepOptions {
    fn default() -> Self {
        Self {
            dense_cap: 5000,
            c: 1.0,
            lanczos: LanczosOptions::default(),
        }
    }
}

/// Normalized register state after a successful heralded preparation.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedState {
    pub vector: StateVector,
    /// Rotation angle; zero for the exact reference state.
    pub gamma: f64,
    /// Probability of the heralding outcome.
    pub success_probability: f64,
    /// `C γ² ‖O‖²`.
    pub bias_bound: f64,
    /// `‖vector − Φ_O‖` against the exact excited state.
    pub deviation: f64,
}

/// The exact excited state and `⟨O²⟩0 = ‖O|ψ0⟩‖²`.
pub fn exact_excited_state(o: &SparseOperator, psi0: &[Complex64]) -> Result<(PreparedState, f64)> {
    let mut v = o.mul_vec(psi0);
    let n = norm(&v);
    if n < NULL_NORM {
        return Err(Error::NullExcitation);
    }
    v.iter_mut().for_each(|x| *x /= n);
    Ok((
        PreparedState {
            vector: v,
            gamma: 0.0,
            success_probability: 1.0,
            bias_bound: 0.0,
            deviation: 0.0,
        },
        n * n,
    ))
}

/// Spectral norm `max |eigenvalue|` of a Hermitian operator.
pub fn operator_norm(o: &SparseOperator, opts: &LanczosOptions) -> Result<f64> {
    if o.dim() == 0 {
        return Ok(0.0);
    }
    if o.is_diagonal() {
        return Ok(o.diagonal_values().iter().fold(0.0, |m, v| m.max(v.re.abs())));
    }
    let lo = crate::spectral::ground_state(o, opts)?.energy;
    let neg = o.scaled(-1.0);
    let hi = -crate::spectral::ground_state(&neg, opts)?.energy;
    Ok(lo.abs().max(hi.abs()))
}

fn norm_of(fns: &OperatorFunctions, o: &SparseOperator, opts: &PrepOptions) -> Result<f64> {
    match fns.cheap_norm() {
        Some(n) => Ok(n),
        None => operator_norm(o, &opts.lanczos),
    }
}

fn reference(o: &SparseOperator, psi0: &[Complex64]) -> Result<StateVector> {
    Ok(exact_excited_state(o, psi0)?.0.vector)
}

/// Single heralded rotation at angle `gamma`.
pub fn prepare_gamma(o: &SparseOperator, psi0: &[Complex64], gamma: f64, opts: &PrepOptions) -> Result<PreparedState> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be positive and finite, got {gamma}")));
    }
    let fns = OperatorFunctions::new(o, opts.dense_cap)?;
    let o_norm = norm_of(&fns, o, opts)?;
    if gamma * o_norm >= std::f64::consts::FRAC_PI_2 {
        log::warn!(
            "γ‖O‖ = {:.3} ≥ π/2: sin(γO) is no longer monotone on the spectrum of O",
            gamma * o_norm
        );
    }
    let mut v = fns.apply(Oscillator::Sin(gamma), psi0)?;
    let n = norm(&v);
    if n < NULL_NORM {
        return Err(Error::NullExcitation);
    }
    v.iter_mut().for_each(|x| *x /= n);
    let exact = reference(o, psi0)?;
    Ok(PreparedState {
        deviation: difference_norm(&v, &exact),
        vector: v,
        gamma,
        success_probability: n * n,
        bias_bound: opts.c * gamma * gamma * o_norm * o_norm,
    })
}

/// One round of the repeat-until-success cascade.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeRound {
    /// 1-based round index.
    pub round: usize,
    /// Probability that the first success happens in this round.
    pub success_probability: f64,
    /// Probability of having failed every round up to and including this one.
    pub failure_probability: f64,
    /// Normalized `sin(γO) cos^{r-1}(γO)|ψ0⟩`.
    pub state: StateVector,
}

/// Exact round-by-round evolution of repeated heralded rotations.
///
/// The register after `r` failures holds `cos^r(γO)|ψ0⟩`; its squared norm
/// is the probability of reaching that point.
pub struct Cascade<'a> {
    fns: OperatorFunctions<'a>,
    gamma: f64,
    /// Unnormalized `cos^r(γO)|ψ0⟩`.
    register: StateVector,
    round: usize,
}

impl<'a> Cascade<'a> {
    pub fn new(o: &'a SparseOperator, psi0: &[Complex64], gamma: f64, opts: &PrepOptions) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::Domain(format!("gamma must be positive and finite, got {gamma}")));
        }
        Ok(Self {
            fns: OperatorFunctions::new(o, opts.dense_cap)?,
            gamma,
            register: psi0.to_vec(),
            round: 0,
        })
    }

    /// Probability that every round so far failed.
    pub fn remaining(&self) -> f64 {
        norm(&self.register).powi(2)
    }

    pub fn next_round(&mut self) -> Result<CascadeRound> {
        let mut success = self.fns.apply(Oscillator::Sin(self.gamma), &self.register)?;
        self.register = self.fns.apply(Oscillator::Cos(self.gamma), &self.register)?;
        self.round += 1;
        let n = norm(&success);
        if n > 0.0 {
            success.iter_mut().for_each(|x| *x /= n);
        }
        Ok(CascadeRound {
            round: self.round,
            success_probability: n * n,
            failure_probability: self.remaining(),
            state: success,
        })
    }
}

/// Result of a sampled repeat-until-success run.
#[derive(Clone, Debug, PartialEq)]
pub enum RepeatOutcome {
    Success {
        state: PreparedState,
        rounds: usize,
    },
    /// Every round failed; carries the probability of that happening.
    Failure {
        rounds: usize,
        failure_probability: f64,
    },
}

impl RepeatOutcome {
    pub fn rounds(&self) -> usize {
        match self {
            RepeatOutcome::Success { rounds, .. } | RepeatOutcome::Failure { rounds, .. } => *rounds,
        }
    }
}

/// Samples the heralded cascade until the ancilla reads `|0⟩` or
/// `max_rounds` rotations have failed.
pub fn repeat_until_success<R: Rng>(
    o: &SparseOperator,
    psi0: &[Complex64],
    gamma: f64,
    max_rounds: usize,
    rng: &mut R,
    opts: &PrepOptions,
) -> Result<RepeatOutcome> {
    let mut cascade = Cascade::new(o, psi0, gamma, opts)?;
    let fns = OperatorFunctions::new(o, opts.dense_cap)?;
    let o_norm = norm_of(&fns, o, opts)?;
    let mut alive = 1.0;
    for _ in 0..max_rounds {
        let round = cascade.next_round()?;
        let conditional = if alive > 0.0 {
            round.success_probability / alive
        } else {
            0.0
        };
        if rng.random::<f64>() < conditional {
            let exact = reference(o, psi0)?;
            return Ok(RepeatOutcome::Success {
                rounds: round.round,
                state: PreparedState {
                    deviation: difference_norm(&round.state, &exact),
                    vector: round.state,
                    gamma,
                    success_probability: conditional,
                    bias_bound: opts.c * gamma * gamma * o_norm * o_norm,
                },
            });
        }
        alive = round.failure_probability;
    }
    Ok(RepeatOutcome::Failure {
        rounds: max_rounds,
        failure_probability: alive,
    })
}

/// Per-round first-success probabilities of the cascade, truncated at
/// `max_rounds`.
pub fn cascade_probabilities(
    o: &SparseOperator,
    psi0: &[Complex64],
    gamma: f64,
    max_rounds: usize,
    opts: &PrepOptions,
) -> Result<Vec<f64>> {
    let mut cascade = Cascade::new(o, psi0, gamma, opts)?;
    (0..max_rounds)
        .map(|_| cascade.next_round().map(|r| r.success_probability))
        .collect()
}

/// `γ = C √δ / ‖O‖`, the largest angle whose preparation bias stays at the
/// target precision `δ`.
pub fn gamma_bound(delta: f64, o_norm: f64, c: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(o_norm > 0.0) || !o_norm.is_finite() {
        return Err(Error::Domain(format!("operator norm must be positive, got {o_norm}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("constant C must be positive, got {c}")));
    }
    Ok(c * delta.sqrt() / o_norm)
}

/// Unitary appearing in a linear-combination-of-unitaries expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LcuTerm {
    Identity,
    /// `(-1)^{n_{site,σ}} = exp(iπ n_{site,σ})`.
    Parity {
        site: usize,
        spin_up: bool,
    },
}

/// `O = Σ_k α_k U_k` with the one-norm `α = Σ |α_k|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LcuDecomposition {
    terms: Vec<(f64, LcuTerm)>,
}

impl LcuDecomposition {
    /// From signed coefficients. Zero coefficients are dropped.
    pub fn new(terms: Vec<(f64, LcuTerm)>) -> Result<Self> {
        if terms.iter().any(|(a, _)| !a.is_finite()) {
            return Err(Error::Domain("LCU coefficients must be finite".into()));
        }
        Ok(Self {
            terms: terms.into_iter().filter(|(a, _)| *a != 0.0).collect(),
        })
    }

    /// Coefficients only, with unspecified unitaries.
    pub fn from_alphas(alphas: &[f64]) -> Result<Self> {
        Self::new(alphas.iter().map(|&a| (a, LcuTerm::Identity)).collect())
    }

    /// Density excitations expand in site parities via
    /// `n_{jσ} = (1 − (−1)^{n_{jσ}}) / 2`.
    pub fn for_density_excitation(basis: &FockBasis, excitation: &DensityExcitation) -> Result<Self> {
        let profile = excitation.site_profile(basis);
        let down_sign = match excitation.spin_mode {
            SpinMode::Charge => 1.0,
            SpinMode::Spin => -1.0,
        };
        let identity: f64 = profile.iter().map(|f| f * (1.0 + down_sign) / 2.0).sum();
        let mut terms = vec![(identity, LcuTerm::Identity)];
        for (site, f) in profile.iter().enumerate() {
            terms.push((-f / 2.0, LcuTerm::Parity { site, spin_up: true }));
            terms.push((-down_sign * f / 2.0, LcuTerm::Parity { site, spin_up: false }));
        }
        Self::new(terms)
    }

    pub fn terms(&self) -> &[(f64, LcuTerm)] {
        &self.terms
    }

    /// `|α_k|` for every term.
    pub fn alphas(&self) -> Vec<f64> {
        self.terms.iter().map(|(a, _)| a.abs()).collect()
    }

    /// One-norm `α`.
    pub fn alpha(&self) -> f64 {
        self.terms.iter().map(|(a, _)| a.abs()).sum()
    }

    /// Number of unitaries `D`.
    pub fn d(&self) -> usize {
        self.terms.len()
    }

    /// Checks `α ≥ ‖O‖`.
    pub fn validate(&self, o_norm: f64) -> Result<()> {
        if self.alpha() + 1e-12 * o_norm.max(1.0) < o_norm {
            return Err(Error::InconsistentInputs(format!(
                "LCU one-norm {} is below the operator norm {o_norm}",
                self.alpha()
            )));
        }
        Ok(())
    }

    /// Diagonal matrix `Σ α_k U_k` on a basis (all terms here are diagonal).
    pub fn to_operator(&self, basis: &FockBasis) -> SparseOperator {
        let values: Vec<f64> = basis
            .iter()
            .map(|c| {
                self.terms
                    .iter()
                    .map(|(a, term)| match term {
                        LcuTerm::Identity => *a,
                        LcuTerm::Parity { site, spin_up } => {
                            let bits = if *spin_up { c.up } else { c.dn };
                            if (bits >> site) & 1 == 1 {
                                -a
                            } else {
                                *a
                            }
                        }
                    })
                    .sum()
            })
            .collect();
        SparseOperator::diagonal(&values)
    }
}

/// `⟨O²⟩0 / α²`, the heralding probability of the LCU preparation.
pub fn lcu_success_probability(o_sq_expectation: f64, decomposition: &LcuDecomposition) -> Result<f64> {
    if !(o_sq_expectation >= 0.0) {
        return Err(Error::Domain(format!(
            "⟨O²⟩0 must be non-negative, got {o_sq_expectation}"
        )));
    }
    let alpha = decomposition.alpha();
    if !(alpha > 0.0) {
        return Err(Error::Domain("LCU one-norm must be positive".into()));
    }
    let p = o_sq_expectation / (alpha * alpha);
    if p > 1.0 + 1e-12 {
        return Err(Error::InconsistentInputs(format!(
            "success probability {p} exceeds one: α = {alpha} is smaller than ‖O|ψ0⟩‖"
        )));
    }
    Ok(p.min(1.0))
}

/// Least-squares quadratic `a + bx + cx²` through `(x, value)` samples,
/// returning the intercept `a`. Pass `x = γ` or, for observables even in
/// `γ` such as `P_success / γ²`, `x = γ²`.
pub fn extrapolate_to_zero(xs: &[f64], values: &[f64]) -> Result<f64> {
    if xs.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: values.len(),
        });
    }
    if xs.len() < 3 {
        return Err(Error::Domain(
            "quadratic extrapolation needs at least three points".into(),
        ));
    }
    let n = xs.len();
    let a = Mat::<f64>::from_fn(n, 3, |i, j| xs[i].powi(j as i32));
    let b = Mat::<f64>::from_fn(n, 1, |i, _| values[i]);
    let coeffs = a.qr().solve_lstsq(&b);
    let intercept = coeffs[(0, 0)];
    if !intercept.is_finite() {
        return Err(Error::Numerical("degenerate sample points for extrapolation".into()));
    }
    Ok(intercept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn identity_excitation_returns_the_ground_state() {
        let o = SparseOperator::identity(3);
        let psi = vec![c(0.6), c(0.0), c(0.8)];
        let (s, osq) = exact_excited_state(&o, &psi).unwrap();
        assert_eq!(s.vector, psi);
        assert!((osq - 1.0).abs() < 1e-15);
    }

    #[test]
    fn annihilated_ground_state_is_an_error() {
        let o = SparseOperator::diagonal(&[0.0, 1.0]);
        assert_eq!(
            exact_excited_state(&o, &[c(1.0), c(0.0)]).unwrap_err(),
            Error::NullExcitation
        );
        assert_eq!(
            prepare_gamma(&o, &[c(1.0), c(0.0)], 0.1, &PrepOptions::default()).unwrap_err(),
            Error::NullExcitation
        );
    }

    #[test]
    fn involution_gives_closed_form() {
        let o = SparseOperator::diagonal(&[1.0, -1.0, 1.0]);
        let psi = vec![c(0.6), c(0.0), c(0.8)];
        for gamma in [0.1, 0.7, 1.5] {
            let s = prepare_gamma(&o, &psi, gamma, &PrepOptions::default()).unwrap();
            assert!((s.success_probability - gamma.sin().powi(2)).abs() < 1e-15);
            assert!(s.deviation < 1e-15);
        }
    }

    #[test]
    fn nonpositive_gamma_is_rejected() {
        let o = SparseOperator::identity(1);
        assert_eq!(
            prepare_gamma(&o, &[c(1.0)], 0.0, &PrepOptions::default())
                .unwrap_err()
                .code(),
            "domain"
        );
    }

    #[test]
    fn quarter_turn_involution_succeeds_immediately() {
        let o = SparseOperator::diagonal(&[1.0, -1.0]);
        let psi = vec![c(0.6), c(0.8)];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = repeat_until_success(
            &o,
            &psi,
            std::f64::consts::FRAC_PI_2,
            5,
            &mut rng,
            &PrepOptions::default(),
        )
        .unwrap();
        match out {
            RepeatOutcome::Success { rounds, state } => {
                assert_eq!(rounds, 1);
                assert!((state.success_probability - 1.0).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exhausted_rounds_report_failure_probability() {
        // Half the weight sits in the kernel of O and never succeeds.
        let o = SparseOperator::diagonal(&[0.0, 1.0]);
        let psi = vec![c(0.5f64.sqrt()), c(0.5f64.sqrt())];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let probs = cascade_probabilities(&o, &psi, 1e-3, 3, &PrepOptions::default()).unwrap();
        let out = repeat_until_success(&o, &psi, 1e-3, 3, &mut rng, &PrepOptions::default()).unwrap();
        match out {
            RepeatOutcome::Failure {
                rounds,
                failure_probability,
            } => {
                assert_eq!(rounds, 3);
                let expected = 1.0 - probs.iter().sum::<f64>();
                assert!((failure_probability - expected).abs() < 1e-15);
                assert!(failure_probability > 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_bound_arithmetic() {
        assert!((gamma_bound(0.01, 1.0, 1.0).unwrap() - 0.1).abs() < 1e-15);
        let g1 = gamma_bound(0.01, 2.0, 1.0).unwrap();
        let g4 = gamma_bound(0.04, 2.0, 1.0).unwrap();
        assert!((g4 / g1 - 2.0).abs() < 1e-14);
        assert!(gamma_bound(1.0, 1.0, 1.0).is_err());
        assert!(gamma_bound(0.1, 0.0, 1.0).is_err());
        assert!(gamma_bound(0.1, 1.0, -1.0).is_err());
    }

    #[test]
    fn lcu_probability_scaling() {
        let unit = LcuDecomposition::from_alphas(&[1.0]).unwrap();
        assert_eq!(lcu_success_probability(1.0, &unit).unwrap(), 1.0);
        let doubled = LcuDecomposition::from_alphas(&[2.0]).unwrap();
        assert_eq!(lcu_success_probability(0.8, &doubled).unwrap(), 0.8 / 4.0);
        assert_eq!(
            lcu_success_probability(2.0, &unit).unwrap_err().code(),
            "inconsistent_inputs"
        );
        assert!(unit.validate(1.5).is_err());
    }

    #[test]
    fn diagonal_operator_norm() {
        let o = SparseOperator::diagonal(&[-3.0, 2.0]);
        assert_eq!(operator_norm(&o, &LanczosOptions::default()).unwrap(), 3.0);
        assert_eq!(
            operator_norm(&SparseOperator::identity(4), &LanczosOptions::default()).unwrap(),
            1.0
        );
    }

    #[test]
    fn extrapolation_recovers_intercept_of_a_quadratic() {
        let g = [0.1, 0.2, 0.3, 0.4];
        let v: Vec<f64> = g.iter().map(|x| 2.0 - 0.5 * x + 3.0 * x * x).collect();
        assert!((extrapolate_to_zero(&g, &v).unwrap() - 2.0).abs() < 1e-12);
        assert!(extrapolate_to_zero(&g[..2], &v[..2]).is_err());
    }
}
