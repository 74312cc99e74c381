//! The prepare, phase-estimate, record and measure loop.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use linresp::finalstate::{
    collapse, conditional_n2, evolve_with, hadamard_test_n1, hadamard_test_n2, CollapsedState, MeasureOptions,
    MeasurementRecord,
};
use linresp::linalg::HermitianEigen;
use linresp::model::{build_density_excitation, build_hamiltonian, build_momentum_number, FockBasis, Spin, WaveVector};
use linresp::opfunc::OperatorFunctions;
use linresp::prep::{
    cascade_probabilities, exact_excited_state, gamma_bound, operator_norm, prepare_gamma, Cascade, PrepOptions,
};
use linresp::response::{
    ancilla_qubits, hoeffding_n, max_error, pea_distribution, rescale, resource_estimate, sample, PeaDistribution,
    ResourceEstimate, ResourceInputs, ResponseTable, SampleHistogram,
};
use linresp::spectral::{
    ground_state, scale_hamiltonian, spectral_bounds, spectral_weights, spectral_weights_from_eigen, LanczosOptions,
    SpectralBounds, SpectralData, SpectralOptions,
};
use linresp::{Complex64, SparseOperator, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ModeConfig, ObservableKind, PrepMode, RegisterSpec, RunConfig, SampleSpec};
use crate::error::{CliError, CliResult, ErrorRecord};

pub const RESPONSE_CSV: &str = "response.csv";
pub const METADATA_JSON: &str = "metadata.json";
pub const FINALSTATE_JSON: &str = "finalstate.json";

/// Independent seeded streams derived from the run seed.
const PREP_STREAM: u64 = 0x7072_6570;
const OUTCOME_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// Model, ground state and exact excited state of a configuration.
pub struct System {
    pub basis: FockBasis,
    pub h: SparseOperator,
    pub e0: f64,
    pub psi0: StateVector,
    pub bounds: SpectralBounds,
    pub h_scaled: SparseOperator,
    pub o: SparseOperator,
    /// `O|ψ0⟩ / ‖O|ψ0⟩‖`.
    pub phi: StateVector,
    pub o_sq: f64,
}

pub fn lanczos_options(config: &RunConfig) -> LanczosOptions {
    LanczosOptions {
        tol: config.numerics.lanczos_tol,
        seed: config.seed,
        ..Default::default()
    }
}

pub fn spectral_options(config: &RunConfig, keep_vectors: bool) -> SpectralOptions {
    SpectralOptions {
        lanczos: lanczos_options(config),
        dense_cap: config.numerics.dense_cap,
        keep_vectors,
        ..Default::default()
    }
}

pub fn prep_options(config: &RunConfig) -> PrepOptions {
    PrepOptions {
        dense_cap: config.numerics.dense_cap,
        c: config.prep.c,
        lanczos: lanczos_options(config),
    }
}

pub fn build_system(config: &RunConfig) -> CliResult<System> {
    let basis = config.basis()?;
    let h = build_hamiltonian(&basis, config.hubbard())?;
    let opts = spectral_options(config, false);
    let gs = ground_state(&h, &opts.lanczos)?;
    let bounds = spectral_bounds(&h, &opts)?;
    let h_scaled = scale_hamiltonian(&h, &bounds)?;
    let o = build_density_excitation(&basis, &config.density_excitation()?)?;
    let (exact, o_sq) = exact_excited_state(&o, &gs.vector)?;
    log::info!(
        "dimension {}, E0 = {:.12}, ΔH = {:.12}, ⟨O²⟩0 = {:.12}",
        basis.dimension(),
        gs.energy,
        bounds.delta_h,
        o_sq
    );
    Ok(System {
        basis,
        h,
        e0: gs.energy,
        psi0: gs.vector,
        bounds,
        h_scaled,
        o,
        phi: exact.vector,
        o_sq,
    })
}

pub fn register_qubits(config: &RunConfig, bounds: &SpectralBounds) -> CliResult<u32> {
    Ok(match config.register()? {
        RegisterSpec::Qubits(w) => w,
        RegisterSpec::Resolution(d) => ancilla_qubits(bounds.delta_h, d)?,
    })
}

pub fn sample_count(config: &RunConfig) -> CliResult<u64> {
    Ok(match config.samples()? {
        SampleSpec::Count(n) => n,
        SampleSpec::Hoeffding { delta, epsilon } => hoeffding_n(delta, epsilon)?,
    })
}

/// Rotation angle for the heralded modes, `None` in exact mode.
pub fn resolve_gamma(config: &RunConfig, system: &System) -> CliResult<Option<f64>> {
    if config.prep.mode == PrepMode::Exact {
        return Ok(None);
    }
    Ok(Some(match (config.prep.gamma, config.prep.delta_s) {
        (Some(g), _) => g,
        (None, Some(d)) => gamma_bound(d, operator_norm(&system.o, &lanczos_options(config))?, config.prep.c)?,
        (None, None) => return Err(CliError::config("prep.gamma", "missing")),
    }))
}

/// Spectral lines of many states under one `H̄`, diagonalizing it once when
/// it fits the dense path.
struct LineSolver<'a> {
    h_scaled: &'a SparseOperator,
    eigen: Option<HermitianEigen>,
    opts: SpectralOptions,
}

impl<'a> LineSolver<'a> {
    fn new(h_scaled: &'a SparseOperator, opts: SpectralOptions) -> CliResult<Self> {
        let eigen = if h_scaled.dim() <= opts.dense_cap {
            Some(HermitianEigen::of_operator(h_scaled)?)
        } else {
            None
        };
        Ok(Self { h_scaled, eigen, opts })
    }

    fn lines(&self, v: &[Complex64]) -> CliResult<SpectralData> {
        Ok(match &self.eigen {
            Some(e) => spectral_weights_from_eigen(e, v, &self.opts)?,
            None => spectral_weights(self.h_scaled, v, &self.opts)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrepSummary {
    pub mode: PrepMode,
    pub gamma: Option<f64>,
    /// Probability that one attempt heralds success (within `max_rounds`
    /// rotations for repeat-until-success).
    pub success_probability: f64,
    pub bias_bound: Option<f64>,
    /// `‖prepared − Φ_O‖`; for repeat-until-success the sample mean.
    pub deviation: Option<f64>,
    /// Attempts that failed and emitted no sample.
    pub failed_attempts: u64,
    /// Mean number of rotations per successful attempt.
    pub mean_rounds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub w_qubits: u32,
    pub bins: usize,
    pub n_samples: u64,
    pub seed: u64,
    pub delta_h: f64,
    pub e0: f64,
    pub e_max: f64,
    pub gamma: Option<f64>,
    pub o_sq_expectation: f64,
    pub dimension: usize,
    pub spectral_lines: usize,
    pub exact_only: bool,
    pub riemann_sum: f64,
    /// `max_y |h_N(y) − P(y)|` against the exact target distribution.
    pub delta_max: Option<f64>,
    pub prep: PrepSummary,
}

pub struct ResponseRun {
    pub exact: PeaDistribution,
    pub table: ResponseTable,
    pub histogram: Option<SampleHistogram>,
    pub metadata: Metadata,
}

struct Sampled {
    histogram: SampleHistogram,
    summary: PrepSummary,
}

fn merge_counts(into: &mut SampleHistogram, from: &SampleHistogram) {
    into.counts.iter_mut().zip(&from.counts).for_each(|(a, b)| *a += b);
    into.n += from.n;
}

/// Failed attempts before `successes` heralded successes at probability `p`,
/// drawn attempt-by-attempt by inverse CDF of the geometric law.
fn failed_attempts<R: Rng>(successes: u64, p: f64, rng: &mut R) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    let log_q = (1.0 - p).ln();
    (0..successes)
        .map(|_| {
            let u: f64 = 1.0 - rng.random::<f64>();
            (u.ln() / log_q).floor() as u64
        })
        .sum()
}

fn sample_prepared(
    config: &RunConfig,
    system: &System,
    solver: &LineSolver,
    exact: &PeaDistribution,
    w: u32,
    n: u64,
    gamma: Option<f64>,
) -> CliResult<Sampled> {
    let seed = config.seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ PREP_STREAM);
    match (config.prep.mode, gamma) {
        (PrepMode::Exact, _) => Ok(Sampled {
            histogram: sample(exact, n, seed)?,
            summary: PrepSummary {
                mode: PrepMode::Exact,
                gamma: None,
                success_probability: 1.0,
                bias_bound: None,
                deviation: Some(0.0),
                failed_attempts: 0,
                mean_rounds: None,
            },
        }),
        (PrepMode::Gamma, Some(g)) => {
            let prepared = prepare_gamma(&system.o, &system.psi0, g, &prep_options(config))?;
            let dist = pea_distribution(&solver.lines(&prepared.vector)?, w)?;
            Ok(Sampled {
                histogram: sample(&dist, n, seed)?,
                summary: PrepSummary {
                    mode: PrepMode::Gamma,
                    gamma,
                    success_probability: prepared.success_probability,
                    bias_bound: Some(prepared.bias_bound),
                    deviation: Some(prepared.deviation),
                    failed_attempts: failed_attempts(n, prepared.success_probability, &mut rng),
                    mean_rounds: Some(1.0),
                },
            })
        }
        (PrepMode::RepeatUntilSuccess, Some(g)) => {
            sample_repeat_until_success(config, system, solver, w, n, g, &mut rng)
        }
        _ => Err(CliError::config("prep.gamma", "missing")),
    }
}

/// Each attempt runs the heralded cascade; the number of rotations decides
/// which state enters phase estimation. Attempts that fail `max_rounds`
/// times are counted and emit no sample.
fn sample_repeat_until_success<R: Rng>(
    config: &RunConfig,
    system: &System,
    solver: &LineSolver,
    w: u32,
    n: u64,
    gamma: f64,
    rng: &mut R,
) -> CliResult<Sampled> {
    let opts = prep_options(config);
    let max_rounds = config.prep.max_rounds;
    let per_round = cascade_probabilities(&system.o, &system.psi0, gamma, max_rounds, &opts)?;
    let heralded: f64 = per_round.iter().sum();
    if heralded < 1e-9 {
        return Err(linresp::Error::Numerical(format!(
            "repeat-until-success heralds with probability {heralded:.3e} within {max_rounds} rounds"
        ))
        .into());
    }
    let cumulative: Vec<f64> = per_round
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let mut rounds: BTreeMap<usize, u64> = BTreeMap::new();
    let mut failed = 0u64;
    let mut drawn = 0u64;
    while drawn < n {
        let u: f64 = rng.random();
        match cumulative.iter().position(|&c| u < c) {
            Some(k) => {
                *rounds.entry(k + 1).or_default() += 1;
                drawn += 1;
            }
            None => failed += 1,
        }
    }

    let mut cascade = Cascade::new(&system.o, &system.psi0, gamma, &opts)?;
    let mut histogram = SampleHistogram {
        counts: vec![0; 1 << w],
        n: 0,
        seed: config.seed,
    };
    let mut deviation = 0.0;
    let mut round = cascade.next_round()?;
    for (&r, &count) in &rounds {
        while round.round < r {
            round = cascade.next_round()?;
        }
        let dist = pea_distribution(&solver.lines(&round.state)?, w)?;
        merge_counts(
            &mut histogram,
            &sample(&dist, count, config.seed.wrapping_add(r as u64))?,
        );
        deviation += count as f64 * linresp::linalg::difference_norm(&round.state, &system.phi);
    }
    let mean_rounds = rounds.iter().map(|(r, c)| (*r as f64) * (*c as f64)).sum::<f64>() / n as f64;
    let o_norm = operator_norm(&system.o, &opts.lanczos)?;
    Ok(Sampled {
        histogram,
        summary: PrepSummary {
            mode: PrepMode::RepeatUntilSuccess,
            gamma: Some(gamma),
            success_probability: heralded,
            bias_bound: Some(opts.c * gamma * gamma * o_norm * o_norm),
            deviation: Some(deviation / n as f64),
            failed_attempts: failed,
            mean_rounds: Some(mean_rounds),
        },
    })
}

pub fn run_response(config: &RunConfig) -> CliResult<ResponseRun> {
    let system = build_system(config)?;
    let w = register_qubits(config, &system.bounds)?;
    let n = sample_count(config)?;
    let solver = LineSolver::new(&system.h_scaled, spectral_options(config, false))?;
    let lines = solver.lines(&system.phi)?;
    let exact = pea_distribution(&lines, w)?;
    let table = rescale(&exact, &system.bounds, system.o_sq)?;
    let gamma = resolve_gamma(config, &system)?;

    let (histogram, prep, delta_max) = if config.exact_only {
        let prep = PrepSummary {
            mode: config.prep.mode,
            gamma,
            success_probability: 1.0,
            bias_bound: None,
            deviation: None,
            failed_attempts: 0,
            mean_rounds: None,
        };
        (None, prep, None)
    } else {
        let sampled = sample_prepared(config, &system, &solver, &exact, w, n, gamma)?;
        let delta_max = max_error(&sampled.histogram, &exact)?;
        let bound = match config.samples()? {
            SampleSpec::Hoeffding { delta, .. } => format!(" (target δ = {delta})"),
            SampleSpec::Count(_) => String::new(),
        };
        log::info!("sampled δ_max = {delta_max:.4e} over {n} samples{bound}");
        (Some(sampled.histogram), sampled.summary, Some(delta_max))
    };

    let metadata = Metadata {
        w_qubits: w,
        bins: exact.bins(),
        n_samples: n,
        seed: config.seed,
        delta_h: system.bounds.delta_h,
        e0: system.e0,
        e_max: system.bounds.e_max,
        gamma,
        o_sq_expectation: system.o_sq,
        dimension: system.basis.dimension(),
        spectral_lines: lines.len(),
        exact_only: config.exact_only,
        riemann_sum: table.riemann_sum(),
        delta_max,
        prep,
    };
    Ok(ResponseRun {
        exact,
        table,
        histogram,
        metadata,
    })
}

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn response_csv(run: &ResponseRun) -> String {
    let mut out = String::from("y,omega_scaled,omega_physical,p_exact,h_sampled,abs_error\n");
    let freqs = run.histogram.as_ref().map(SampleHistogram::frequencies);
    for row in &run.table.rows {
        let (h, err) = match &freqs {
            Some(f) => (fmt_f64(f[row.y]), fmt_f64((f[row.y] - row.probability).abs())),
            None => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.y,
            fmt_f64(row.omega_scaled),
            fmt_f64(row.omega_physical),
            fmt_f64(row.probability),
            h,
            err
        )
        .expect("writing to a String cannot fail");
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn write_response(run: &ResponseRun, dir: &Path) -> CliResult<Vec<PathBuf>> {
    Ok(vec![
        write_file(dir, RESPONSE_CSV, &response_csv(run))?,
        write_file(dir, METADATA_JSON, &to_json(&run.metadata))?,
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableReport {
    pub id: String,
    pub exact: f64,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub shots: u64,
}

impl From<MeasurementRecord> for ObservableReport {
    fn from(r: MeasurementRecord) -> Self {
        Self {
            id: r.id,
            exact: r.p1,
            estimate: r.estimate,
            stderr: r.stderr,
            shots: r.n_shots,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OutcomeReport {
    pub y: usize,
    pub omega_physical: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_y: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observables: Vec<ObservableReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

#[derive(Debug, Serialize)]
pub struct FinalStateReport {
    pub w_qubits: u32,
    pub seed: u64,
    pub evolve_time: f64,
    pub outcomes: Vec<OutcomeReport>,
}

fn spin_label(s: Spin) -> &'static str {
    match s {
        Spin::Up => "up",
        Spin::Down => "dn",
    }
}

fn mode_label(m: &ModeConfig) -> String {
    format!("{},{},{}", m.k[0], m.k[1], spin_label(m.spin))
}

fn mode_operator(basis: &FockBasis, m: &ModeConfig) -> CliResult<SparseOperator> {
    let p = WaveVector::lattice(m.k[0], m.k[1], basis.geometry());
    Ok(build_momentum_number(basis, p, m.spin)?)
}

enum Measurement {
    N1(String, SparseOperator),
    N2(String, SparseOperator, SparseOperator),
    Conditional(String, SparseOperator, SparseOperator),
}

fn measurements(config: &RunConfig, basis: &FockBasis) -> CliResult<Vec<Measurement>> {
    let g = basis.geometry();
    if config.finalstate.observables.is_empty() {
        let mut out = Vec::new();
        for spin in [Spin::Up, Spin::Down] {
            for ky in 0..g.ly() as i64 {
                for kx in 0..g.lx() as i64 {
                    let m = ModeConfig { k: [kx, ky], spin };
                    out.push(Measurement::N1(
                        format!("n1({})", mode_label(&m)),
                        mode_operator(basis, &m)?,
                    ));
                }
            }
        }
        return Ok(out);
    }
    config
        .finalstate
        .observables
        .iter()
        .map(|obs| {
            let a = mode_operator(basis, &obs.a)?;
            let b = obs.b.as_ref().map(|b| mode_operator(basis, b)).transpose()?;
            let b_label = obs.b.as_ref().map(mode_label).unwrap_or_default();
            Ok(match (obs.kind, b) {
                (ObservableKind::N1, _) => Measurement::N1(
                    obs.id.clone().unwrap_or_else(|| format!("n1({})", mode_label(&obs.a))),
                    a,
                ),
                (ObservableKind::N2, Some(b)) => Measurement::N2(
                    obs.id
                        .clone()
                        .unwrap_or_else(|| format!("n2({};{b_label})", mode_label(&obs.a))),
                    a,
                    b,
                ),
                (ObservableKind::Conditional, Some(b)) => Measurement::Conditional(
                    obs.id
                        .clone()
                        .unwrap_or_else(|| format!("cond({};{b_label})", mode_label(&obs.a))),
                    a,
                    b,
                ),
                (_, None) => return Err(CliError::config("finalstate.observables.b", "required")),
            })
        })
        .collect()
}

fn measure<R: Rng>(
    state: &CollapsedState,
    list: &[Measurement],
    shots: u64,
    rng: &mut R,
) -> linresp::Result<Vec<ObservableReport>> {
    let opts = MeasureOptions::default();
    let mut out = Vec::new();
    for m in list {
        match m {
            Measurement::N1(id, a) => out.push(hadamard_test_n1(state, a, id, shots, rng, &opts)?.into()),
            Measurement::N2(id, a, b) => out.push(hadamard_test_n2(state, a, b, id, shots, rng, &opts)?.into()),
            Measurement::Conditional(id, a, b) => {
                let (stage_a, stage_b) = (format!("{id}:a"), format!("{id}:b|a"));
                let (first, second) = conditional_n2(state, a, b, (&stage_a, &stage_b), shots, rng, &opts)?;
                out.push(first.into());
                out.push(second.into());
            }
        }
    }
    Ok(out)
}

/// Collapses the prepared state on the selected outcomes and measures the
/// configured occupations on each.
pub fn run_finalstate(config: &RunConfig) -> CliResult<FinalStateReport> {
    let system = build_system(config)?;
    let w = register_qubits(config, &system.bounds)?;
    let gamma = resolve_gamma(config, &system)?;
    // Repeat-until-success states depend on the round count; the
    // single-rotation state stands in for them here.
    let state = match gamma {
        Some(g) => prepare_gamma(&system.o, &system.psi0, g, &prep_options(config))?.vector,
        None => system.phi.clone(),
    };
    let solver = LineSolver::new(&system.h_scaled, spectral_options(config, true))?;
    let lines = solver.lines(&state)?;
    let dist = pea_distribution(&lines, w)?;
    let outcomes = match (&config.finalstate.outcomes, config.finalstate.top_k) {
        (Some(list), _) => list.clone(),
        (None, k) => dist.top(k.unwrap_or(1)),
    };
    if outcomes.is_empty() {
        log::warn!("no outcomes selected; the final-state report is empty");
    }
    let list = measurements(config, &system.basis)?;
    let shots = if config.exact_only { 0 } else { config.finalstate.shots };
    let time = config.finalstate.evolve_time;
    let propagator = if time != 0.0 {
        Some(OperatorFunctions::new(&system.h, config.numerics.dense_cap)?)
    } else {
        None
    };
    let bin_width = system.bounds.delta_h / dist.bins() as f64;

    let mut reports = Vec::with_capacity(outcomes.len());
    for y in outcomes {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ OUTCOME_STREAM.wrapping_mul(y as u64 + 1));
        let result = collapse(&lines, w, y).and_then(|s| match &propagator {
            Some(p) => evolve_with(&s, p, time),
            None => Ok(s),
        });
        let measured = result.and_then(|s| Ok((s.p_y, measure(&s, &list, shots, &mut rng)?)));
        let omega_physical = y as f64 * bin_width;
        reports.push(match measured {
            Ok((p_y, observables)) => OutcomeReport {
                y,
                omega_physical,
                p_y: Some(p_y),
                observables,
                error: None,
            },
            Err(e) => {
                log::warn!("outcome {y}: {e}");
                OutcomeReport {
                    y,
                    omega_physical,
                    p_y: None,
                    observables: Vec::new(),
                    error: Some(CliError::Core(e).record("finalstate")),
                }
            }
        });
    }
    Ok(FinalStateReport {
        w_qubits: w,
        seed: config.seed,
        evolve_time: time,
        outcomes: reports,
    })
}

pub fn write_finalstate(report: &FinalStateReport, dir: &Path) -> CliResult<PathBuf> {
    write_file(dir, FINALSTATE_JSON, &to_json(report))
}

#[derive(Debug, Serialize)]
pub struct ResourceReport {
    pub delta_omega: f64,
    pub delta_h: f64,
    pub delta_s: f64,
    pub epsilon: f64,
    pub o_norm: f64,
    pub o_sq_expectation: f64,
    pub estimate: ResourceEstimate,
}

pub fn run_resources(config: &RunConfig) -> CliResult<ResourceReport> {
    let delta_s = config
        .resources
        .delta_s
        .or(config.prep.delta_s)
        .or(config.pea.delta)
        .ok_or_else(|| CliError::config("resources.delta_s", "needed (or prep.delta_s, or pea.delta)"))?;
    let epsilon = config
        .resources
        .epsilon
        .or(config.pea.epsilon)
        .ok_or_else(|| CliError::config("resources.epsilon", "needed (or pea.epsilon)"))?;
    let system = build_system(config)?;
    let delta_omega = match config.register()? {
        RegisterSpec::Resolution(d) => d,
        RegisterSpec::Qubits(w) => system.bounds.delta_h / (1u64 << w) as f64,
    };
    let o_norm = operator_norm(&system.o, &lanczos_options(config))?;
    let estimate = resource_estimate(&ResourceInputs {
        delta_omega,
        bounds: system.bounds,
        delta_s,
        epsilon,
        o_norm,
        o_sq_expectation: system.o_sq,
        c: config.prep.c,
        amplify: config.resources.amplify,
    })?;
    Ok(ResourceReport {
        delta_omega,
        delta_h: system.bounds.delta_h,
        delta_s,
        epsilon,
        o_norm,
        o_sq_expectation: system.o_sq,
        estimate,
    })
}

#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub dimension: usize,
    pub sites: usize,
    pub prep_mode: PrepMode,
}

pub fn validate_config(config: &RunConfig) -> CliResult<ValidationReport> {
    let basis = config.basis()?;
    Ok(ValidationReport {
        valid: true,
        dimension: basis.dimension(),
        sites: basis.geometry().sites(),
        prep_mode: config.prep.mode,
    })
}

pub fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report types serialize")
}
