//! Declarative run description, read from TOML.

use std::path::{Path, PathBuf};

use linresp::model::{
    Channel, DensityExcitation, FockBasis, HubbardParams, LatticeGeometry, Spin, SpinMode, WaveVector,
};
use linresp::response::MAX_W_QUBITS;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    /// Skip sampling; only exact distributions and expectations are written.
    #[serde(default)]
    pub exact_only: bool,
    pub geometry: GeometryConfig,
    pub params: ParamsConfig,
    pub sector: SectorConfig,
    pub excitation: ExcitationConfig,
    #[serde(default)]
    pub prep: PrepConfig,
    pub pea: PeaConfig,
    #[serde(default)]
    pub finalstate: FinalStateConfig,
    #[serde(default)]
    pub resources: ResourcesConfig,
    #[serde(default)]
    pub numerics: NumericsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub lx: usize,
    pub ly: usize,
    #[serde(default = "yes")]
    pub periodic_x: bool,
    #[serde(default = "yes")]
    pub periodic_y: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub t: f64,
    pub u: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorConfig {
    pub n_up: usize,
    pub n_dn: usize,
}

/// Wave vector either in radians (`q`) or as lattice indices (`k`, meaning
/// `q = 2π k / L`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitationConfig {
    pub q: Option<[f64; 2]>,
    pub k: Option<[i64; 2]>,
    #[serde(default = "cos")]
    pub channel: Channel,
    #[serde(default = "charge")]
    pub spin_mode: SpinMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrepMode {
    Exact,
    Gamma,
    RepeatUntilSuccess,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepConfig {
    #[serde(default = "exact")]
    pub mode: PrepMode,
    pub gamma: Option<f64>,
    /// Target precision; sets `γ = C √δ_S / ‖O‖` when `gamma` is absent.
    pub delta_s: Option<f64>,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "max_rounds")]
    pub max_rounds: usize,
}

impl Default for PrepConfig {
    fn default() -> Self {
        Self {
            mode: PrepMode::Exact,
            gamma: None,
            delta_s: None,
            c: 1.0,
            max_rounds: max_rounds(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeaConfig {
    pub w: Option<u32>,
    pub delta_omega: Option<f64>,
    pub samples: Option<u64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
}

/// A momentum mode `(2π k / L, σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub k: [i64; 2],
    pub spin: Spin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableKind {
    N1,
    N2,
    Conditional,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableConfig {
    pub kind: ObservableKind,
    pub id: Option<String>,
    pub a: ModeConfig,
    pub b: Option<ModeConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinalStateConfig {
    /// Explicit outcomes; otherwise the `top_k` most probable ones.
    pub outcomes: Option<Vec<usize>>,
    pub top_k: Option<usize>,
    #[serde(default = "shots")]
    pub shots: u64,
    #[serde(default)]
    pub evolve_time: f64,
    /// Defaults to every `n1(p, σ)` in the Brillouin zone.
    #[serde(default)]
    pub observables: Vec<ObservableConfig>,
}

impl Default for FinalStateConfig {
    fn default() -> Self {
        Self {
            outcomes: None,
            top_k: None,
            shots: shots(),
            evolve_time: 0.0,
            observables: Vec::new(),
        }
    }
}

/// Inputs of the `resources` verb; missing values fall back to
/// `prep.delta_s`, `pea.delta` and `pea.epsilon`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourcesConfig {
    pub delta_s: Option<f64>,
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub amplify: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    /// Largest dimension diagonalized densely.
    #[serde(default = "dense_cap")]
    pub dense_cap: usize,
    #[serde(default = "lanczos_tol")]
    pub lanczos_tol: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            dense_cap: dense_cap(),
            lanczos_tol: lanczos_tol(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "out_dir")]
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: out_dir() }
    }
}

fn yes() -> bool {
    true
}
fn cos() -> Channel {
    Channel::Cos
}
fn charge() -> SpinMode {
    SpinMode::Charge
}
fn exact() -> PrepMode {
    PrepMode::Exact
}
fn one() -> f64 {
    1.0
}
fn max_rounds() -> usize {
    10_000
}
fn shots() -> u64 {
    1000
}
fn dense_cap() -> usize {
    linresp::spectral::SpectralOptions::default().dense_cap
}
fn lanczos_tol() -> f64 {
    linresp::spectral::LanczosOptions::default().tol
}
fn out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn finite(field: &str, v: f64) -> CliResult<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be finite, got {v}")))
    }
}

fn positive(field: &str, v: f64) -> CliResult<()> {
    finite(field, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be positive, got {v}")))
    }
}

fn unit_interval(field: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must lie in (0, 1), got {v}")))
    }
}

/// How the sample count is fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleSpec {
    Count(u64),
    Hoeffding { delta: f64, epsilon: f64 },
}

/// How the register size is fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RegisterSpec {
    Qubits(u32),
    Resolution(f64),
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> CliResult<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text, path)
    }

    /// Checks every cross-field invariant; errors name the offending field.
    pub fn validate(&self) -> CliResult<()> {
        let g = &self.geometry;
        if g.lx == 0 {
            return Err(CliError::config("geometry.lx", "must be at least 1"));
        }
        if g.ly == 0 {
            return Err(CliError::config("geometry.ly", "must be at least 1"));
        }
        if g.lx * g.ly > 64 {
            return Err(CliError::config("geometry", "at most 64 sites are supported"));
        }
        finite("params.t", self.params.t)?;
        finite("params.u", self.params.u)?;
        let sites = g.lx * g.ly;
        if self.sector.n_up > sites {
            return Err(CliError::config("sector.n_up", format!("exceeds the {sites} sites")));
        }
        if self.sector.n_dn > sites {
            return Err(CliError::config("sector.n_dn", format!("exceeds the {sites} sites")));
        }

        match (&self.excitation.q, &self.excitation.k) {
            (Some(q), None) => {
                finite("excitation.q", q[0])?;
                finite("excitation.q", q[1])?;
            }
            (None, Some(_)) => {}
            _ => {
                return Err(CliError::config(
                    "excitation.q",
                    "give exactly one of excitation.q and excitation.k",
                ))
            }
        }
        self.wave_vector()?
            .check_commensurate(&self.lattice()?)
            .map_err(|e| CliError::config("excitation.q", e.to_string()))?;

        let p = &self.prep;
        positive("prep.c", p.c)?;
        if p.max_rounds == 0 {
            return Err(CliError::config("prep.max_rounds", "must be at least 1"));
        }
        if let Some(gamma) = p.gamma {
            positive("prep.gamma", gamma)?;
        }
        if let Some(d) = p.delta_s {
            unit_interval("prep.delta_s", d)?;
        }
        if p.mode != PrepMode::Exact && p.gamma.is_some() == p.delta_s.is_some() {
            return Err(CliError::config(
                "prep.gamma",
                "gamma and repeat-until-success modes need exactly one of prep.gamma and prep.delta_s",
            ));
        }

        self.register()?;
        self.samples()?;

        let f = &self.finalstate;
        if f.outcomes.is_some() && f.top_k.is_some() {
            return Err(CliError::config(
                "finalstate.outcomes",
                "give at most one of finalstate.outcomes and finalstate.top_k",
            ));
        }
        finite("finalstate.evolve_time", f.evolve_time)?;
        for (i, obs) in f.observables.iter().enumerate() {
            if obs.kind != ObservableKind::N1 && obs.b.is_none() {
                return Err(CliError::config(
                    &format!("finalstate.observables[{i}].b"),
                    "required for n2 and conditional",
                ));
            }
        }

        let r = &self.resources;
        if let Some(d) = r.delta_s {
            unit_interval("resources.delta_s", d)?;
        }
        if let Some(e) = r.epsilon {
            unit_interval("resources.epsilon", e)?;
        }
        positive("numerics.lanczos_tol", self.numerics.lanczos_tol)?;
        Ok(())
    }

    pub fn register(&self) -> CliResult<RegisterSpec> {
        match (self.pea.w, self.pea.delta_omega) {
            (Some(w), None) => {
                if w == 0 || w > MAX_W_QUBITS {
                    return Err(CliError::config(
                        "pea.w",
                        format!("must lie in 1..={MAX_W_QUBITS}, got {w}"),
                    ));
                }
                Ok(RegisterSpec::Qubits(w))
            }
            (None, Some(d)) => {
                positive("pea.delta_omega", d)?;
                Ok(RegisterSpec::Resolution(d))
            }
            _ => Err(CliError::config(
                "pea.w",
                "give exactly one of pea.w and pea.delta_omega",
            )),
        }
    }

    pub fn samples(&self) -> CliResult<SampleSpec> {
        let pea = &self.pea;
        match (pea.samples, pea.delta, pea.epsilon) {
            (Some(n), None, None) => {
                if n == 0 {
                    return Err(CliError::config("pea.samples", "must be at least 1"));
                }
                Ok(SampleSpec::Count(n))
            }
            (None, Some(delta), Some(epsilon)) => {
                unit_interval("pea.delta", delta)?;
                unit_interval("pea.epsilon", epsilon)?;
                Ok(SampleSpec::Hoeffding { delta, epsilon })
            }
            (None, Some(_), None) => Err(CliError::config("pea.epsilon", "required together with pea.delta")),
            (None, None, Some(_)) => Err(CliError::config("pea.delta", "required together with pea.epsilon")),
            _ => Err(CliError::config(
                "pea.samples",
                "give exactly one of pea.samples and the pair (pea.delta, pea.epsilon)",
            )),
        }
    }

    pub fn lattice(&self) -> CliResult<LatticeGeometry> {
        let g = &self.geometry;
        LatticeGeometry::new(g.lx, g.ly, g.periodic_x, g.periodic_y)
            .map_err(|e| CliError::config("geometry", e.to_string()))
    }

    pub fn basis(&self) -> CliResult<FockBasis> {
        FockBasis::new(self.lattice()?, self.sector.n_up, self.sector.n_dn)
            .map_err(|e| CliError::config("sector", e.to_string()))
    }

    pub fn hubbard(&self) -> HubbardParams {
        HubbardParams {
            t: self.params.t,
            u: self.params.u,
        }
    }

    pub fn wave_vector(&self) -> CliResult<WaveVector> {
        let geometry = self.lattice()?;
        Ok(match (self.excitation.q, self.excitation.k) {
            (Some(q), _) => WaveVector::new(q[0], q[1]),
            (None, Some(k)) => WaveVector::lattice(k[0], k[1], &geometry),
            (None, None) => return Err(CliError::config("excitation.q", "missing")),
        })
    }

    pub fn density_excitation(&self) -> CliResult<DensityExcitation> {
        Ok(DensityExcitation {
            q: self.wave_vector()?,
            channel: self.excitation.channel,
            spin_mode: self.excitation.spin_mode,
        })
    }

    /// Command-line overrides.
    pub fn apply_overrides(&mut self, seed: Option<u64>, exact_only: bool, out: Option<PathBuf>) {
        if let Some(s) = seed {
            self.seed = s;
        }
        self.exact_only |= exact_only;
        if let Some(dir) = out {
            self.output.dir = dir;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIMER: &str = r#"
        seed = 3
        [geometry]
        lx = 2
        ly = 1
        periodic_x = false
        periodic_y = false
        [params]
        t = 1.0
        u = -2.0
        [sector]
        n_up = 1
        n_dn = 1
        [excitation]
        k = [1, 0]
        [pea]
        w = 6
        samples = 500
    "#;

    fn parse(text: &str) -> CliResult<RunConfig> {
        RunConfig::from_toml(text, Path::new("test.toml"))
    }

    fn field_of(err: CliError) -> String {
        match err {
            CliError::Config { field, .. } => field,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn minimal_dimer_parses() {
        let c = parse(DIMER).unwrap();
        assert_eq!(c.register().unwrap(), RegisterSpec::Qubits(6));
        assert_eq!(c.samples().unwrap(), SampleSpec::Count(500));
        assert_eq!(c.prep.mode, PrepMode::Exact);
        assert!((c.wave_vector().unwrap().qx - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn register_and_samples_are_exclusive() {
        let both = DIMER.replace("w = 6", "w = 6\ndelta_omega = 0.1");
        assert_eq!(field_of(parse(&both).unwrap_err()), "pea.w");
        let none = DIMER.replace("w = 6", "");
        assert_eq!(field_of(parse(&none).unwrap_err()), "pea.w");
        let mixed = DIMER.replace("samples = 500", "samples = 500\ndelta = 0.05\nepsilon = 0.05");
        assert_eq!(field_of(parse(&mixed).unwrap_err()), "pea.samples");
        let half = DIMER.replace("samples = 500", "delta = 0.05");
        assert_eq!(field_of(parse(&half).unwrap_err()), "pea.epsilon");
        let hoeffding = DIMER.replace("samples = 500", "delta = 0.05\nepsilon = 0.05");
        assert!(parse(&hoeffding).is_ok());
    }

    #[test]
    fn invalid_fields_are_named() {
        let cases = [
            ("u = -2.0", "u = nan", "params.u"),
            ("n_up = 1", "n_up = 3", "sector.n_up"),
            ("w = 6", "w = 0", "pea.w"),
            ("samples = 500", "samples = 0", "pea.samples"),
            ("k = [1, 0]", "k = [1, 0]\nq = [0.0, 0.0]", "excitation.q"),
        ];
        for (from, to, field) in cases {
            assert_eq!(field_of(parse(&DIMER.replace(from, to)).unwrap_err()), field, "{to}");
        }
        let gamma_mode = format!("{DIMER}\n[prep]\nmode = \"gamma\"\n");
        assert_eq!(field_of(parse(&gamma_mode).unwrap_err()), "prep.gamma");
        let negative = format!("{DIMER}\n[prep]\nmode = \"gamma\"\ngamma = -0.1\n");
        assert_eq!(field_of(parse(&negative).unwrap_err()), "prep.gamma");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let typo = DIMER.replace("samples = 500", "sample = 500");
        assert!(matches!(parse(&typo).unwrap_err(), CliError::Parse { .. }));
    }

    #[test]
    fn incommensurate_wave_vector_on_a_ring() {
        let ring = DIMER
            .replace("periodic_x = false", "periodic_x = true")
            .replace("k = [1, 0]", "q = [1.0, 0.0]");
        assert_eq!(field_of(parse(&ring).unwrap_err()), "excitation.q");
    }
}
