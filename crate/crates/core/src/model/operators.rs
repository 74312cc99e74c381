use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{Configuration, FockBasis};
use super::lattice::WaveVector;
use crate::error::Result;
use crate::sparse::SparseOperator;

/// Hopping `t` and on-site interaction `u` of
/// `H = -t Σ_σ Σ_<ij> (c†_iσ c_jσ + h.c.) + U Σ_i n_i↑ n_i↓`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HubbardParams {
    pub t: f64,
    pub u: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    #[serde(rename = "up")]
    Up,
    #[serde(rename = "dn")]
    Down,
}

impl Spin {
    fn pattern(self, c: Configuration) -> u64 {
        match self {
            Spin::Up => c.up,
            Spin::Down => c.dn,
        }
    }

    fn with_pattern(self, c: Configuration, bits: u64) -> Configuration {
        match self {
            Spin::Up => Configuration { up: bits, dn: c.dn },
            Spin::Down => Configuration { up: c.up, dn: bits },
        }
    }
}

/// Spatial profile `f(q·r)` of a density excitation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Cos,
    Sin,
}

/// `Charge` sums both spin densities, `Spin` takes their difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinMode {
    Charge,
    Spin,
}

/// Hermitian density-fluctuation probe `Σ_j f(q·r_j) (n_j↑ ± n_j↓)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityExcitation {
    pub q: WaveVector,
    pub channel: Channel,
    pub spin_mode: SpinMode,
}

impl DensityExcitation {
    /// Charge-density cosine mode.
    pub fn charge_cos(q: WaveVector) -> Self {
        Self {
            q,
            channel: Channel::Cos,
            spin_mode: SpinMode::Charge,
        }
    }

    /// `f(q·r_j)` for every site.
    pub fn site_profile(&self, basis: &FockBasis) -> Vec<f64> {
        let g = basis.geometry();
        (0..g.sites())
            .map(|j| {
                let (x, y) = g.coords(j);
                let phase = self.q.dot(x, y);
                match self.channel {
                    Channel::Cos => phase.cos(),
                    Channel::Sin => phase.sin(),
                }
            })
            .collect()
    }
}

/// Parity of occupied modes strictly between sites `i` and `j`.
fn hop_sign(bits: u64, i: usize, j: usize) -> f64 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    if hi - lo <= 1 {
        return 1.0;
    }
    let between = ((1u64 << hi) - 1) & !((1u64 << (lo + 1)) - 1);
    if (bits & between).count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `c†_i c_j` on one spin species: the new pattern and its fermionic sign.
/// Modes are ordered by site index, up spins before down spins; the
/// intervening up-spin string cancels for down-spin hops.
fn hop(bits: u64, i: usize, j: usize) -> Option<(u64, f64)> {
    if bits & (1 << j) == 0 {
        return None;
    }
    if i == j {
        return Some((bits, 1.0));
    }
    if bits & (1 << i) != 0 {
        return None;
    }
    Some(((bits & !(1 << j)) | (1 << i), hop_sign(bits, i, j)))
}

/// Hubbard Hamiltonian on a fixed sector.
pub fn build_hamiltonian(basis: &FockBasis, params: HubbardParams) -> Result<SparseOperator> {
    let bonds = basis.geometry().bonds();
    SparseOperator::from_hermitian_columns(basis.dimension(), |col| {
        let c = basis.state(col);
        let mut out = Vec::new();
        let doubly = (c.up & c.dn).count_ones() as f64;
        if doubly != 0.0 && params.u != 0.0 {
            out.push((col, Complex64::new(params.u * doubly, 0.0)));
        }
        if params.t != 0.0 {
            for spin in [Spin::Up, Spin::Down] {
                let bits = spin.pattern(c);
                for &(a, b) in &bonds {
                    for (i, j) in [(a, b), (b, a)] {
                        if let Some((nb, sign)) = hop(bits, i, j) {
                            let row = basis
                                .lookup(spin.with_pattern(c, nb))
                                .expect("hopping conserves the sector");
                            out.push((row, Complex64::new(-params.t * sign, 0.0)));
                        }
                    }
                }
            }
        }
        out
    })
}

/// Diagonal density excitation operator.
pub fn build_density_excitation(basis: &FockBasis, excitation: &DensityExcitation) -> Result<SparseOperator> {
    excitation.q.check_commensurate(basis.geometry())?;
    let profile = excitation.site_profile(basis);
    let sign = match excitation.spin_mode {
        SpinMode::Charge => 1.0,
        SpinMode::Spin => -1.0,
    };
    let values: Vec<f64> = basis
        .iter()
        .map(|c| {
            profile
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    let nu = ((c.up >> j) & 1) as f64;
                    let nd = ((c.dn >> j) & 1) as f64;
                    f * (nu + sign * nd)
                })
                .sum()
        })
        .collect();
    Ok(SparseOperator::diagonal(&values))
}

/// Occupation `n_{site,σ}` of a single site.
pub fn build_site_number(basis: &FockBasis, site: usize, spin: Spin) -> SparseOperator {
    let values: Vec<f64> = basis.iter().map(|c| ((spin.pattern(c) >> site) & 1) as f64).collect();
    SparseOperator::diagonal(&values)
}

/// Plane-wave mode occupation
/// `n(p, σ) = (1/M) Σ_ij e^{i p·(r_i − r_j)} c†_iσ c_jσ`, a projector.
pub fn build_momentum_number(basis: &FockBasis, p: WaveVector, spin: Spin) -> Result<SparseOperator> {
    let g = basis.geometry();
    p.check_commensurate(g)?;
    let m = g.sites();
    let phases: Vec<Complex64> = (0..m)
        .map(|s| {
            let (x, y) = g.coords(s);
            Complex64::from_polar(1.0 / (m as f64).sqrt(), p.dot(x, y))
        })
        .collect();
    SparseOperator::from_hermitian_columns(basis.dimension(), |col| {
        let c = basis.state(col);
        let bits = spin.pattern(c);
        let mut out = Vec::new();
        for j in (0..m).filter(|&j| bits & (1 << j) != 0) {
            for i in 0..m {
                if let Some((nb, sign)) = hop(bits, i, j) {
                    let row = basis.lookup(spin.with_pattern(c, nb)).expect("sector preserved");
                    out.push((row, phases[i] * phases[j].conj() * sign));
                }
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermitianEigen;
    use crate::model::LatticeGeometry;

    fn dimer() -> FockBasis {
        FockBasis::new(LatticeGeometry::open(2, 1).unwrap(), 1, 1).unwrap()
    }

    #[test]
    fn single_site_is_pure_interaction() {
        let b = FockBasis::new(LatticeGeometry::periodic(1, 1).unwrap(), 1, 1).unwrap();
        let h = build_hamiltonian(&b, HubbardParams { t: 1.0, u: 5.0 }).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.get(0, 0), Complex64::new(5.0, 0.0));
    }

    #[test]
    fn dimer_spectrum_is_analytic() {
        let (t, u) = (1.0, -2.0);
        let h = build_hamiltonian(&dimer(), HubbardParams { t, u }).unwrap();
        assert_eq!(h.hermiticity_defect(), 0.0);
        let e = HermitianEigen::of_operator(&h).unwrap();
        let root = (u * u + 16.0 * t * t).sqrt();
        let mut expected = vec![0.0, u, (u - root) / 2.0, (u + root) / 2.0];
        expected.sort_by(f64::total_cmp);
        for (a, b) in e.values().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!((e.values()[0] - (-1.0 - 5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn hop_sign_counts_intervening_fermions() {
        // sites 0..4, particle at 0 and 2, hop 0 -> 3 passes site 2
        assert_eq!(hop(0b0101, 3, 0), Some((0b1100, -1.0)));
        assert_eq!(hop(0b0101, 1, 0), Some((0b0110, 1.0)));
        assert_eq!(hop(0b0101, 2, 0), None);
        assert_eq!(hop(0b0100, 0, 2), Some((0b0001, 1.0)));
    }

    #[test]
    fn dimer_density_at_pi_is_imbalance() {
        let b = dimer();
        let q = WaveVector::new(std::f64::consts::PI, 0.0);
        let o = build_density_excitation(&b, &DensityExcitation::charge_cos(q)).unwrap();
        // basis: (up, dn) in {01,10}², ordered (01,01) (01,10) (10,01) (10,10)
        let expected = [2.0, 0.0, 0.0, -2.0];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(o.get(i, i).re, *e);
        }
        assert!(o.is_diagonal());
    }

    #[test]
    fn zero_momentum_charge_is_particle_number() {
        let b = FockBasis::new(LatticeGeometry::periodic(3, 2).unwrap(), 2, 1).unwrap();
        let o = build_density_excitation(&b, &DensityExcitation::charge_cos(WaveVector::zero())).unwrap();
        assert!(o.diagonal_values().iter().all(|v| (v.re - 3.0).abs() < 1e-15));
        let spin = DensityExcitation {
            spin_mode: SpinMode::Spin,
            ..DensityExcitation::charge_cos(WaveVector::zero())
        };
        let sz = build_density_excitation(&b, &spin).unwrap();
        assert!(sz.diagonal_values().iter().all(|v| (v.re - 1.0).abs() < 1e-15));
    }

    #[test]
    fn incommensurate_momentum_is_rejected() {
        let b = FockBasis::new(LatticeGeometry::periodic(4, 4).unwrap(), 1, 1).unwrap();
        let err = build_momentum_number(&b, WaveVector::new(0.5, 0.0), Spin::Up).unwrap_err();
        assert_eq!(err.code(), "invalid_momentum");
        assert!(build_density_excitation(&b, &DensityExcitation::charge_cos(WaveVector::new(0.5, 0.0))).is_err());
    }

    #[test]
    fn site_number_is_diagonal_projector() {
        let b = dimer();
        let n = build_site_number(&b, 1, Spin::Down);
        let d: Vec<f64> = n.diagonal_values().iter().map(|v| v.re).collect();
        assert_eq!(d, vec![0.0, 1.0, 0.0, 1.0]);
    }
}
