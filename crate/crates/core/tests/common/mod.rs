#![allow(dead_code)]

use linresp::linalg::{norm, HermitianEigen, StateVector};
use linresp::model::{
    build_density_excitation, build_hamiltonian, build_site_number, DensityExcitation, FockBasis, HubbardParams,
    LatticeGeometry, Spin, WaveVector,
};
use linresp::spectral::{ground_state, scale_hamiltonian, spectral_bounds, SpectralBounds, SpectralOptions};
use linresp::SparseOperator;
use num_complex::Complex64;

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Ground state, scaled Hamiltonian and a normalized excited state.
pub struct System {
    pub basis: FockBasis,
    pub h: SparseOperator,
    pub e0: f64,
    pub psi0: StateVector,
    pub bounds: SpectralBounds,
    pub h_scaled: SparseOperator,
    pub o: SparseOperator,
    pub phi: StateVector,
    pub o_sq: f64,
}

pub fn system(basis: FockBasis, params: HubbardParams, o: SparseOperator) -> System {
    let h = build_hamiltonian(&basis, params).unwrap();
    let opts = SpectralOptions::default();
    let gs = ground_state(&h, &opts.lanczos).unwrap();
    let bounds = spectral_bounds(&h, &opts).unwrap();
    let h_scaled = scale_hamiltonian(&h, &bounds).unwrap();
    let mut phi = o.mul_vec(&gs.vector);
    let n = norm(&phi);
    phi.iter_mut().for_each(|x| *x /= n);
    System {
        basis,
        h,
        e0: gs.energy,
        psi0: gs.vector,
        bounds,
        h_scaled,
        o,
        phi,
        o_sq: n * n,
    }
}

pub fn dimer_basis() -> FockBasis {
    FockBasis::new(LatticeGeometry::open(2, 1).unwrap(), 1, 1).unwrap()
}

/// Two-site chain at `t = 1`, probed by `n̂_1 − n̂_2`.
pub fn dimer(u: f64) -> System {
    let basis = dimer_basis();
    let o = build_density_excitation(
        &basis,
        &DensityExcitation::charge_cos(WaveVector::new(std::f64::consts::PI, 0.0)),
    )
    .unwrap();
    system(basis, HubbardParams { t: 1.0, u }, o)
}

/// Total density `n̂_{0↑} + n̂_{0↓}` on the first site.
pub fn site_density(basis: &FockBasis, site: usize) -> SparseOperator {
    let up = build_site_number(basis, site, Spin::Up);
    let dn = build_site_number(basis, site, Spin::Down);
    let values: Vec<f64> = up
        .diagonal_values()
        .iter()
        .zip(dn.diagonal_values())
        .map(|(a, b)| a.re + b.re)
        .collect();
    SparseOperator::diagonal(&values)
}

pub fn dense_eigen(op: &SparseOperator) -> HermitianEigen {
    HermitianEigen::of_operator(op).unwrap()
}

/// Single-particle hopping matrix built from coordinates alone: each site
/// is linked to its right and upper neighbour (wrapping when periodic),
/// and a repeated link is not counted twice.
pub fn tight_binding(geometry: &LatticeGeometry, t: f64) -> Vec<Vec<f64>> {
    let (lx, ly) = (geometry.lx(), geometry.ly());
    let m = lx * ly;
    let mut a = vec![vec![0.0; m]; m];
    for y in 0..ly {
        for x in 0..lx {
            let i = x + lx * y;
            let mut link = |j: usize| {
                if j != i {
                    a[i][j] = -t;
                    a[j][i] = -t;
                }
            };
            if x + 1 < lx {
                link(x + 1 + lx * y);
            } else if geometry.is_periodic(0) {
                link(lx * y);
            }
            if y + 1 < ly {
                link(x + lx * (y + 1));
            } else if geometry.is_periodic(1) {
                link(x);
            }
        }
    }
    a
}

/// Eigenvalues of a small real symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut e: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    e.sort_by(f64::total_cmp);
    e
}

/// All sums of `k` distinct entries of `levels`.
pub fn subset_sums(levels: &[f64], k: usize) -> Vec<f64> {
    fn go(levels: &[f64], k: usize, start: usize, acc: f64, out: &mut Vec<f64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..levels.len() {
            go(levels, k - 1, i + 1, acc + levels[i], out);
        }
    }
    let mut out = Vec::new();
    go(levels, k, 0, 0.0, &mut out);
    out
}
