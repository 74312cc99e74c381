use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular `lx × ly` lattice. Site `i` sits at `(i % lx, i / lx)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeGeometry {
    lx: usize,
    ly: usize,
    periodic: [bool; 2],
}

impl LatticeGeometry {
    pub fn new(lx: usize, ly: usize, periodic_x: bool, periodic_y: bool) -> Result<Self> {
        if lx == 0 || ly == 0 {
            return Err(Error::InvalidSector(format!(
                "lattice extent must be positive, got {lx}x{ly}"
            )));
        }
        Ok(Self {
            lx,
            ly,
            periodic: [periodic_x, periodic_y],
        })
    }

    /// Periodic in both directions.
    pub fn periodic(lx: usize, ly: usize) -> Result<Self> {
        Self::new(lx, ly, true, true)
    }

    /// Open in both directions.
    pub fn open(lx: usize, ly: usize) -> Result<Self> {
        Self::new(lx, ly, false, false)
    }

    pub fn lx(&self) -> usize {
        self.lx
    }

    pub fn ly(&self) -> usize {
        self.ly
    }

    pub fn is_periodic(&self, axis: usize) -> bool {
        self.periodic[axis]
    }

    /// Total number of sites `M`.
    pub fn sites(&self) -> usize {
        self.lx * self.ly
    }

    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site % self.lx, site / self.lx)
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        x + self.lx * y
    }

    /// Unordered nearest-neighbour pairs `(i, j)` with `i < j`, each listed once.
    ///
    /// On a periodic axis of length 2 the wrap-around bond coincides with the
    /// direct one and is not counted twice; an axis of length 1 has no bonds.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut set = BTreeSet::new();
        for site in 0..self.sites() {
            let (x, y) = self.coords(site);
            let mut push = |nx: usize, ny: usize| {
                let other = self.index(nx, ny);
                if other != site {
                    set.insert((site.min(other), site.max(other)));
                }
            };
            if x + 1 < self.lx {
                push(x + 1, y);
            } else if self.periodic[0] {
                push(0, y);
            }
            if y + 1 < self.ly {
                push(x, y + 1);
            } else if self.periodic[1] {
                push(x, 0);
            }
        }
        set.into_iter().collect()
    }
}

/// Lattice wave vector `(qx, qy)` in radians per lattice spacing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveVector {
    pub qx: f64,
    pub qy: f64,
}

impl WaveVector {
    pub fn new(qx: f64, qy: f64) -> Self {
        Self { qx, qy }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    /// `q = 2π (kx / lx, ky / ly)`, always commensurate.
    pub fn lattice(kx: i64, ky: i64, geometry: &LatticeGeometry) -> Self {
        Self::new(
            2.0 * PI * kx as f64 / geometry.lx as f64,
            2.0 * PI * ky as f64 / geometry.ly as f64,
        )
    }

    /// The `M` distinct lattice momenta in the first Brillouin zone, ordered
    /// `ky` major.
    pub fn brillouin_zone(geometry: &LatticeGeometry) -> Vec<Self> {
        let mut out = Vec::with_capacity(geometry.sites());
        for ky in 0..geometry.ly as i64 {
            for kx in 0..geometry.lx as i64 {
                out.push(Self::lattice(kx, ky, geometry));
            }
        }
        out
    }

    pub fn dot(&self, x: usize, y: usize) -> f64 {
        self.qx * x as f64 + self.qy * y as f64
    }

    /// Rejects components that are not multiples of `2π / L` along periodic axes.
    pub fn check_commensurate(&self, geometry: &LatticeGeometry) -> Result<()> {
        for (axis, (q, l)) in [(self.qx, geometry.lx), (self.qy, geometry.ly)].into_iter().enumerate() {
            if !q.is_finite() {
                return Err(Error::InvalidMomentum(format!("component {axis} is not finite")));
            }
            if geometry.periodic[axis] {
                let k = q * l as f64 / (2.0 * PI);
                if (k - k.round()).abs() > 1e-9 {
                    return Err(Error::InvalidMomentum(format!(
                        "q[{axis}] = {q} is not a multiple of 2π/{l} on a periodic axis"
                    )));
                }
            }
        }
        Ok(())
    }
}
