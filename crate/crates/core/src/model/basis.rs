use super::lattice::LatticeGeometry;
use crate::error::{Error, Result};

/// Occupation patterns of one basis state; bit `i` is site `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub up: u64,
    pub dn: u64,
}

/// All configurations of a fixed `(n_up, n_dn)` sector, ordered
/// lexicographically on `(up, dn)` bit patterns read as integers.
#[derive(Clone, Debug, PartialEq)]
pub struct FockBasis {
    geometry: LatticeGeometry,
    n_up: usize,
    n_dn: usize,
    up_patterns: Vec<u64>,
    dn_patterns: Vec<u64>,
}

/// Refuse sectors larger than this many states.
pub const MAX_BASIS_DIMENSION: usize = 1 << 28;

impl FockBasis {
    pub fn new(geometry: LatticeGeometry, n_up: usize, n_dn: usize) -> Result<Self> {
        let m = geometry.sites();
        if m > 64 {
            return Err(Error::InvalidSector(format!(
                "{m} sites exceed the 64-bit occupation encoding"
            )));
        }
        if n_up > m || n_dn > m {
            return Err(Error::InvalidSector(format!(
                "particle counts ({n_up}, {n_dn}) exceed the {m} available sites"
            )));
        }
        let dim = binomial(m, n_up).checked_mul(binomial(m, n_dn));
        match dim {
            Some(d) if d <= MAX_BASIS_DIMENSION as u128 => {}
            _ => {
                return Err(Error::Capacity(format!(
                    "sector ({n_up}, {n_dn}) on {m} sites is larger than {MAX_BASIS_DIMENSION} states"
                )))
            }
        }
        Ok(Self {
            up_patterns: patterns(m, n_up),
            dn_patterns: patterns(m, n_dn),
            geometry,
            n_up,
            n_dn,
        })
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geometry
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn n_dn(&self) -> usize {
        self.n_dn
    }

    pub fn dimension(&self) -> usize {
        self.up_patterns.len() * self.dn_patterns.len()
    }

    pub fn state(&self, index: usize) -> Configuration {
        let nd = self.dn_patterns.len();
        Configuration {
            up: self.up_patterns[index / nd],
            dn: self.dn_patterns[index % nd],
        }
    }

    pub fn lookup(&self, config: Configuration) -> Option<usize> {
        let iu = self.up_patterns.binary_search(&config.up).ok()?;
        let id = self.dn_patterns.binary_search(&config.dn).ok()?;
        Some(iu * self.dn_patterns.len() + id)
    }

    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        self.up_patterns
            .iter()
            .flat_map(move |&up| self.dn_patterns.iter().map(move |&dn| Configuration { up, dn }))
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// All `m`-bit patterns with `k` bits set, ascending (Gosper's hack).
fn patterns(m: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    let limit: u128 = 1u128 << m;
    let mut out = Vec::with_capacity(binomial(m, k) as usize);
    let mut v: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    loop {
        if (v as u128) >= limit {
            break;
        }
        out.push(v);
        let t = v | (v.wrapping_sub(1));
        let tz = v.trailing_zeros();
        let Some(next_hi) = t.checked_add(1) else { break };
        let low = ((!t & next_hi).wrapping_sub(1)) >> (tz + 1);
        v = next_hi | low;
        if v == 0 {
            break;
        }
    }
    out
}
