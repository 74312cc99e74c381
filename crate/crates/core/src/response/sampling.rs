use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::pea::PeaDistribution;
use crate::error::{Error, Result};

/// Outcome counts of `n` independent phase-estimation runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleHistogram {
    pub counts: Vec<u64>,
    pub n: u64,
    pub seed: u64,
}

impl SampleHistogram {
    /// Relative frequencies `h_N(y) = counts(y) / n`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.n as f64).collect()
    }
}

/// Draws `n` outcomes from `dist` with a ChaCha8 stream seeded by `seed`.
pub fn sample(dist: &PeaDistribution, n: u64, seed: u64) -> Result<SampleHistogram> {
    if n == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    let index = WeightedIndex::new(dist.probabilities())
        .map_err(|e| Error::Numerical(format!("cannot sample distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.bins()];
    for _ in 0..n {
        counts[index.sample(&mut rng)] += 1;
    }
    Ok(SampleHistogram { counts, n, seed })
}

/// `⌈ln(2/ε) / (2δ²)⌉` samples bound each bin's error by `δ` with
/// probability at least `1 − ε`.
pub fn hoeffding_n(delta: f64, epsilon: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(((2.0 / epsilon).ln() / (2.0 * delta * delta)).ceil() as u64)
}

/// `δ_max = max_y |h_N(y) − P(y)|`.
pub fn max_error(hist: &SampleHistogram, dist: &PeaDistribution) -> Result<f64> {
    if hist.counts.len() != dist.bins() {
        return Err(Error::DimensionMismatch {
            expected: dist.bins(),
            found: hist.counts.len(),
        });
    }
    Ok(hist
        .frequencies()
        .iter()
        .zip(dist.probabilities())
        .fold(0.0, |m, (h, p)| m.max((h - p).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hoeffding_counts() {
        assert_eq!(hoeffding_n(0.05, 0.05).unwrap(), 738);
        assert_eq!(hoeffding_n(0.01, 0.05).unwrap(), 18445);
        assert!(hoeffding_n(0.0, 0.05).is_err());
        assert!(hoeffding_n(0.1, 1.0).is_err());
    }

    #[test]
    fn point_mass_sampling() {
        let d = PeaDistribution::from_probabilities(2, vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let h = sample(&d, 500, 3).unwrap();
        assert_eq!(h.counts, vec![0, 0, 500, 0]);
        assert_eq!(max_error(&h, &d).unwrap(), 0.0);
        assert_eq!(sample(&d, 0, 3).unwrap_err().code(), "domain");
    }

    #[test]
    fn reproducible_given_seed() {
        let d = PeaDistribution::from_probabilities(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(sample(&d, 1000, 7).unwrap(), sample(&d, 1000, 7).unwrap());
        assert_ne!(sample(&d, 1000, 7).unwrap().counts, sample(&d, 1000, 8).unwrap().counts);
    }
}
