//! Fat-tailed mutation-length distribution.
//!
//! Lengths `k >= 1` are drawn with mass proportional to
//! `1 / ((k + 2) * log2(k + 2)^2)`, truncated at `k_max` and renormalized.
//! Sampling is by inverse CDF over the precomputed cumulative masses.

use rand::Rng;

/// Unnormalized mass of mutation length `k`.
pub fn unnormalized_mass(k: usize) -> f64 {
    let x = (k + 2) as f64;
    let l = x.log2();
    1.0 / (x * l * l)
}

#[derive(Debug, Clone)]
pub struct FatTailSampler {
    cdf: Vec<f64>,
}

impl FatTailSampler {
    pub fn new(k_max: usize) -> FatTailSampler {
        let k_max = k_max.max(1);
        let mut cdf = Vec::with_capacity(k_max);
        let mut acc = 0.0;
        for k in 1..=k_max {
            acc += unnormalized_mass(k);
            cdf.push(acc);
        }
        let total = acc;
        cdf.iter_mut().for_each(|c| *c /= total);
        *cdf.last_mut().unwrap() = 1.0;
        FatTailSampler { cdf }
    }

    pub fn k_max(&self) -> usize {
        self.cdf.len()
    }

    /// Normalized probability of length `k` (0 outside `1..=k_max`).
    pub fn probability(&self, k: usize) -> f64 {
        match k {
            0 => 0.0,
            1 => self.cdf[0],
            k if k <= self.cdf.len() => self.cdf[k - 1] - self.cdf[k - 2],
            _ => 0.0,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        // first index with cdf > u
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1) + 1
    }
}

/// Draw one mutation length in `1..=k_max`.
pub fn sample_k<R: Rng + ?Sized>(rng: &mut R, k_max: usize) -> usize {
    FatTailSampler::new(k_max).sample(rng)
}
