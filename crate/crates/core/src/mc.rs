//! Seeded, chunked Monte Carlo whose results do not depend on thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Samples drawn from one independent stream.
pub const CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl MonteCarloEstimate {
    /// `|mean - target| ≤ k·SE`, with a tiny floor for zero-variance runs.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + 1e-12
    }
}

/// Stream for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Mean and standard error of each component of `f` over `samples` draws.
///
/// Chunks run in parallel; their sums are combined in chunk order.
pub fn estimate<F>(samples: u64, seed: u64, dim: usize, f: F) -> Vec<MonteCarloEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let sums: Vec<(Vec<f64>, Vec<f64>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let (mut s, mut s2) = (vec![0.0; dim], vec![0.0; dim]);
            for _ in 0..CHUNK.min(samples - c * CHUNK) {
                for (k, v) in f(&mut rng).into_iter().enumerate() {
                    s[k] += v;
                    s2[k] += v * v;
                }
            }
            (s, s2)
        })
        .collect();
    let (mut s, mut s2) = (vec![0.0; dim], vec![0.0; dim]);
    for (a, b) in &sums {
        for k in 0..dim {
            s[k] += a[k];
            s2[k] += b[k];
        }
    }
    let n = samples as f64;
    (0..dim)
        .map(|k| {
            let mean = s[k] / n;
            let var = if samples > 1 {
                ((s2[k] - n * mean * mean) / (n - 1.0)).max(0.0)
            } else {
                0.0
            };
            MonteCarloEstimate {
                mean,
                std_error: (var / n).sqrt(),
                samples,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn uniform_mean() {
        let est = estimate(50_000, 1, 1, |rng| vec![rng.random::<f64>()]);
        assert!(est[0].within(0.5, 4.0), "{est:?}");
        assert!((est[0].std_error - (1.0f64 / 12.0 / 50_000.0).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn deterministic_and_constant() {
        let a = estimate(10_000, 9, 2, |rng| vec![rng.random::<f64>(), 2.0]);
        assert_eq!(
            a,
            estimate(10_000, 9, 2, |rng| vec![rng.random::<f64>(), 2.0])
        );
        assert_eq!(a[1].mean, 2.0);
        assert_eq!(a[1].std_error, 0.0);
    }
}
