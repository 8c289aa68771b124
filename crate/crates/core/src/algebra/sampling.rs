use rand::Rng;
use rand_distr::StandardNormal;

use super::octonion::{Octonion, UnitOctonion};
use super::quaternion::{Quaternion, UnitQuaternion};
use crate::error::{Error, Result};

/// A uniformly drawn point of `S³` or `S⁷`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnitSample {
    Quaternion(UnitQuaternion),
    Octonion(UnitOctonion),
}

fn gaussian_direction<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> [f64; N] {
    loop {
        let v: [f64; N] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        // norm 0 has probability zero, but guard the division anyway
        if n2 > 1e-300 {
            let inv = 1.0 / n2.sqrt();
            return v.map(|x| x * inv);
        }
    }
}

/// Rotation-invariant sample on `S³`.
pub fn sample_unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> UnitQuaternion {
    let q = Quaternion::from_array(gaussian_direction::<4, _>(rng));
    UnitQuaternion::from_quaternion(q).expect("normalized gaussian is a unit")
}

/// Rotation-invariant sample on `S⁷`.
pub fn sample_unit_octonion<R: Rng + ?Sized>(rng: &mut R) -> UnitOctonion {
    let o = Octonion::new(gaussian_direction::<8, _>(rng));
    let o = o.scale(1.0 / o.norm());
    UnitOctonion::new(o).expect("normalized gaussian is a unit")
}

/// Samples the unit sphere of the 4- or 8-dimensional algebra.
pub fn sample_unit<R: Rng + ?Sized>(dimension: usize, rng: &mut R) -> Result<UnitSample> {
    match dimension {
        4 => Ok(UnitSample::Quaternion(sample_unit_quaternion(rng))),
        8 => Ok(UnitSample::Octonion(sample_unit_octonion(rng))),
        d => Err(Error::Domain(format!(
            "unit sampling supports dimension 4 or 8, got {d}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const N: usize = 100_000;

    fn coords(s: UnitSample) -> Vec<f64> {
        match s {
            UnitSample::Quaternion(q) => q.get().to_array().to_vec(),
            UnitSample::Octonion(o) => o.get().e.to_vec(),
        }
    }

    fn check_moments(dim: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mean = vec![0.0; dim];
        let mut first_sq = 0.0;
        let mut first_quart = 0.0;
        for _ in 0..N {
            let c = coords(sample_unit(dim, &mut rng).unwrap());
            let n2: f64 = c.iter().map(|x| x * x).sum();
            assert!((n2 - 1.0).abs() <= 1e-12);
            for (m, x) in mean.iter_mut().zip(&c) {
                *m += x;
            }
            first_sq += c[0] * c[0];
            first_quart += c[0].powi(4);
        }
        let n = N as f64;
        let sigma = 1.0 / ((dim as f64) * n).sqrt();
        for m in &mean {
            assert!((m / n).abs() < 4.0 * sigma, "coordinate mean {}", m / n);
        }
        let target = 1.0 / dim as f64;
        let var = first_quart / n - (first_sq / n).powi(2);
        let se = (var / n).sqrt();
        assert!((first_sq / n - target).abs() < 4.0 * se);
    }

    #[test]
    fn uniform_on_three_sphere() {
        check_moments(4, 1);
    }

    #[test]
    fn uniform_on_seven_sphere() {
        check_moments(8, 2);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = sample_unit(8, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = sample_unit(8, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
        assert!(sample_unit(3, &mut ChaCha8Rng::seed_from_u64(5)).is_err());
    }
}
