//! Deterministic counter-based Wiener increments for parallel trajectories.
//!
//! Increment `k` of a stream is a pure function of `(seed, trajectory_index, k)`,
//! so trajectories can be generated in any order and on any number of threads
//! with bit-identical results.

use crate::scalar::Real;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 53-bit uniform in (0, 1].
fn uniform_open(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 / (1u64 << 53) as f64
}

/// Where a measurement record's increments came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecordProvenance {
    /// Counter-based stream.
    Counter { seed: u64, trajectory_index: u64 },
    /// All-zero innovation path (deterministic posterior flow).
    Zero,
    /// Supplied from outside the library.
    External,
}

/// Source of Wiener increments with variance `dt`.
pub trait NoiseSource<T: Real> {
    fn increment(&self, k: u64) -> T;
    fn provenance(&self) -> RecordProvenance;
}

/// Counter-based Gaussian stream: splitmix64 hashing plus Box-Muller.
#[derive(Debug, Clone, Copy)]
pub struct NoiseStream<T: Real> {
    pub seed: u64,
    pub trajectory_index: u64,
    pub dt: T,
}

impl<T: Real> NoiseStream<T> {
    pub fn new(seed: u64, trajectory_index: u64, dt: T) -> Self {
        Self { seed, trajectory_index, dt }
    }

    /// Standard normal draw for counter `k`.
    pub fn standard_normal(&self, k: u64) -> T {
        let base = mix64(
            self.seed ^ mix64(self.trajectory_index.wrapping_mul(GOLDEN).wrapping_add(1)),
        );
        let a = mix64(base ^ mix64(k.wrapping_mul(2)));
        let b = mix64(base ^ mix64(k.wrapping_mul(2) + 1));
        let u1 = uniform_open(a);
        let u2 = uniform_open(b);
        let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        T::of(z)
    }
}

impl<T: Real> NoiseSource<T> for NoiseStream<T> {
    fn increment(&self, k: u64) -> T {
        self.standard_normal(k) * self.dt.sqrt()
    }

    fn provenance(&self) -> RecordProvenance {
        RecordProvenance::Counter {
            seed: self.seed,
            trajectory_index: self.trajectory_index,
        }
    }
}

/// The deterministic `dW = 0` path.
#[derive(Debug, Clone, Copy)]
pub struct ZeroNoise;

impl<T: Real> NoiseSource<T> for ZeroNoise {
    fn increment(&self, _k: u64) -> T {
        T::zero()
    }

    fn provenance(&self) -> RecordProvenance {
        RecordProvenance::Zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_disjoint() {
        let s1: NoiseStream<f64> = NoiseStream::new(7, 0, 0.01);
        let s2: NoiseStream<f64> = NoiseStream::new(7, 0, 0.01);
        let s3: NoiseStream<f64> = NoiseStream::new(7, 1, 0.01);
        for k in 0..100 {
            assert_eq!(s1.increment(k), s2.increment(k));
            assert_ne!(s1.increment(k), s3.increment(k));
        }
    }

    #[test]
    fn moments_are_standard() {
        let s: NoiseStream<f64> = NoiseStream::new(123, 5, 1.0);
        let n = 100_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        let mut sum4 = 0.0;
        for k in 0..n {
            let z = s.standard_normal(k);
            sum += z;
            sum2 += z * z;
            sum4 += z.powi(4);
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        let kurt = sum4 / n as f64 / (var * var);
        assert!(mean.abs() < 0.02, "mean = {mean}");
        assert!((var - 1.0).abs() < 0.02, "var = {var}");
        assert!((kurt - 3.0).abs() < 0.1, "kurtosis = {kurt}");
    }

    #[test]
    fn variance_scales_with_dt() {
        let s: NoiseStream<f64> = NoiseStream::new(9, 2, 0.04);
        let n = 50_000;
        let var = (0..n).map(|k| s.increment(k).powi(2)).sum::<f64>() / n as f64;
        assert!((var - 0.04).abs() < 0.002, "var = {var}");
    }
}
