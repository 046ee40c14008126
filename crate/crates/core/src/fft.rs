//! Minimal radix-2 complex FFT, generic over the scalar type.
//!
//! Grid sizes used by the split-step propagator and the spectral moment
//! overlaps are powers of two, so a plain iterative Cooley-Tukey is enough.

use crate::scalar::{cplx, Cplx, Real};

/// In-place forward transform. `data.len()` must be a power of two.
pub fn fft<T: Real>(data: &mut [Cplx<T>]) {
    transform(data, false);
}

/// In-place inverse transform, including the 1/n normalization.
pub fn ifft<T: Real>(data: &mut [Cplx<T>]) {
    transform(data, true);
    let scale = T::one() / T::from_usize(data.len()).unwrap();
    for z in data.iter_mut() {
        *z = z.scale(scale);
    }
}

fn transform<T: Real>(data: &mut [Cplx<T>], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");

    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }

    let sign = if inverse { T::one() } else { -T::one() };
    let mut len = 2usize;
    while len <= n {
        let ang = sign * T::of(2.0) * T::PI() / T::from_usize(len).unwrap();
        let wlen = cplx(ang.cos(), ang.sin());
        let half = len / 2;
        for start in (0..n).step_by(len) {
            let mut w = cplx(T::one(), T::zero());
            for k in 0..half {
                let u = data[start + k];
                let v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
                w = w * wlen;
            }
        }
        len <<= 1;
    }
}

/// Angular wavenumber for FFT bin `k` on a domain of length `l`.
pub fn wavenumber<T: Real>(k: usize, n: usize, l: T) -> T {
    let two_pi = T::of(2.0) * T::PI();
    let k_signed = if k <= n / 2 {
        T::from_usize(k).unwrap()
    } else {
        T::from_usize(k).unwrap() - T::from_usize(n).unwrap()
    };
    two_pi * k_signed / l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut data: Vec<Cplx<f64>> = (0..64)
            .map(|i| cplx((i as f64).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let orig = data.clone();
        fft(&mut data);
        ifft(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode() {
        // e^{2 pi i 3 j / n} transforms to a delta at bin 3
        let n = 32;
        let mut data: Vec<Cplx<f64>> = (0..n)
            .map(|j| {
                let ang = 2.0 * std::f64::consts::PI * 3.0 * j as f64 / n as f64;
                cplx(ang.cos(), ang.sin())
            })
            .collect();
        fft(&mut data);
        for (k, z) in data.iter().enumerate() {
            let expect = if k == 3 { n as f64 } else { 0.0 };
            assert!((z.re - expect).abs() < 1e-9, "bin {k}");
            assert!(z.im.abs() < 1e-9);
        }
    }

    #[test]
    fn wavenumber_signs() {
        let n = 8;
        let l = 4.0f64;
        assert_eq!(wavenumber(0, n, l), 0.0);
        assert!(wavenumber(1, n, l) > 0.0);
        assert!(wavenumber(7, n, l) < 0.0);
        assert_eq!(wavenumber(7, n, l), -wavenumber(1, n, l));
    }
}
