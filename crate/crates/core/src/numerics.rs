//! Complex arithmetic helpers, radix-2 FFT, seeded random streams and the
//! statistical oracles used to judge Monte-Carlo results.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Error, Result};

/// One complex baseband value.
pub type Sample = Complex64;

/// Precomputed twiddles and bit-reversal table for a power-of-two length.
///
/// Forward transform is unnormalized, `X[k] = sum x[n] exp(-j 2 pi k n / N)`;
/// the inverse carries the `1/N` factor.
#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    twiddles: Vec<Sample>,
    reversed: Vec<usize>,
}

impl Fft {
    pub fn new(len: usize) -> Result<Self> {
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Config(format!(
                "FFT length {len} is not a power of two >= 2"
            )));
        }
        let bits = len.trailing_zeros();
        let reversed = (0..len)
            .map(|i| i.reverse_bits() >> (usize::BITS - bits))
            .collect();
        let twiddles = (0..len / 2)
            .map(|k| {
                let (s, c) = (-2.0 * PI * k as f64 / len as f64).sin_cos();
                Sample::new(c, s)
            })
            .collect();
        Ok(Self {
            len,
            twiddles,
            reversed,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.len {
            return Err(Error::Config(format!(
                "FFT input length {n} does not match plan length {}",
                self.len
            )));
        }
        Ok(())
    }

    // Iterative decimation-in-time butterflies over a bit-reversed buffer.
    fn transform(&self, buf: &mut [Sample], inverse: bool) {
        for i in 0..self.len {
            let j = self.reversed[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for start in (0..self.len).step_by(2 * half) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }

    pub fn forward_in_place(&self, buf: &mut [Sample]) -> Result<()> {
        self.check(buf.len())?;
        self.transform(buf, false);
        Ok(())
    }

    pub fn inverse_in_place(&self, buf: &mut [Sample]) -> Result<()> {
        self.check(buf.len())?;
        self.transform(buf, true);
        let scale = 1.0 / self.len as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        Ok(())
    }

    pub fn forward(&self, x: &[Sample]) -> Result<Vec<Sample>> {
        let mut out = x.to_vec();
        self.forward_in_place(&mut out)?;
        Ok(out)
    }

    pub fn inverse(&self, x: &[Sample]) -> Result<Vec<Sample>> {
        let mut out = x.to_vec();
        self.inverse_in_place(&mut out)?;
        Ok(out)
    }
}

/// Unnormalized forward DFT of a power-of-two length sequence.
pub fn fft(x: &[Sample]) -> Result<Vec<Sample>> {
    Fft::new(x.len())?.forward(x)
}

/// Inverse DFT with the `1/N` factor.
pub fn ifft(x: &[Sample]) -> Result<Vec<Sample>> {
    Fft::new(x.len())?.inverse(x)
}

/// A reproducible random stream keyed by `(master_seed, stream_id)`.
///
/// Backed by ChaCha8 with the stream id selecting the cipher's stream word,
/// so streams are derived without touching each other and in any order.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    master_seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self {
            rng,
            master_seed,
            stream_id,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bit(&mut self) -> u8 {
        (self.rng.next_u64() >> 63) as u8
    }

    pub fn bits(&mut self, n: usize) -> Vec<u8> {
        (0..n).map(|_| self.bit()).collect()
    }

    /// Two independent standard normal variates (Box-Muller).
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        // 1 - u lies in (0, 1], keeping the log finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        (radius * c, radius * s)
    }

    /// Circular complex Gaussian with total variance `variance`.
    pub fn complex_gaussian(&mut self, variance: f64) -> Sample {
        let (a, b) = self.gaussian_pair();
        Sample::new(a, b) * (variance / 2.0).sqrt()
    }
}

/// Free-function form of [`RngStream::gaussian_pair`].
pub fn gaussian_pair(rng: &mut RngStream) -> (f64, f64) {
    rng.gaussian_pair()
}

/// Gaussian tail probability `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

/// Normal-approximation confidence interval for a binomial proportion,
/// clamped to `[0, 1]`.
pub fn binomial_ci(errors: u64, trials: u64, sigmas: f64) -> (f64, f64) {
    assert!(trials >= 1, "binomial_ci needs at least one trial");
    assert!(errors <= trials, "more errors than trials");
    let n = trials as f64;
    let p = errors as f64 / n;
    let half = sigmas * (p * (1.0 - p) / n).sqrt();
    ((p - half).clamp(0.0, 1.0), (p + half).clamp(0.0, 1.0))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn mean_power(x: &[Sample]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}
