//! Synthetic audio source: a 1 kHz unit sine sampled at 4 kHz, quantized to
//! 8-bit two's-complement PCM and serialized MSB first.

use std::f64::consts::PI;

use crate::{Error, Result};

pub const TONE_HZ: f64 = 1000.0;
pub const SOURCE_RATE_HZ: f64 = 4000.0;
/// Full-scale PCM code for amplitude 1.
pub const PCM_SCALE: f64 = 127.0;

fn pcm_sample(n: usize) -> i8 {
    let s = (2.0 * PI * TONE_HZ * n as f64 / SOURCE_RATE_HZ).sin();
    (s * PCM_SCALE).round().clamp(-128.0, 127.0) as i8
}

pub fn generate_source(n_bits: usize) -> Result<Vec<u8>> {
    if !n_bits.is_multiple_of(8) {
        return Err(Error::Config(format!(
            "audio source needs a multiple of 8 bits, got {n_bits}"
        )));
    }
    Ok((0..n_bits / 8)
        .flat_map(|n| {
            let byte = pcm_sample(n) as u8;
            (0..8).rev().map(move |b| (byte >> b) & 1)
        })
        .collect())
}

/// Decodes PCM bytes back to amplitudes in `[-1, 1]`; a trailing partial
/// byte is ignored.
pub fn reconstruct_sine(bits: &[u8]) -> Vec<f64> {
    bits.chunks_exact(8)
        .map(|byte| {
            let v = byte.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1));
            v as i8 as f64 / PCM_SCALE
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_period_samples() {
        let codes: Vec<i8> = (0..8).map(pcm_sample).collect();
        assert_eq!(codes, vec![0, 127, 0, -127, 0, 127, 0, -127]);
    }

    #[test]
    fn first_byte_is_zero() {
        let bits = generate_source(44_000).unwrap();
        assert_eq!(bits.len(), 44_000);
        assert_eq!(&bits[..8], &[0; 8]);
        assert_eq!(&bits[8..16], &[0, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(&bits[24..32], &[1, 0, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn round_trip_reproduces_quantized_wave() {
        let bits = generate_source(800).unwrap();
        let wave = reconstruct_sine(&bits);
        assert_eq!(wave.len(), 100);
        for (n, v) in wave.iter().enumerate() {
            assert_eq!(*v, pcm_sample(n) as f64 / PCM_SCALE);
        }
    }

    #[test]
    fn rejects_partial_bytes() {
        assert!(matches!(generate_source(12), Err(Error::Config(_))));
    }
}
