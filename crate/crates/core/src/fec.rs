//! Rate-1/2, constraint-length-7 convolutional code (generators 171 and 133
//! octal) with zero-tail termination and a hard-decision Viterbi decoder.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvCodeSpec {
    pub constraint_length: usize,
    /// Generator polynomials; bit `K-1` taps the current input.
    pub generators: [u32; 2],
}

impl ConvCodeSpec {
    pub const K7: ConvCodeSpec = ConvCodeSpec {
        constraint_length: 7,
        generators: [0o171, 0o133],
    };

    pub fn memory(&self) -> usize {
        self.constraint_length - 1
    }

    pub fn n_states(&self) -> usize {
        1 << self.memory()
    }

    pub fn rate(&self) -> f64 {
        0.5
    }

    /// Coded length for `n` message bits including the tail.
    pub fn coded_len(&self, n: usize) -> usize {
        2 * (n + self.memory())
    }

    // State holds the previous K-1 inputs, most recent in the top bit.
    fn outputs(&self, state: usize, bit: u8) -> (u8, u8) {
        let reg = ((bit as u32) << self.memory()) | state as u32;
        (
            ((reg & self.generators[0]).count_ones() & 1) as u8,
            ((reg & self.generators[1]).count_ones() & 1) as u8,
        )
    }

    fn next_state(&self, state: usize, bit: u8) -> usize {
        (((bit as usize) << self.memory()) | state) >> 1
    }
}

impl Default for ConvCodeSpec {
    fn default() -> Self {
        Self::K7
    }
}

/// Encodes from the zero state and flushes with K-1 zero bits. Each input
/// bit emits `(g0 output, g1 output)`.
pub fn conv_encode(bits: &[u8], spec: &ConvCodeSpec) -> Vec<u8> {
    let mut out = Vec::with_capacity(spec.coded_len(bits.len()));
    let mut state = 0;
    for &b in bits.iter().chain(std::iter::repeat_n(&0, spec.memory())) {
        let b = b & 1;
        let (a, c) = spec.outputs(state, b);
        out.push(a);
        out.push(c);
        state = spec.next_state(state, b);
    }
    out
}

/// Minimum-Hamming-distance decoding of a zero-terminated block. Returns the
/// message without tail bits.
pub fn viterbi_decode(coded: &[u8], spec: &ConvCodeSpec) -> Result<Vec<u8>> {
    let m = spec.memory();
    if !coded.len().is_multiple_of(2) {
        return Err(Error::Framing(format!(
            "coded block has odd length {}",
            coded.len()
        )));
    }
    if coded.len() < 2 * m {
        return Err(Error::Framing(format!(
            "coded block of {} bits is shorter than the {}-bit tail",
            coded.len(),
            2 * m
        )));
    }
    let n_states = spec.n_states();
    let steps = coded.len() / 2;
    const UNREACHED: u32 = u32::MAX / 2;

    // Branch outputs for every (state, input) pair.
    let table: Vec<[(u8, u8); 2]> = (0..n_states)
        .map(|s| [spec.outputs(s, 0), spec.outputs(s, 1)])
        .collect();

    let mut metrics = vec![UNREACHED; n_states];
    metrics[0] = 0;
    let mut next = vec![0u32; n_states];
    // survivors[t][s] = predecessor state chosen for state s at step t.
    let mut survivors = vec![0u8; steps * n_states];

    for t in 0..steps {
        let (r0, r1) = (coded[2 * t] & 1, coded[2 * t + 1] & 1);
        for s in 0..n_states {
            let bit = (s >> (m - 1)) as u8;
            let low = (s << 1) & (n_states - 1);
            let mut best = UNREACHED;
            let mut best_pred = low;
            // Lower-numbered predecessor first, so ties keep it.
            for pred in [low, low | 1] {
                if metrics[pred] >= UNREACHED {
                    continue;
                }
                let (a, c) = table[pred][bit as usize];
                let cost = metrics[pred] + u32::from(a != r0) + u32::from(c != r1);
                if cost < best {
                    best = cost;
                    best_pred = pred;
                }
            }
            next[s] = best;
            survivors[t * n_states + s] = best_pred as u8;
        }
        std::mem::swap(&mut metrics, &mut next);
    }

    let mut bits = vec![0u8; steps];
    let mut state = 0;
    for t in (0..steps).rev() {
        bits[t] = (state >> (m - 1)) as u8;
        state = survivors[t * n_states + state] as usize;
    }
    bits.truncate(steps - m);
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RngStream;

    fn hamming(a: &[u8], b: &[u8]) -> usize {
        a.iter().zip(b).filter(|(x, y)| x != y).count()
    }

    #[test]
    fn zero_message() {
        assert_eq!(conv_encode(&[0; 10], &ConvCodeSpec::K7), vec![0; 32]);
    }

    #[test]
    fn first_pair_for_leading_one() {
        let coded = conv_encode(&[1, 0, 0], &ConvCodeSpec::K7);
        assert_eq!(&coded[..2], &[1, 1]);
        // Impulse response: each generator read from the current-input end.
        let g0: Vec<u8> = coded.iter().step_by(2).copied().collect();
        let g1: Vec<u8> = coded.iter().skip(1).step_by(2).copied().collect();
        assert_eq!(g0[..7], [1, 1, 1, 1, 0, 0, 1]);
        assert_eq!(g1[..7], [1, 0, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn encoder_is_linear() {
        let mut rng = RngStream::new(1, 0);
        for _ in 0..50 {
            let a = rng.bits(80);
            let b = rng.bits(80);
            let x: Vec<u8> = a.iter().zip(&b).map(|(p, q)| p ^ q).collect();
            let ea = conv_encode(&a, &ConvCodeSpec::K7);
            let eb = conv_encode(&b, &ConvCodeSpec::K7);
            let ex: Vec<u8> = ea.iter().zip(&eb).map(|(p, q)| p ^ q).collect();
            assert_eq!(conv_encode(&x, &ConvCodeSpec::K7), ex);
        }
    }

    #[test]
    fn framing_errors() {
        assert!(matches!(
            viterbi_decode(&[0; 13], &ConvCodeSpec::K7),
            Err(Error::Framing(_))
        ));
        assert!(matches!(
            viterbi_decode(&[0; 10], &ConvCodeSpec::K7),
            Err(Error::Framing(_))
        ));
        assert_eq!(
            viterbi_decode(&[0; 12], &ConvCodeSpec::K7).unwrap(),
            Vec::<u8>::new()
        );
    }

    #[test]
    fn noiseless_inversion() {
        let mut rng = RngStream::new(2, 0);
        for len in [1, 7, 64, 333, 1000] {
            let u = rng.bits(len);
            let coded = conv_encode(&u, &ConvCodeSpec::K7);
            assert_eq!(coded.len(), 2 * (len + 6));
            assert_eq!(viterbi_decode(&coded, &ConvCodeSpec::K7).unwrap(), u);
        }
    }

    #[test]
    fn single_flip_corrected_everywhere() {
        let mut rng = RngStream::new(3, 0);
        let u = rng.bits(64);
        let coded = conv_encode(&u, &ConvCodeSpec::K7);
        for i in 0..coded.len() {
            let mut r = coded.clone();
            r[i] ^= 1;
            assert_eq!(viterbi_decode(&r, &ConvCodeSpec::K7).unwrap(), u, "flip at {i}");
        }
    }

    #[test]
    fn decoded_path_is_distance_optimal() {
        let mut rng = RngStream::new(4, 0);
        let spec = ConvCodeSpec::K7;
        let len = 8;
        let codebook: Vec<Vec<u8>> = (0..1u32 << len)
            .map(|m| {
                let u: Vec<u8> = (0..len).map(|i| ((m >> i) & 1) as u8).collect();
                conv_encode(&u, &spec)
            })
            .collect();
        for _ in 0..20 {
            let u = rng.bits(len);
            let mut r = conv_encode(&u, &spec);
            for _ in 0..4 {
                let i = (rng.next_u64() % r.len() as u64) as usize;
                r[i] ^= 1;
            }
            let best = codebook.iter().map(|c| hamming(c, &r)).min().unwrap();
            let decoded = viterbi_decode(&r, &spec).unwrap();
            assert_eq!(hamming(&conv_encode(&decoded, &spec), &r), best);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn decode_inverts_encode(bits in proptest::collection::vec(0u8..2, 0..400)) {
                let coded = conv_encode(&bits, &ConvCodeSpec::K7);
                prop_assert_eq!(coded.len(), ConvCodeSpec::K7.coded_len(bits.len()));
                prop_assert_eq!(viterbi_decode(&coded, &ConvCodeSpec::K7).unwrap(), bits);
            }

            #[test]
            fn isolated_flips_are_corrected(bits in proptest::collection::vec(0u8..2, 16..200), at in any::<proptest::sample::Index>()) {
                let mut coded = conv_encode(&bits, &ConvCodeSpec::K7);
                let i = at.index(coded.len());
                coded[i] ^= 1;
                prop_assert_eq!(viterbi_decode(&coded, &ConvCodeSpec::K7).unwrap(), bits);
            }
        }
    }
}
