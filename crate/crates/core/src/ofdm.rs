//! OFDM symbol assembly: subcarrier allocation, comb pilots, IFFT and the
//! cyclic prefix, plus the receive-side inverse and one-tap equalization.

use crate::numerics::Fft;
use crate::{Error, Result, Sample};

/// Known value carried by every pilot subcarrier.
pub const PILOT_VALUE: Sample = Sample::new(1.0, 0.0);

/// Subcarrier layout of one OFDM symbol.
///
/// Active bins are listed in ascending signed frequency, negative half first,
/// so neighbours in `active_bins` are neighbours in frequency (apart from the
/// gap over the null DC bin).
#[derive(Debug, Clone)]
pub struct OfdmGrid {
    fft_size: usize,
    cp_len: usize,
    active_bins: Vec<usize>,
    pilot_positions: Vec<usize>,
    data_positions: Vec<usize>,
    pilot_bins: Vec<usize>,
    data_bins: Vec<usize>,
    null_bins: Vec<usize>,
    plan: Fft,
    scale: f64,
}

impl OfdmGrid {
    /// 256-point FFT, 64-sample prefix, 200 active bins, 25 pilots.
    pub fn standard() -> Self {
        Self::new(256, 100, 25).expect("standard grid is valid")
    }

    /// `active_per_side` bins on each side of a null DC bin, prefix of a
    /// quarter symbol, and `n_pilots` pilots spread evenly across the active
    /// band with one at each band edge.
    pub fn new(fft_size: usize, active_per_side: usize, n_pilots: usize) -> Result<Self> {
        let plan = Fft::new(fft_size)?;
        if !fft_size.is_multiple_of(4) || 2 * active_per_side + 1 > fft_size || active_per_side == 0 {
            return Err(Error::Config(format!(
                "cannot place {active_per_side} bins per side in a {fft_size}-point grid"
            )));
        }
        let n_active = 2 * active_per_side;
        if n_pilots < 2 || n_pilots >= n_active {
            return Err(Error::Config(format!(
                "{n_pilots} pilots do not fit {n_active} active bins"
            )));
        }
        let active_bins: Vec<usize> = (fft_size - active_per_side..fft_size)
            .chain(1..=active_per_side)
            .collect();
        let last = (n_active - 1) as f64;
        let pilot_positions: Vec<usize> = (0..n_pilots)
            .map(|i| (i as f64 * last / (n_pilots - 1) as f64).round() as usize)
            .collect();
        let data_positions: Vec<usize> = (0..n_active)
            .filter(|p| pilot_positions.binary_search(p).is_err())
            .collect();
        let pilot_bins = pilot_positions.iter().map(|&p| active_bins[p]).collect();
        let data_bins = data_positions.iter().map(|&p| active_bins[p]).collect();
        let mut null_bins: Vec<usize> = (0..fft_size).filter(|b| !active_bins.contains(b)).collect();
        null_bins.sort_unstable();
        Ok(Self {
            fft_size,
            cp_len: fft_size / 4,
            scale: fft_size as f64 / (n_active as f64).sqrt(),
            active_bins,
            pilot_positions,
            data_positions,
            pilot_bins,
            data_bins,
            null_bins,
            plan,
        })
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    pub fn symbol_len(&self) -> usize {
        self.fft_size + self.cp_len
    }

    pub fn active_bins(&self) -> &[usize] {
        &self.active_bins
    }

    pub fn data_bins(&self) -> &[usize] {
        &self.data_bins
    }

    pub fn pilot_bins(&self) -> &[usize] {
        &self.pilot_bins
    }

    pub fn null_bins(&self) -> &[usize] {
        &self.null_bins
    }

    /// Indices into `active_bins` that carry pilots.
    pub fn pilot_positions(&self) -> &[usize] {
        &self.pilot_positions
    }

    pub fn data_positions(&self) -> &[usize] {
        &self.data_positions
    }

    pub fn n_data(&self) -> usize {
        self.data_bins.len()
    }

    pub fn n_pilots(&self) -> usize {
        self.pilot_bins.len()
    }

    pub fn fft(&self) -> &Fft {
        &self.plan
    }

    /// Bin index as a signed frequency in `-N/2..N/2`.
    pub fn signed_frequency(&self, bin: usize) -> i64 {
        if bin >= self.fft_size / 2 {
            bin as i64 - self.fft_size as i64
        } else {
            bin as i64
        }
    }

    /// Time-domain gain applied after the IFFT so that unit-energy
    /// subcarriers give unit mean sample power.
    pub fn time_scale(&self) -> f64 {
        self.scale
    }

    pub fn pilots(&self) -> Vec<Sample> {
        vec![PILOT_VALUE; self.n_pilots()]
    }

    /// Frequency response of an FIR channel on every FFT bin.
    pub fn channel_response(&self, taps: &[Sample]) -> Result<Vec<Sample>> {
        if taps.len() > self.fft_size {
            return Err(Error::Config(format!(
                "{} taps exceed the FFT size {}",
                taps.len(),
                self.fft_size
            )));
        }
        let mut padded = vec![Sample::new(0.0, 0.0); self.fft_size];
        padded[..taps.len()].copy_from_slice(taps);
        self.plan.forward(&padded)
    }

    pub fn gather(&self, spectrum: &[Sample], bins: &[usize]) -> Vec<Sample> {
        bins.iter().map(|&b| spectrum[b]).collect()
    }

    /// Places data and pilots, runs the IFFT and prepends the cyclic prefix.
    pub fn assemble(&self, data: &[Sample], pilots: &[Sample]) -> Result<OfdmSymbol> {
        if data.len() != self.n_data() || pilots.len() != self.n_pilots() {
            return Err(Error::Framing(format!(
                "expected {} data and {} pilot values, got {} and {}",
                self.n_data(),
                self.n_pilots(),
                data.len(),
                pilots.len()
            )));
        }
        let mut spectrum = vec![Sample::new(0.0, 0.0); self.fft_size];
        for (&b, &v) in self.data_bins.iter().zip(data) {
            spectrum[b] = v;
        }
        for (&b, &v) in self.pilot_bins.iter().zip(pilots) {
            spectrum[b] = v;
        }
        self.plan.inverse_in_place(&mut spectrum)?;
        let mut samples = Vec::with_capacity(self.symbol_len());
        samples.extend(
            spectrum[self.fft_size - self.cp_len..]
                .iter()
                .map(|v| v * self.scale),
        );
        samples.extend(spectrum.iter().map(|v| v * self.scale));
        Ok(OfdmSymbol { samples })
    }

    /// Strips the prefix and returns the de-scaled spectrum on every bin.
    pub fn spectrum(&self, samples: &[Sample]) -> Result<Vec<Sample>> {
        if samples.len() != self.symbol_len() {
            return Err(Error::Framing(format!(
                "OFDM symbol has {} samples, expected {}",
                samples.len(),
                self.symbol_len()
            )));
        }
        let mut buf = samples[self.cp_len..].to_vec();
        self.plan.forward_in_place(&mut buf)?;
        let inv = 1.0 / self.scale;
        buf.iter_mut().for_each(|v| *v *= inv);
        Ok(buf)
    }

    /// Returns `(data bin values, pilot bin values)`.
    pub fn disassemble(&self, samples: &[Sample]) -> Result<(Vec<Sample>, Vec<Sample>)> {
        let spectrum = self.spectrum(samples)?;
        Ok((
            self.gather(&spectrum, &self.data_bins),
            self.gather(&spectrum, &self.pilot_bins),
        ))
    }

    /// Cuts payload symbols into per-OFDM-symbol groups, zero-padding the
    /// last one. Returns the groups and the number of pad symbols.
    pub fn segment(&self, payload: &[Sample]) -> (Vec<Vec<Sample>>, usize) {
        let n = self.n_data();
        let mut groups: Vec<Vec<Sample>> = payload.chunks(n).map(<[Sample]>::to_vec).collect();
        let mut pad = 0;
        if let Some(last) = groups.last_mut() {
            pad = n - last.len();
            last.resize(n, Sample::new(0.0, 0.0));
        }
        (groups, pad)
    }
}

/// One time-domain OFDM symbol including its cyclic prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmSymbol {
    pub samples: Vec<Sample>,
}

/// Zero-forcing division of each bin by its channel response.
pub fn equalize_one_tap(values: &[Sample], response: &[Sample]) -> Result<Vec<Sample>> {
    if values.len() != response.len() {
        return Err(Error::Framing(format!(
            "{} bin values but {} channel coefficients",
            values.len(),
            response.len()
        )));
    }
    values
        .iter()
        .zip(response)
        .enumerate()
        .map(|(k, (v, h))| {
            if h.norm() < 1e-12 {
                Err(Error::SingularChannel {
                    bin: k,
                    magnitude: h.norm(),
                })
            } else {
                Ok(v / h)
            }
        })
        .collect()
}
