//! Channel impairments: calibrated AWGN, static multipath and Rician fading
//! taps with a Jakes Doppler spectrum.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::numerics::db_to_linear;
use crate::{Error, Result, RngStream, Sample};

/// Number of arrival angles in the sum-of-sinusoids fading generator.
pub const JAKES_SINUSOIDS: usize = 32;

/// Default multipath profile, sample-spaced.
pub fn table_taps() -> Vec<Sample> {
    vec![
        Sample::new(0.986, 0.0),
        Sample::new(0.845, 0.0),
        Sample::new(0.237, 0.0),
        Sample::new(0.123, 0.31),
    ]
}

/// Scales taps to unit total power.
pub fn normalize_taps(taps: &[Sample]) -> Vec<Sample> {
    let energy: f64 = taps.iter().map(|t| t.norm_sqr()).sum();
    if energy == 0.0 {
        return taps.to_vec();
    }
    let g = 1.0 / energy.sqrt();
    taps.iter().map(|t| t * g).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelKind {
    Awgn,
    StaticMultipath,
    RicianFading,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::StaticMultipath => "static",
            ChannelKind::RicianFading => "rician",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "awgn" | "awgn_only" => Ok(ChannelKind::Awgn),
            "static" | "static_multipath" | "multipath" => Ok(ChannelKind::StaticMultipath),
            "rician" | "rician_fading" | "fading" => Ok(ChannelKind::RicianFading),
            other => Err(Error::Config(format!("unknown channel {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    /// Mean tap gains, already normalized when requested.
    pub taps: Vec<Sample>,
    /// Linear Rician K-factor.
    pub k_factor: f64,
    pub doppler_hz: f64,
    pub sample_rate_hz: f64,
}

impl ChannelConfig {
    pub fn awgn() -> Self {
        Self {
            kind: ChannelKind::Awgn,
            taps: vec![Sample::new(1.0, 0.0)],
            k_factor: 0.0,
            doppler_hz: 0.0,
            sample_rate_hz: 4000.0,
        }
    }

    pub fn static_multipath(taps: &[Sample], normalize: bool) -> Self {
        Self {
            kind: ChannelKind::StaticMultipath,
            taps: if normalize {
                normalize_taps(taps)
            } else {
                taps.to_vec()
            },
            ..Self::awgn()
        }
    }

    pub fn rician(
        taps: &[Sample],
        normalize: bool,
        k_factor: f64,
        doppler_hz: f64,
        sample_rate_hz: f64,
    ) -> Self {
        Self {
            kind: ChannelKind::RicianFading,
            taps: if normalize {
                normalize_taps(taps)
            } else {
                taps.to_vec()
            },
            k_factor,
            doppler_hz,
            sample_rate_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.taps.is_empty() {
            return Err(Error::Config("channel needs at least one tap".into()));
        }
        if !(self.sample_rate_hz > 0.0) {
            return Err(Error::Config(format!(
                "sample rate {} Hz must be positive",
                self.sample_rate_hz
            )));
        }
        if self.kind == ChannelKind::RicianFading {
            if !(self.k_factor >= 0.0) {
                return Err(Error::Config(format!(
                    "K-factor {} must be non-negative",
                    self.k_factor
                )));
            }
            if !(self.doppler_hz >= 0.0) || self.doppler_hz >= self.sample_rate_hz / 2.0 {
                return Err(Error::Config(format!(
                    "Doppler {} Hz must lie in [0, {}) Hz",
                    self.doppler_hz,
                    self.sample_rate_hz / 2.0
                )));
            }
        }
        Ok(())
    }

    /// Short identifier used in CSV rows and plot legends.
    pub fn id(&self) -> String {
        match self.kind {
            ChannelKind::RicianFading => format!("rician_fd{}", self.doppler_hz),
            kind => kind.name().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelWarning {
    /// Channel memory exceeds the cyclic prefix; subcarriers will interfere.
    LongerThanPrefix { taps: usize, cp_len: usize },
}

impl fmt::Display for ChannelWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelWarning::LongerThanPrefix { taps, cp_len } => write!(
                f,
                "{taps} channel taps exceed the {cp_len}-sample cyclic prefix; ISI is not absorbed"
            ),
        }
    }
}

pub fn isi_warning(taps: &[Sample], cp_len: usize) -> Option<ChannelWarning> {
    (taps.len() > cp_len).then_some(ChannelWarning::LongerThanPrefix {
        taps: taps.len(),
        cp_len,
    })
}

/// Adds circular Gaussian noise of total variance `signal_power / Es/N0`.
pub fn add_awgn(signal: &[Sample], esn0_db: f64, signal_power: f64, rng: &mut RngStream) -> Vec<Sample> {
    let variance = signal_power / db_to_linear(esn0_db);
    signal
        .iter()
        .map(|&x| x + rng.complex_gaussian(variance))
        .collect()
}

/// Causal linear convolution truncated to the input length.
pub fn static_multipath(signal: &[Sample], taps: &[Sample]) -> Vec<Sample> {
    (0..signal.len())
        .map(|t| {
            taps.iter()
                .take(t + 1)
                .enumerate()
                .map(|(l, h)| h * signal[t - l])
                .sum()
        })
        .collect()
}

/// Per-tap complex gain trajectories, one value per signal sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub trajectories: Vec<Vec<Sample>>,
}

impl ChannelRealization {
    pub fn constant(taps: &[Sample], n_samples: usize) -> Self {
        Self {
            trajectories: taps.iter().map(|&t| vec![t; n_samples]).collect(),
        }
    }

    pub fn n_taps(&self) -> usize {
        self.trajectories.len()
    }

    pub fn len(&self) -> usize {
        self.trajectories.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tap gains averaged over `range`.
    pub fn mean_taps(&self, range: std::ops::Range<usize>) -> Vec<Sample> {
        let n = range.len().max(1) as f64;
        self.trajectories
            .iter()
            .map(|tr| tr[range.clone()].iter().sum::<Sample>() / n)
            .collect()
    }
}

/// Unit-power complex Gaussian process with a Jakes spectrum, synthesized as
/// a sum of sinusoids with stratified random arrival angles and random phases.
pub fn jakes_process(
    doppler_hz: f64,
    sample_rate_hz: f64,
    n_samples: usize,
    rng: &mut RngStream,
) -> Vec<Sample> {
    let m = JAKES_SINUSOIDS;
    let omega = 2.0 * PI * doppler_hz / sample_rate_hz;
    let paths: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let angle = 2.0 * PI * (i as f64 + rng.uniform()) / m as f64;
            let phase = 2.0 * PI * rng.uniform();
            (omega * angle.cos(), phase)
        })
        .collect();
    let gain = 1.0 / (m as f64).sqrt();
    (0..n_samples)
        .map(|t| {
            paths
                .iter()
                .map(|&(w, phase)| Sample::from_polar(gain, w * t as f64 + phase))
                .sum()
        })
        .collect()
}

/// Rician tap trajectories with a zero-phase line-of-sight component.
pub fn rician_taps(cfg: &ChannelConfig, n_samples: usize, rng: &mut RngStream) -> Result<ChannelRealization> {
    cfg.validate()?;
    let k = cfg.k_factor;
    let los = (k / (k + 1.0)).sqrt();
    let diffuse = (1.0 / (k + 1.0)).sqrt();
    let trajectories = cfg
        .taps
        .iter()
        .map(|tap| {
            let amplitude = tap.norm();
            jakes_process(cfg.doppler_hz, cfg.sample_rate_hz, n_samples, rng)
                .into_iter()
                .map(|g| (g * diffuse + los) * amplitude)
                .collect()
        })
        .collect();
    Ok(ChannelRealization { trajectories })
}

/// Time-varying convolution `y(t) = sum_l h_l(t) x(t - l)`.
pub fn apply_fading(signal: &[Sample], realization: &ChannelRealization) -> Result<Vec<Sample>> {
    if realization.len() < signal.len() {
        return Err(Error::Framing(format!(
            "fading trajectory of {} samples cannot cover {} signal samples",
            realization.len(),
            signal.len()
        )));
    }
    Ok((0..signal.len())
        .map(|t| {
            realization
                .trajectories
                .iter()
                .take(t + 1)
                .enumerate()
                .map(|(l, h)| h[t] * signal[t - l])
                .sum()
        })
        .collect())
}
