use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::channel::{table_taps, ChannelConfig, ChannelKind};
use crate::modem::Modulation;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coding {
    None,
    ConvK7,
}

impl Coding {
    pub fn name(self) -> &'static str {
        match self {
            Coding::None => "none",
            Coding::ConvK7 => "cc_k7",
        }
    }

    pub fn rate(self) -> f64 {
        match self {
            Coding::None => 1.0,
            Coding::ConvK7 => 0.5,
        }
    }
}

impl fmt::Display for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "uncoded" => Ok(Coding::None),
            "cc" | "cc_k7" | "conv" => Ok(Coding::ConvK7),
            other => Err(Error::Config(format!("unknown coding {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReceiverMode {
    PreFftLms,
    PilotFdLms,
    KnownChannelZf,
}

impl ReceiverMode {
    pub fn name(self) -> &'static str {
        match self {
            ReceiverMode::PreFftLms => "pre_fft_lms",
            ReceiverMode::PilotFdLms => "pilot_fd_lms",
            ReceiverMode::KnownChannelZf => "known_channel_zf",
        }
    }
}

impl fmt::Display for ReceiverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReceiverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pre_fft_lms" => Ok(ReceiverMode::PreFftLms),
            "pilot_fd_lms" => Ok(ReceiverMode::PilotFdLms),
            "known_channel_zf" => Ok(ReceiverMode::KnownChannelZf),
            other => Err(Error::Config(format!("unknown receiver mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    RandomBits,
    SinePcm,
}

/// Everything a sweep needs. Lists expand into one point per combination.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub modulations: Vec<Modulation>,
    pub channels: Vec<ChannelKind>,
    pub codings: Vec<Coding>,
    pub receiver_mode: ReceiverMode,
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub n_bits: usize,
    pub seed: u64,
    pub k_factor: f64,
    pub doppler_hz: f64,
    pub sample_rate_hz: f64,
    pub lms_taps: usize,
    /// `None` selects the step size automatically.
    pub lms_mu: Option<f64>,
    pub training_symbols: usize,
    pub normalize_taps: bool,
    pub source: SourceKind,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            modulations: vec![Modulation::Qpsk],
            channels: vec![ChannelKind::Awgn],
            codings: vec![Coding::None],
            receiver_mode: ReceiverMode::PilotFdLms,
            snr_start_db: 0.0,
            snr_stop_db: 50.0,
            snr_step_db: 2.0,
            n_bits: 44_000,
            seed: 1,
            k_factor: 3.0,
            doppler_hz: 100.0,
            sample_rate_hz: 4000.0,
            lms_taps: 11,
            lms_mu: None,
            training_symbols: 2,
            normalize_taps: true,
            source: SourceKind::RandomBits,
        }
    }
}

pub const CONFIG_KEYS: [&str; 15] = [
    "modulation",
    "channel",
    "coding",
    "receiver_mode",
    "snr_start_db",
    "snr_stop_db",
    "snr_step_db",
    "n_bits",
    "seed",
    "k_factor",
    "doppler_hz",
    "lms_taps",
    "lms_mu",
    "training_symbols",
    "normalize_taps",
];

fn parse_list<T: FromStr<Err = Error>>(value: &str) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Config("empty list".into()));
    }
    Ok(items)
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

impl SimConfig {
    /// Parses flat `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let at = |e: Error| Error::Config(format!("line {}: {e}", lineno + 1));
            cfg.set(key, value).map_err(at)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "modulation" => self.modulations = parse_list(value)?,
            "channel" => self.channels = parse_list(value)?,
            "coding" => self.codings = parse_list(value)?,
            "receiver_mode" => self.receiver_mode = value.parse()?,
            "snr_start_db" => self.snr_start_db = parse_num(key, value)?,
            "snr_stop_db" => self.snr_stop_db = parse_num(key, value)?,
            "snr_step_db" => self.snr_step_db = parse_num(key, value)?,
            "n_bits" => self.n_bits = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "k_factor" => self.k_factor = parse_num(key, value)?,
            "doppler_hz" => self.doppler_hz = parse_num(key, value)?,
            "lms_taps" => self.lms_taps = parse_num(key, value)?,
            "lms_mu" => {
                self.lms_mu = if value.eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(parse_num(key, value)?)
                }
            }
            "training_symbols" => self.training_symbols = parse_num(key, value)?,
            "normalize_taps" => self.normalize_taps = parse_bool(key, value)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown key {other:?}; expected one of {}",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("snr_start_db", self.snr_start_db),
            ("snr_stop_db", self.snr_stop_db),
            ("snr_step_db", self.snr_step_db),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if self.snr_step_db <= 0.0 {
            return Err(Error::Config("snr_step_db must be positive".into()));
        }
        let payload = crate::ofdm::OfdmGrid::standard().n_data();
        for m in &self.modulations {
            let min_bits = payload * m.bits_per_symbol();
            if self.n_bits < min_bits {
                return Err(Error::Config(format!(
                    "n_bits = {} is less than one {m} OFDM payload ({min_bits} bits)",
                    self.n_bits
                )));
            }
        }
        if self.lms_taps == 0 {
            return Err(Error::Config("lms_taps must be positive".into()));
        }
        if let Some(mu) = self.lms_mu {
            if !(mu > 0.0) || !mu.is_finite() {
                return Err(Error::Config(format!("lms_mu = {mu} must be positive")));
            }
        }
        if self.receiver_mode == ReceiverMode::PreFftLms
            && self.training_symbols * crate::ofdm::OfdmGrid::standard().symbol_len() < self.lms_taps
        {
            return Err(Error::Config(
                "pre_fft_lms needs at least one training symbol".into(),
            ));
        }
        for kind in &self.channels {
            self.channel_config(*kind).validate()?;
        }
        Ok(())
    }

    /// Es/N0 grid, inclusive of the stop value.
    pub fn snr_grid(&self) -> Vec<f64> {
        if self.snr_start_db > self.snr_stop_db + 1e-9 {
            return Vec::new();
        }
        let n = ((self.snr_stop_db - self.snr_start_db) / self.snr_step_db + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| self.snr_start_db + i as f64 * self.snr_step_db)
            .collect()
    }

    pub fn channel_config(&self, kind: ChannelKind) -> ChannelConfig {
        match kind {
            ChannelKind::Awgn => ChannelConfig {
                sample_rate_hz: self.sample_rate_hz,
                ..ChannelConfig::awgn()
            },
            ChannelKind::StaticMultipath => ChannelConfig {
                sample_rate_hz: self.sample_rate_hz,
                ..ChannelConfig::static_multipath(&table_taps(), self.normalize_taps)
            },
            ChannelKind::RicianFading => ChannelConfig::rician(
                &table_taps(),
                self.normalize_taps,
                self.k_factor,
                self.doppler_hz,
                self.sample_rate_hz,
            ),
        }
    }
}
