//! One end-to-end pass through the link: encode, map, frame, channel,
//! receive, decide, decode, count.

use crate::channel::{self, ChannelKind, ChannelRealization};
use crate::equalizer::{
    self, equalize_pre_fft, estimate_pilot_lms, PilotLmsEstimator, PreFftMode, MU_CANDIDATES,
};
use crate::fec::{conv_encode, viterbi_decode, ConvCodeSpec};
use crate::modem::{demap_hard, map_bits, Constellation, Modulation};
use crate::ofdm::{equalize_one_tap, OfdmGrid};
use crate::{Error, Result, RngStream, Sample};

use super::config::{Coding, ReceiverMode, SimConfig, SourceKind};
use super::source::generate_source;

/// Step size of the pilot trackers when none is configured.
pub const DEFAULT_PILOT_MU: f64 = 0.5;

/// `Es/N0 - 10 log10(bits_per_symbol * code_rate)`.
pub fn ebn0_from_esn0(esn0_db: f64, bits_per_symbol: usize, code_rate: f64) -> f64 {
    esn0_db - 10.0 * (bits_per_symbol as f64 * code_rate).log10()
}

/// One cell of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub index: u64,
    pub snr_db: f64,
    pub modulation: Modulation,
    pub channel: ChannelKind,
    pub coding: Coding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub index: u64,
    pub modulation: String,
    pub channel: String,
    pub coding: String,
    pub receiver_mode: String,
    pub snr_db: f64,
    pub ebn0_db: f64,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    pub seed: u64,
}

impl BerPoint {
    pub fn series_key(&self) -> (String, String, String) {
        (self.modulation.clone(), self.channel.clone(), self.coding.clone())
    }
}

#[derive(Debug, Clone)]
pub struct LinkOutcome {
    /// Receiver estimate of the information bits.
    pub decoded: Vec<u8>,
    /// Pre-FFT equalizer history, when that receiver ran.
    pub trace: Option<equalizer::LmsTrace>,
}

fn point_context(cfg: &SimConfig, p: &PointSpec) -> String {
    format!(
        "point {} ({} {} {} {} snr {} dB, seed {})",
        p.index,
        p.modulation,
        cfg.channel_config(p.channel).id(),
        p.coding,
        cfg.receiver_mode,
        p.snr_db,
        cfg.seed
    )
}

/// Simulates one sweep point. The stream id is the point index, so results
/// do not depend on execution order.
pub fn run_point(cfg: &SimConfig, point: &PointSpec) -> Result<BerPoint> {
    let wrap = |e: Error| Error::Point {
        context: point_context(cfg, point),
        source: Box::new(e),
    };
    let mut rng = RngStream::new(cfg.seed, point.index);
    let info = match cfg.source {
        SourceKind::RandomBits => rng.bits(cfg.n_bits),
        SourceKind::SinePcm => generate_source(cfg.n_bits).map_err(wrap)?,
    };
    let outcome = simulate_link(cfg, point, &info, &mut rng).map_err(wrap)?;
    let errors = info.iter().zip(&outcome.decoded).filter(|(a, b)| a != b).count() as u64;
    let bits = info.len() as u64;
    Ok(BerPoint {
        index: point.index,
        modulation: point.modulation.name().to_string(),
        channel: cfg.channel_config(point.channel).id(),
        coding: point.coding.name().to_string(),
        receiver_mode: cfg.receiver_mode.name().to_string(),
        snr_db: point.snr_db,
        ebn0_db: ebn0_from_esn0(
            point.snr_db,
            point.modulation.bits_per_symbol(),
            point.coding.rate(),
        ),
        bits,
        errors,
        ber: errors as f64 / bits as f64,
        seed: cfg.seed,
    })
}

/// Runs `info` through the configured transmitter, channel and receiver.
///
/// Noise is calibrated so that `point.snr_db` is the Es/N0 seen on each
/// subcarrier, i.e. the nominal unit time-domain power is scaled by
/// `fft_size / active_bins` before dividing by Es/N0.
pub fn simulate_link(
    cfg: &SimConfig,
    point: &PointSpec,
    info: &[u8],
    rng: &mut RngStream,
) -> Result<LinkOutcome> {
    let grid = OfdmGrid::standard();
    let constellation = Constellation::new(point.modulation);
    let bps = constellation.bits_per_symbol();
    let code = ConvCodeSpec::K7;

    let mut coded = match point.coding {
        Coding::None => info.to_vec(),
        Coding::ConvK7 => conv_encode(info, &code),
    };
    let coded_len = coded.len();
    coded.resize(coded_len.div_ceil(bps) * bps, 0);
    let payload = map_bits(&coded, &constellation)?;
    let (groups, _pad) = grid.segment(&payload);

    let n_train = match cfg.receiver_mode {
        ReceiverMode::KnownChannelZf => 0,
        _ => cfg.training_symbols,
    };
    let training_groups: Vec<Vec<Sample>> = (0..n_train)
        .map(|_| map_bits(&rng.bits(grid.n_data() * bps), &constellation))
        .collect::<Result<_>>()?;

    let pilots = grid.pilots();
    let mut tx = Vec::with_capacity((n_train + groups.len()) * grid.symbol_len());
    for group in training_groups.iter().chain(&groups) {
        tx.extend(grid.assemble(group, &pilots)?.samples);
    }

    let channel_cfg = cfg.channel_config(point.channel);
    channel_cfg.validate()?;
    let realization = match point.channel {
        ChannelKind::Awgn => None,
        ChannelKind::StaticMultipath => Some(ChannelRealization::constant(&channel_cfg.taps, tx.len())),
        ChannelKind::RicianFading => Some(channel::rician_taps(&channel_cfg, tx.len(), rng)?),
    };
    let faded = match (&realization, point.channel) {
        (None, _) => tx.clone(),
        (Some(_), ChannelKind::StaticMultipath) => channel::static_multipath(&tx, &channel_cfg.taps),
        (Some(r), _) => channel::apply_fading(&tx, r)?,
    };
    let per_bin_power = grid.fft_size() as f64 / grid.active_bins().len() as f64;
    let rx = channel::add_awgn(&faded, point.snr_db, per_bin_power, rng);

    let sym_len = grid.symbol_len();
    let n_symbols = tx.len() / sym_len;
    let mut equalized: Vec<Sample> = Vec::with_capacity(groups.len() * grid.n_data());
    let mut trace = None;

    match cfg.receiver_mode {
        ReceiverMode::KnownChannelZf => {
            for s in 0..n_symbols {
                let block = &rx[s * sym_len..(s + 1) * sym_len];
                let response = match &realization {
                    None => vec![Sample::new(1.0, 0.0); grid.fft_size()],
                    Some(r) => {
                        let window = s * sym_len + grid.cp_len()..(s + 1) * sym_len;
                        grid.channel_response(&r.mean_taps(window))?
                    }
                };
                let (data, _) = grid.disassemble(block)?;
                let h = grid.gather(&response, grid.data_bins());
                equalized.extend(equalize_one_tap(&data, &h)?);
            }
        }
        ReceiverMode::PilotFdLms => {
            let mu = cfg.lms_mu.unwrap_or(DEFAULT_PILOT_MU);
            let mut estimator = PilotLmsEstimator::new(grid.n_pilots(), mu)?;
            for s in 0..n_symbols {
                let block = &rx[s * sym_len..(s + 1) * sym_len];
                let (data, pilot_rx) = grid.disassemble(block)?;
                let active = estimate_pilot_lms(&pilot_rx, &pilots, &grid, &mut estimator)?;
                if s >= n_train {
                    let h: Vec<Sample> = grid.data_positions().iter().map(|&p| active[p]).collect();
                    equalized.extend(equalize_one_tap(&data, &h)?);
                }
            }
        }
        ReceiverMode::PreFftLms => {
            let training = &tx[..n_train * sym_len];
            let mu = match cfg.lms_mu {
                Some(mu) => mu,
                None => equalizer::select_step_size(&rx, training, cfg.lms_taps, &MU_CANDIDATES)?.mu,
            };
            let decide = |block: &[Sample]| -> Result<Vec<Sample>> {
                let (data, _) = grid.disassemble(block)?;
                let decisions: Vec<Sample> = data.iter().map(|&z| constellation.decide(z)).collect();
                Ok(grid.assemble(&decisions, &pilots)?.samples)
            };
            let mode = PreFftMode::DecisionDirected {
                block_len: sym_len,
                decide: &decide,
            };
            let (out, lms_trace) = equalize_pre_fft(&rx, training, cfg.lms_taps, mu, mode)?;
            for s in n_train..n_symbols {
                let (data, _) = grid.disassemble(&out[s * sym_len..(s + 1) * sym_len])?;
                equalized.extend(data);
            }
            trace = Some(lms_trace);
        }
    }

    equalized.truncate(payload.len());
    let mut hard = demap_hard(&equalized, &constellation);
    hard.truncate(coded_len);
    let decoded = match point.coding {
        Coding::None => hard,
        Coding::ConvK7 => viterbi_decode(&hard, &code)?,
    };
    Ok(LinkOutcome { decoded, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(modulation: Modulation, channel: ChannelKind, coding: Coding, snr_db: f64) -> PointSpec {
        PointSpec {
            index: 0,
            snr_db,
            modulation,
            channel,
            coding,
        }
    }

    #[test]
    fn ebn0_accounting() {
        assert!((ebn0_from_esn0(10.0, 2, 1.0) - (10.0 - 3.0103)).abs() < 1e-4);
        assert!((ebn0_from_esn0(10.0, 8, 1.0) - (10.0 - 9.0309)).abs() < 1e-4);
        assert_eq!(ebn0_from_esn0(10.0, 2, 0.5), 10.0);
    }

    #[test]
    fn noiseless_ideal_receiver_is_error_free() {
        let cfg = SimConfig {
            receiver_mode: ReceiverMode::KnownChannelZf,
            n_bits: 4000,
            ..SimConfig::default()
        };
        for m in Modulation::ALL {
            for ch in [ChannelKind::Awgn, ChannelKind::StaticMultipath] {
                let p = run_point(&cfg, &point(m, ch, Coding::None, 300.0)).unwrap();
                assert_eq!(p.errors, 0, "{m} {ch}");
                assert_eq!(p.bits, 4000);
            }
        }
    }

    #[test]
    fn noiseless_lms_receivers_are_error_free_on_static_channel() {
        for mode in [ReceiverMode::PilotFdLms, ReceiverMode::PreFftLms] {
            let cfg = SimConfig {
                receiver_mode: mode,
                n_bits: 8000,
                training_symbols: 20,
                lms_mu: if mode == ReceiverMode::PilotFdLms {
                    Some(0.5)
                } else {
                    None
                },
                ..SimConfig::default()
            };
            for coding in [Coding::None, Coding::ConvK7] {
                let p = run_point(
                    &cfg,
                    &point(Modulation::Qpsk, ChannelKind::StaticMultipath, coding, 300.0),
                )
                .unwrap();
                assert_eq!(p.errors, 0, "{mode} {coding}");
            }
        }
    }

    #[test]
    fn same_seed_same_point() {
        let cfg = SimConfig {
            n_bits: 3500,
            ..SimConfig::default()
        };
        let p = point(Modulation::Psk16, ChannelKind::RicianFading, Coding::ConvK7, 12.0);
        assert_eq!(run_point(&cfg, &p).unwrap(), run_point(&cfg, &p).unwrap());
    }

    #[test]
    fn sine_source_round_trips_without_noise() {
        let cfg = SimConfig {
            source: SourceKind::SinePcm,
            receiver_mode: ReceiverMode::KnownChannelZf,
            n_bits: 4400,
            ..SimConfig::default()
        };
        let p = run_point(
            &cfg,
            &point(
                Modulation::Qam16,
                ChannelKind::StaticMultipath,
                Coding::ConvK7,
                300.0,
            ),
        )
        .unwrap();
        assert_eq!(p.errors, 0);
    }
}
