//! Learning-curve capture for the pre-FFT LMS equalizer over its training span.

use std::fmt::Write as _;

use super::config::SimConfig;
use super::csv::format_g6;
use crate::channel::{self, ChannelKind};
use crate::equalizer::{
    equalize_pre_fft, select_step_size, windowed_mean, LmsTrace, PreFftMode, MSE_WINDOW, MU_CANDIDATES,
};
use crate::modem::{map_bits, Constellation};
use crate::ofdm::OfdmGrid;
use crate::{Error, Result, RngStream};

#[derive(Debug, Clone)]
pub struct LmsTraceReport {
    pub trace: LmsTrace,
    pub windows: Vec<f64>,
    /// Step size came from the candidate sweep rather than the config.
    pub mu_swept: bool,
}

impl LmsTraceReport {
    pub fn initial_mse(&self) -> f64 {
        self.windows.first().copied().unwrap_or(f64::NAN)
    }

    pub fn final_mse(&self) -> f64 {
        self.trace.final_mse().unwrap_or(f64::NAN)
    }

    /// Windowed MSE never rises from one window to the next, ignoring the
    /// step into the second window.
    pub fn is_non_increasing(&self) -> bool {
        self.windows
            .iter()
            .skip(1)
            .zip(self.windows.iter().skip(2))
            .all(|(a, b)| b <= a)
    }

    /// Window indices where the windowed MSE rose.
    pub fn increases(&self) -> Vec<usize> {
        (2..self.windows.len())
            .filter(|&i| self.windows[i] > self.windows[i - 1])
            .collect()
    }
}

/// Trains the equalizer on `training_symbols` random OFDM symbols sent over
/// the first configured channel. `snr_db = None` leaves the link noiseless.
pub fn run_lms_trace(cfg: &SimConfig, snr_db: Option<f64>) -> Result<LmsTraceReport> {
    let grid = OfdmGrid::standard();
    let modulation = *cfg
        .modulations
        .first()
        .ok_or_else(|| Error::Config("no modulation configured".into()))?;
    let kind = *cfg
        .channels
        .first()
        .ok_or_else(|| Error::Config("no channel configured".into()))?;
    let constellation = Constellation::new(modulation);
    let mut rng = RngStream::new(cfg.seed, 0);

    // One extra symbol follows the training block so the last training
    // regressors see real samples rather than zero padding.
    let mut tx = Vec::with_capacity((cfg.training_symbols + 1) * grid.symbol_len());
    for _ in 0..=cfg.training_symbols {
        let bits = rng.bits(grid.n_data() * constellation.bits_per_symbol());
        let data = map_bits(&bits, &constellation)?;
        tx.extend(grid.assemble(&data, &grid.pilots())?.samples);
    }
    let channel_cfg = cfg.channel_config(kind);
    let faded = match kind {
        ChannelKind::Awgn => tx.clone(),
        ChannelKind::StaticMultipath => channel::static_multipath(&tx, &channel_cfg.taps),
        ChannelKind::RicianFading => {
            let r = channel::rician_taps(&channel_cfg, tx.len(), &mut rng)?;
            channel::apply_fading(&tx, &r)?
        }
    };
    let rx = match snr_db {
        Some(snr) => {
            let power = grid.fft_size() as f64 / grid.active_bins().len() as f64;
            channel::add_awgn(&faded, snr, power, &mut rng)
        }
        None => faded,
    };

    let training = &tx[..cfg.training_symbols * grid.symbol_len()];
    let (trace, mu_swept) = match cfg.lms_mu {
        Some(mu) => (
            equalize_pre_fft(&rx, training, cfg.lms_taps, mu, PreFftMode::TrainThenFreeze)?.1,
            false,
        ),
        None => (
            select_step_size(&rx, training, cfg.lms_taps, &MU_CANDIDATES)?,
            true,
        ),
    };
    Ok(LmsTraceReport {
        windows: windowed_mean(&trace.sq_errors, MSE_WINDOW),
        trace,
        mu_swept,
    })
}

/// `step,sq_error` rows, steps counted from zero.
pub fn trace_to_csv(trace: &LmsTrace) -> String {
    let mut out = String::from("step,sq_error\n");
    for (n, e) in trace.sq_errors.iter().enumerate() {
        let _ = writeln!(out, "{n},{}", format_g6(*e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_channel_trace_converges() {
        let cfg = SimConfig {
            lms_taps: 3,
            lms_mu: Some(0.01),
            training_symbols: 4,
            ..SimConfig::default()
        };
        let report = run_lms_trace(&cfg, None).unwrap();
        assert_eq!(report.trace.sq_errors.len(), 4 * 320);
        assert!(!report.mu_swept);
        assert!(report.final_mse() < 1e-3 * report.initial_mse());
        let csv = trace_to_csv(&report.trace);
        assert!(csv.starts_with("step,sq_error\n0,"));
        assert_eq!(csv.lines().count(), 1 + 4 * 320);
    }
}
