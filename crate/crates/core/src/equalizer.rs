//! Complex LMS engine and the two receivers built on it: a time-domain
//! transversal equalizer in front of the FFT, and a per-pilot channel
//! tracker with linear interpolation across the data subcarriers.
//!
//! The update is the standard complex form
//!
//! ```text
//! y(n)   = w(n)^H x(n)
//! e(n)   = d(n) - y(n)
//! w(n+1) = w(n) + mu x(n) e*(n)
//! ```
//!
//! which equals steepest descent driven by the rank-one estimates
//! `R = x x^H` and `r = d* x`: `w + mu (r - R w)`.

use crate::ofdm::OfdmGrid;
use crate::{Error, Result, Sample};

/// Any weight magnitude above this is treated as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Step sizes tried when no step size is configured.
pub const MU_CANDIDATES: [f64; 5] = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2];

/// Window length for the windowed mean-square error.
pub const MSE_WINDOW: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct LmsState {
    weights: Vec<Sample>,
    mu: f64,
    updates: u64,
}

impl LmsState {
    pub fn new(n_taps: usize, mu: f64) -> Result<Self> {
        Self::with_weights(vec![Sample::new(0.0, 0.0); n_taps], mu)
    }

    pub fn with_weights(weights: Vec<Sample>, mu: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Config("LMS filter needs at least one tap".into()));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Config(format!("LMS step size {mu} must be positive")));
        }
        Ok(Self {
            weights,
            mu,
            updates: 0,
        })
    }

    pub fn weights(&self) -> &[Sample] {
        &self.weights
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn n_taps(&self) -> usize {
        self.weights.len()
    }

    /// `w^H x`.
    pub fn output(&self, x: &[Sample]) -> Sample {
        self.weights.iter().zip(x).map(|(w, v)| w.conj() * v).sum()
    }

    /// One LMS update; returns `(y, e)`.
    pub fn step(&mut self, x: &[Sample], d: Sample) -> Result<(Sample, Sample)> {
        if x.len() != self.weights.len() {
            return Err(Error::Framing(format!(
                "regressor has {} entries for {} taps",
                x.len(),
                self.weights.len()
            )));
        }
        let y = self.output(x);
        let e = d - y;
        let gain = e.conj() * self.mu;
        for (w, v) in self.weights.iter_mut().zip(x) {
            *w += v * gain;
        }
        self.updates += 1;
        if self
            .weights
            .iter()
            .any(|w| !w.is_finite() || w.norm() > DIVERGENCE_LIMIT)
        {
            return Err(Error::Divergence {
                step: self.updates,
                mu: self.mu,
                bin: None,
            });
        }
        Ok((y, e))
    }
}

/// Free-function form of [`LmsState::step`].
pub fn lms_step(state: &mut LmsState, x: &[Sample], d: Sample) -> Result<(Sample, Sample)> {
    state.step(x, d)
}

/// Rank-one estimates `R = x x^H` and `r = d* x`.
pub fn instantaneous_covariance(x: &[Sample], d: Sample) -> (Vec<Vec<Sample>>, Vec<Sample>) {
    let r_mat = x
        .iter()
        .map(|a| x.iter().map(|b| a * b.conj()).collect())
        .collect();
    let r_vec = x.iter().map(|a| d.conj() * a).collect();
    (r_mat, r_vec)
}

/// Squared-error history of an adaptation run.
#[derive(Debug, Clone, PartialEq)]
pub struct LmsTrace {
    pub sq_errors: Vec<f64>,
    pub final_weights: Vec<Sample>,
    pub mu: f64,
}

impl LmsTrace {
    /// Means over consecutive non-overlapping windows; a trailing partial
    /// window is dropped.
    pub fn windowed_mse(&self, window: usize) -> Vec<f64> {
        windowed_mean(&self.sq_errors, window)
    }

    pub fn initial_mse(&self) -> Option<f64> {
        self.windowed_mse(MSE_WINDOW).first().copied()
    }

    /// Mean of the last `MSE_WINDOW` squared errors.
    pub fn final_mse(&self) -> Option<f64> {
        let n = self.sq_errors.len();
        (n >= MSE_WINDOW).then(|| self.sq_errors[n - MSE_WINDOW..].iter().sum::<f64>() / MSE_WINDOW as f64)
    }

    /// Mean squared error over the last quarter of the trace, never fewer
    /// than `MSE_WINDOW` steps. Steadier than `final_mse` for ranking runs.
    pub fn tail_mse(&self) -> Option<f64> {
        let n = self.sq_errors.len();
        let len = (n / 4).max(MSE_WINDOW);
        (n >= len).then(|| self.sq_errors[n - len..].iter().sum::<f64>() / len as f64)
    }
}

pub fn windowed_mean(values: &[f64], window: usize) -> Vec<f64> {
    values
        .chunks_exact(window.max(1))
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect()
}

/// What drives adaptation once the training span is exhausted.
pub enum PreFftMode<'a> {
    TrainThenFreeze,
    /// Each block of `block_len` filtered samples is passed to `decide`,
    /// which returns the re-modulated hard decisions used as the desired
    /// signal for that block.
    DecisionDirected {
        block_len: usize,
        decide: &'a dyn Fn(&[Sample]) -> Result<Vec<Sample>>,
    },
}

/// Time-domain transversal equalizer with a decision delay of half its span.
#[derive(Debug, Clone)]
pub struct TransversalEqualizer {
    state: LmsState,
    delay: usize,
}

impl TransversalEqualizer {
    pub fn new(n_taps: usize, mu: f64) -> Result<Self> {
        Ok(Self {
            state: LmsState::new(n_taps, mu)?,
            delay: n_taps / 2,
        })
    }

    pub fn state(&self) -> &LmsState {
        &self.state
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    /// Window `rx[n + D], rx[n + D - 1], ..`, zero outside the signal, whose
    /// filtered output estimates the transmitted sample `n`.
    pub fn regressor(&self, rx: &[Sample], n: usize, out: &mut Vec<Sample>) {
        out.clear();
        let lead = n + self.delay;
        out.extend((0..self.state.n_taps()).map(|k| {
            lead.checked_sub(k)
                .and_then(|i| rx.get(i))
                .copied()
                .unwrap_or_default()
        }));
    }

    pub fn filter(&self, rx: &[Sample], range: std::ops::Range<usize>) -> Vec<Sample> {
        let mut x = Vec::with_capacity(self.state.n_taps());
        range
            .map(|n| {
                self.regressor(rx, n, &mut x);
                self.state.output(&x)
            })
            .collect()
    }

    /// Adapts over `range` toward `desired`, appending `|e|^2` to `trace`.
    pub fn adapt(
        &mut self,
        rx: &[Sample],
        range: std::ops::Range<usize>,
        desired: &[Sample],
        trace: &mut Vec<f64>,
    ) -> Result<Vec<Sample>> {
        let mut x = Vec::with_capacity(self.state.n_taps());
        let mut out = Vec::with_capacity(range.len());
        for (n, &d) in range.zip(desired) {
            self.regressor(rx, n, &mut x);
            let (y, e) = self.state.step(&x, d)?;
            trace.push(e.norm_sqr());
            out.push(y);
        }
        Ok(out)
    }
}

/// Runs the pre-FFT equalizer over `rx`. The first `training.len()` samples
/// are trained against `training`; the remainder is handled per `mode`.
/// The returned sequence is aligned with the transmitted samples.
pub fn equalize_pre_fft(
    rx: &[Sample],
    training: &[Sample],
    n_taps: usize,
    mu: f64,
    mode: PreFftMode<'_>,
) -> Result<(Vec<Sample>, LmsTrace)> {
    if training.len() < n_taps {
        return Err(Error::Config(format!(
            "{} training samples cannot train {n_taps} taps",
            training.len()
        )));
    }
    if training.len() > rx.len() {
        return Err(Error::Framing(format!(
            "training span {} exceeds the received signal {}",
            training.len(),
            rx.len()
        )));
    }
    let mut eq = TransversalEqualizer::new(n_taps, mu)?;
    let mut sq_errors = Vec::with_capacity(rx.len());
    let mut out = eq.adapt(rx, 0..training.len(), training, &mut sq_errors)?;
    match mode {
        PreFftMode::TrainThenFreeze => out.extend(eq.filter(rx, training.len()..rx.len())),
        PreFftMode::DecisionDirected { block_len, decide } => {
            if block_len == 0 {
                return Err(Error::Config("decision block length must be positive".into()));
            }
            let mut start = training.len();
            while start < rx.len() {
                let end = (start + block_len).min(rx.len());
                let block = eq.filter(rx, start..end);
                if end - start == block_len {
                    let reference = decide(&block)?;
                    eq.adapt(rx, start..end, &reference, &mut sq_errors)?;
                }
                out.extend(block);
                start = end;
            }
        }
    }
    Ok((
        out,
        LmsTrace {
            sq_errors,
            final_weights: eq.state.weights().to_vec(),
            mu,
        },
    ))
}

/// Trains once per candidate step size and keeps the one with the lowest
/// MSE over the last quarter of training. Diverging candidates are skipped.
pub fn select_step_size(
    rx: &[Sample],
    training: &[Sample],
    n_taps: usize,
    candidates: &[f64],
) -> Result<LmsTrace> {
    let span = training.len().min(rx.len());
    // Keep the samples just past the training span so the last regressors
    // are not zero padded.
    let rx = &rx[..(span + n_taps).min(rx.len())];
    let mut best: Option<LmsTrace> = None;
    for &mu in candidates {
        match equalize_pre_fft(rx, &training[..span], n_taps, mu, PreFftMode::TrainThenFreeze) {
            Ok((_, trace)) => {
                let score = trace.tail_mse().unwrap_or(f64::INFINITY);
                let better = best
                    .as_ref()
                    .is_none_or(|b| score < b.tail_mse().unwrap_or(f64::INFINITY));
                if better {
                    best = Some(trace);
                }
            }
            Err(Error::Divergence { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| Error::Config("every candidate step size diverged".into()))
}

/// One single-tap LMS tracker per pilot subcarrier.
///
/// With regressor `x = pilot_tx` and desired `d = pilot_rx`, the fixed point
/// satisfies `conj(w) x = H x`, so the channel estimate is `conj(w)`.
#[derive(Debug, Clone)]
pub struct PilotLmsEstimator {
    bank: Vec<LmsState>,
}

impl PilotLmsEstimator {
    pub fn new(n_pilots: usize, mu: f64) -> Result<Self> {
        Ok(Self {
            bank: (0..n_pilots)
                .map(|_| LmsState::new(1, mu))
                .collect::<Result<_>>()?,
        })
    }

    pub fn bank(&self) -> &[LmsState] {
        &self.bank
    }

    pub fn update(&mut self, pilot_rx: &[Sample], pilot_tx: &[Sample]) -> Result<()> {
        if pilot_rx.len() != self.bank.len() || pilot_tx.len() != self.bank.len() {
            return Err(Error::Framing(format!(
                "{} pilot trackers, got {} received and {} known pilots",
                self.bank.len(),
                pilot_rx.len(),
                pilot_tx.len()
            )));
        }
        for (k, ((state, &rx), &tx)) in self.bank.iter_mut().zip(pilot_rx).zip(pilot_tx).enumerate() {
            state.step(&[tx], rx).map_err(|e| match e {
                Error::Divergence { step, mu, .. } => Error::Divergence {
                    step,
                    mu,
                    bin: Some(k),
                },
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn pilot_estimates(&self) -> Vec<Sample> {
        self.bank.iter().map(|s| s.weights()[0].conj()).collect()
    }
}

/// Linear interpolation of pilot values over every active bin, in signed
/// frequency; bins outside the pilot span take the nearest pilot value.
pub fn interpolate_active(grid: &OfdmGrid, pilot_values: &[Sample]) -> Vec<Sample> {
    let freq = |pos: usize| grid.signed_frequency(grid.active_bins()[pos]) as f64;
    let pilots = grid.pilot_positions();
    let mut seg = 0;
    (0..grid.active_bins().len())
        .map(|pos| {
            if pos <= pilots[0] {
                return pilot_values[0];
            }
            if pos >= pilots[pilots.len() - 1] {
                return pilot_values[pilots.len() - 1];
            }
            while pilots[seg + 1] < pos {
                seg += 1;
            }
            let (f0, f1) = (freq(pilots[seg]), freq(pilots[seg + 1]));
            let t = (freq(pos) - f0) / (f1 - f0);
            pilot_values[seg] * (1.0 - t) + pilot_values[seg + 1] * t
        })
        .collect()
}

/// Feeds one OFDM symbol's pilots to the tracker bank and returns the channel
/// estimate over all active bins (ordered as `grid.active_bins()`).
pub fn estimate_pilot_lms(
    pilot_rx: &[Sample],
    pilot_tx: &[Sample],
    grid: &OfdmGrid,
    estimator: &mut PilotLmsEstimator,
) -> Result<Vec<Sample>> {
    estimator.update(pilot_rx, pilot_tx)?;
    Ok(interpolate_active(grid, &estimator.pilot_estimates()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RngStream;

    fn c(re: f64, im: f64) -> Sample {
        Sample::new(re, im)
    }

    #[test]
    fn scalar_hand_steps() {
        let mut s = LmsState::new(1, 0.5).unwrap();
        let (y, e) = lms_step(&mut s, &[c(1.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert_eq!((y, e), (c(0.0, 0.0), c(1.0, 0.0)));
        assert_eq!(s.weights()[0], c(0.5, 0.0));
        let (y, e) = lms_step(&mut s, &[c(1.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert_eq!((y, e), (c(0.5, 0.0), c(0.5, 0.0)));
        assert_eq!(s.weights()[0], c(0.75, 0.0));
        assert_eq!(s.updates(), 2);
    }

    #[test]
    fn scalar_channel_fixed_point() {
        let mut rng = RngStream::new(1, 0);
        let h = c(2.0, 0.0);
        let mut s = LmsState::new(1, 0.1).unwrap();
        for _ in 0..500 {
            let d = Sample::from_polar(1.0, std::f64::consts::TAU * rng.uniform());
            s.step(&[h * d], d).unwrap();
        }
        assert!((s.weights()[0].conj() * h - c(1.0, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LmsState::new(0, 0.1).is_err());
        assert!(LmsState::new(3, 0.0).is_err());
        assert!(LmsState::new(3, f64::NAN).is_err());
        let mut s = LmsState::new(2, 0.1).unwrap();
        assert!(matches!(
            s.step(&[c(1.0, 0.0)], c(0.0, 0.0)),
            Err(Error::Framing(_))
        ));
    }

    #[test]
    fn covariance_hand_values() {
        let (r_mat, r_vec) = instantaneous_covariance(&[c(1.0, 0.0), c(0.0, 0.0)], c(1.0, 0.0));
        assert_eq!(
            r_mat,
            vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]
        );
        assert_eq!(r_vec, vec![c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn covariance_is_hermitian_rank_one() {
        let mut rng = RngStream::new(2, 0);
        let x: Vec<Sample> = (0..4).map(|_| rng.complex_gaussian(1.0)).collect();
        let (r, _) = instantaneous_covariance(&x, c(0.3, 0.1));
        for i in 0..4 {
            for j in 0..4 {
                assert!((r[i][j] - r[j][i].conj()).norm() < 1e-15);
                // Every 2x2 minor vanishes for a rank-one matrix.
                for k in 0..4 {
                    for l in 0..4 {
                        assert!((r[i][j] * r[k][l] - r[i][l] * r[k][j]).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_error_leaves_weights() {
        let mut rng = RngStream::new(3, 0);
        let w: Vec<Sample> = (0..3).map(|_| rng.complex_gaussian(1.0)).collect();
        let x: Vec<Sample> = (0..3).map(|_| rng.complex_gaussian(1.0)).collect();
        let mut s = LmsState::with_weights(w.clone(), 0.3).unwrap();
        let d = s.output(&x);
        s.step(&x, d).unwrap();
        assert_eq!(s.weights(), w.as_slice());
    }

    #[test]
    fn divergence_is_reported() {
        let mut s = LmsState::new(1, 8.0).unwrap();
        let err = (0..100)
            .map(|_| s.step(&[c(1.0, 0.0)], c(1.0, 0.0)))
            .find_map(|r| r.err())
            .unwrap();
        assert!(matches!(err, Error::Divergence { mu, .. } if mu == 8.0));
    }

    #[test]
    fn pre_fft_identity_and_gain() {
        let mut rng = RngStream::new(4, 0);
        let tx: Vec<Sample> = (0..2000).map(|_| rng.complex_gaussian(1.0)).collect();
        let (out, trace) = equalize_pre_fft(&tx, &tx[..1500], 1, 0.05, PreFftMode::TrainThenFreeze).unwrap();
        assert!((trace.final_weights[0] - c(1.0, 0.0)).norm() < 1e-3);
        assert!(out[1500..]
            .iter()
            .zip(&tx[1500..])
            .all(|(a, b)| (a - b).norm() < 1e-2));

        let rx: Vec<Sample> = tx.iter().map(|v| v * 0.5).collect();
        let (out, trace) = equalize_pre_fft(&rx, &tx[..1500], 1, 0.05, PreFftMode::TrainThenFreeze).unwrap();
        assert!((trace.final_weights[0] - c(2.0, 0.0)).norm() < 1e-2);
        assert!(out[1500..]
            .iter()
            .zip(&tx[1500..])
            .all(|(a, b)| (a - b).norm() < 1e-2));
    }

    #[test]
    fn pre_fft_needs_enough_training() {
        let x = vec![c(1.0, 0.0); 20];
        assert!(matches!(
            equalize_pre_fft(&x, &x[..5], 11, 0.01, PreFftMode::TrainThenFreeze),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn decision_directed_tracks_with_perfect_decisions() {
        let mut rng = RngStream::new(5, 0);
        let tx: Vec<Sample> = (0..3000)
            .map(|_| Sample::from_polar(1.0, std::f64::consts::TAU * rng.uniform()))
            .collect();
        let rx: Vec<Sample> = tx.iter().map(|v| v * c(0.0, 0.8)).collect();
        // An oracle decider that knows the transmitted block by position.
        let cursor = std::cell::Cell::new(500);
        let decide = |block: &[Sample]| {
            let start = cursor.get();
            cursor.set(start + block.len());
            Ok(tx[start..start + block.len()].to_vec())
        };
        let mode = PreFftMode::DecisionDirected {
            block_len: 250,
            decide: &decide,
        };
        let (out, trace) = equalize_pre_fft(&rx, &tx[..500], 1, 0.05, mode).unwrap();
        assert_eq!(out.len(), 3000);
        assert_eq!(trace.sq_errors.len(), 3000);
        assert!(out[2500..]
            .iter()
            .zip(&tx[2500..])
            .all(|(a, b)| (a - b).norm() < 1e-3));
    }

    #[test]
    fn windowed_mean_drops_partial_tail() {
        assert_eq!(windowed_mean(&[1.0, 3.0, 5.0, 7.0, 9.0], 2), vec![2.0, 6.0]);
    }

    fn dft_response(taps: &[Sample], n: usize) -> Vec<Sample> {
        (0..n)
            .map(|k| {
                taps.iter()
                    .enumerate()
                    .map(|(l, h)| {
                        h * Sample::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * l) as f64 / n as f64)
                    })
                    .sum()
            })
            .collect()
    }

    fn run_pilot_estimator(response: &[Sample], symbols: usize, mu: f64) -> Vec<Sample> {
        let grid = OfdmGrid::standard();
        let pilots = grid.pilots();
        let rx: Vec<Sample> = grid
            .pilot_bins()
            .iter()
            .zip(&pilots)
            .map(|(&k, p)| response[k] * p)
            .collect();
        let mut est = PilotLmsEstimator::new(grid.n_pilots(), mu).unwrap();
        let mut out = Vec::new();
        for _ in 0..symbols {
            out = estimate_pilot_lms(&rx, &pilots, &grid, &mut est).unwrap();
        }
        out
    }

    #[test]
    fn pilot_estimator_flat_channel() {
        let out = run_pilot_estimator(&vec![c(2.0, 0.0); 256], 20, 0.5);
        assert_eq!(out.len(), 200);
        assert!(out.iter().all(|h| (h - c(2.0, 0.0)).norm() < 1e-3));
    }

    #[test]
    fn pilot_estimator_unit_step_is_least_squares() {
        let grid = OfdmGrid::standard();
        let mut rng = RngStream::new(9, 0);
        let rx: Vec<Sample> = (0..grid.n_pilots()).map(|_| rng.complex_gaussian(1.0)).collect();
        let tx = grid.pilots();
        let mut est = PilotLmsEstimator::new(grid.n_pilots(), 1.0).unwrap();
        est.update(&rx, &tx).unwrap();
        for ((h, r), t) in est.pilot_estimates().iter().zip(&rx).zip(&tx) {
            assert!((h - r / t).norm() < 1e-12);
        }
    }

    #[test]
    fn pilot_estimator_static_channel() {
        let grid = OfdmGrid::standard();
        let taps = crate::channel::normalize_taps(&crate::channel::table_taps());
        let h = dft_response(&taps, grid.fft_size());
        let out = run_pilot_estimator(&h, 40, 0.5);
        for (pos, &bin) in grid.active_bins().iter().enumerate() {
            let rel = (out[pos] - h[bin]).norm() / h[bin].norm();
            if grid.pilot_positions().contains(&pos) {
                assert!((out[pos] - h[bin]).norm() < 1e-3);
            } else {
                assert!(rel < 0.05, "bin {bin}: relative error {rel}");
            }
        }
    }

    #[test]
    fn pilot_estimator_rejects_mismatched_lengths() {
        let mut est = PilotLmsEstimator::new(3, 0.5).unwrap();
        assert!(matches!(
            est.update(&[c(1.0, 0.0); 2], &[c(1.0, 0.0); 3]),
            Err(Error::Framing(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn update_is_steepest_descent_on_instantaneous_estimates(seed in any::<u64>(), n in 1usize..12, mu in 0.0f64..0.5) {
                let mut rng = RngStream::new(seed, 0);
                let w: Vec<Sample> = (0..n).map(|_| rng.complex_gaussian(1.0)).collect();
                let x: Vec<Sample> = (0..n).map(|_| rng.complex_gaussian(1.0)).collect();
                let d = rng.complex_gaussian(1.0);
                let mut s = LmsState::with_weights(w.clone(), mu).unwrap();
                lms_step(&mut s, &x, d).unwrap();
                let (r_mat, r_vec) = instantaneous_covariance(&x, d);
                for i in 0..n {
                    let rw: Sample = (0..n).map(|j| r_mat[i][j] * w[j]).sum();
                    prop_assert!((w[i] + (r_vec[i] - rw) * mu - s.weights()[i]).norm() < 1e-12);
                }
                prop_assert_eq!(s.n_taps(), n);
                prop_assert_eq!(s.updates(), 1);
            }

            #[test]
            fn zero_error_is_a_fixed_point(seed in any::<u64>(), n in 1usize..12, mu in 0.0f64..1.0) {
                let mut rng = RngStream::new(seed, 1);
                let w: Vec<Sample> = (0..n).map(|_| rng.complex_gaussian(1.0)).collect();
                let x: Vec<Sample> = (0..n).map(|_| rng.complex_gaussian(1.0)).collect();
                let mut s = LmsState::with_weights(w.clone(), mu).unwrap();
                let d = s.output(&x);
                let (_, e) = lms_step(&mut s, &x, d).unwrap();
                prop_assert!(e.norm() < 1e-15);
                prop_assert_eq!(s.weights(), &w[..]);
            }

            // Noiseless, realizable identification with white input.
            #[test]
            fn identification_learning_curve_never_rises(seed in any::<u64>(), n in 1usize..9) {
                let mut rng = RngStream::new(seed, 2);
                let target: Vec<Sample> = (0..n).map(|_| rng.complex_gaussian(1.0)).collect();
                let input: Vec<Sample> = (0..2000 + n).map(|_| rng.complex_gaussian(1.0)).collect();
                let mut s = LmsState::new(n, 0.005).unwrap();
                let mut sq = Vec::with_capacity(2000);
                for t in 0..2000 {
                    let x: Vec<Sample> = (0..n).map(|k| input[t + n - k]).collect();
                    let d: Sample = target.iter().zip(&x).map(|(w, v)| w.conj() * v).sum();
                    let (_, e) = lms_step(&mut s, &x, d).unwrap();
                    sq.push(e.norm_sqr());
                }
                let w = windowed_mean(&sq, MSE_WINDOW);
                for i in 2..w.len() {
                    prop_assert!(w[i] <= w[i - 1], "window {} rose: {} -> {}", i, w[i - 1], w[i]);
                }
            }
        }
    }
}
