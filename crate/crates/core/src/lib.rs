//! Link-level simulator for an OFDM system with LMS adaptive equalization.
//!
//! The transmit chain maps information bits (optionally convolutionally
//! encoded) onto Gray-coded PSK/QAM constellations, frames them into OFDM
//! symbols with comb pilots and a cyclic prefix, and passes the time signal
//! through AWGN, static multipath or Rician/Jakes fading. The receiver either
//! uses the true channel, a per-pilot LMS estimator with interpolation, or a
//! time-domain LMS transversal equalizer in front of the FFT.
//!
//! [`sim`] drives Monte-Carlo BER sweeps and emits CSV and SVG artifacts.

pub mod channel;
pub mod equalizer;
mod error;
pub mod fec;
pub mod modem;
pub mod numerics;
pub mod ofdm;
pub mod sim;

pub use error::{Error, Result};
pub use numerics::{RngStream, Sample};
