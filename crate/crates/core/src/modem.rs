//! Gray-coded PSK and square-QAM constellations with unit mean energy.
//!
//! Bit groups are read most-significant bit first. PSK rings start at angle
//! zero (QPSK is rotated by pi/4 so that `00` lands on `(1+j)/sqrt 2`) and
//! carry a binary-reflected Gray code around the ring. Square QAM uses an
//! independent Gray code per axis: the upper half of the label picks the
//! in-phase level, the lower half the quadrature level.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Psk,
    Qam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modulation {
    Qpsk,
    Psk16,
    Psk64,
    Psk256,
    Qam16,
    Qam64,
    Qam256,
}

impl Modulation {
    pub const ALL: [Modulation; 7] = [
        Modulation::Qpsk,
        Modulation::Psk16,
        Modulation::Psk64,
        Modulation::Psk256,
        Modulation::Qam16,
        Modulation::Qam64,
        Modulation::Qam256,
    ];

    pub fn family(self) -> Family {
        match self {
            Modulation::Qpsk | Modulation::Psk16 | Modulation::Psk64 | Modulation::Psk256 => Family::Psk,
            _ => Family::Qam,
        }
    }

    pub fn order(self) -> usize {
        1 << self.bits_per_symbol()
    }

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Psk16 | Modulation::Qam16 => 4,
            Modulation::Psk64 | Modulation::Qam64 => 6,
            Modulation::Psk256 | Modulation::Qam256 => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Qpsk => "qpsk",
            Modulation::Psk16 => "16psk",
            Modulation::Psk64 => "64psk",
            Modulation::Psk256 => "256psk",
            Modulation::Qam16 => "16qam",
            Modulation::Qam64 => "64qam",
            Modulation::Qam256 => "256qam",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect();
        Ok(match key.as_str() {
            "qpsk" | "4psk" | "4qam" => Modulation::Qpsk,
            "16psk" => Modulation::Psk16,
            "64psk" => Modulation::Psk64,
            "256psk" => Modulation::Psk256,
            "16qam" => Modulation::Qam16,
            "64qam" => Modulation::Qam64,
            "256qam" => Modulation::Qam256,
            _ => return Err(Error::Config(format!("unknown modulation {s:?}"))),
        })
    }
}

pub fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Point and label tables for one modulation.
///
/// `points[i]` carries label `labels[i]`; `index_of_label` inverts that.
#[derive(Debug, Clone)]
pub struct Constellation {
    modulation: Modulation,
    points: Vec<Sample>,
    labels: Vec<usize>,
    index_of_label: Vec<usize>,
    // PSK ring rotation, or QAM per-axis level spacing scale.
    offset: f64,
    scale: f64,
}

impl Constellation {
    pub fn new(modulation: Modulation) -> Self {
        let m = modulation.order();
        let (points, labels, offset, scale) = match modulation.family() {
            Family::Psk => {
                let offset = if modulation == Modulation::Qpsk {
                    FRAC_PI_4
                } else {
                    0.0
                };
                let points = (0..m)
                    .map(|i| Sample::from_polar(1.0, offset + 2.0 * PI * i as f64 / m as f64))
                    .collect();
                let labels = (0..m).map(gray).collect();
                (points, labels, offset, 1.0)
            }
            Family::Qam => {
                let side = 1usize << (modulation.bits_per_symbol() / 2);
                let half_bits = modulation.bits_per_symbol() / 2;
                // Mean of (2i - L + 1)^2 over both axes is 2(M - 1)/3.
                let scale = (1.5 / (m as f64 - 1.0)).sqrt();
                let level = |i: usize| (2.0 * i as f64 - side as f64 + 1.0) * scale;
                let mut points = Vec::with_capacity(m);
                let mut labels = Vec::with_capacity(m);
                for i_idx in 0..side {
                    for q_idx in 0..side {
                        points.push(Sample::new(level(i_idx), level(q_idx)));
                        labels.push((gray(i_idx) << half_bits) | gray(q_idx));
                    }
                }
                (points, labels, 0.0, scale)
            }
        };
        let mut index_of_label = vec![0; m];
        for (i, &l) in labels.iter().enumerate() {
            index_of_label[l] = i;
        }
        Self {
            modulation,
            points,
            labels,
            index_of_label,
            offset,
            scale,
        }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Sample] {
        &self.points
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn point_for_label(&self, label: usize) -> Sample {
        self.points[self.index_of_label[label]]
    }

    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.order() as f64
    }

    /// Index of the nearest point; ties go to the lowest index.
    pub fn nearest_index(&self, z: Sample) -> usize {
        let m = self.order();
        let mut candidates = [0usize; 9];
        let mut count = 0;
        match self.modulation.family() {
            Family::Psk => {
                // Near the origin every ring point is (almost) equidistant and
                // rounding in |p|^2 decides, so search exhaustively.
                if z.norm_sqr() < 1e-18 {
                    return self.exhaustive_nearest(z);
                }
                let pos = ((z.arg() - self.offset) * m as f64 / (2.0 * PI)).round() as i64;
                for d in -1..=1 {
                    candidates[count] = (pos + d).rem_euclid(m as i64) as usize;
                    count += 1;
                }
            }
            Family::Qam => {
                let side = 1usize << (self.bits_per_symbol() / 2);
                let axis = |v: f64| {
                    let raw = ((v / self.scale + side as f64 - 1.0) / 2.0).round();
                    raw.clamp(0.0, side as f64 - 1.0) as i64
                };
                let (ci, cq) = (axis(z.re), axis(z.im));
                for di in -1..=1 {
                    for dq in -1..=1 {
                        let (i, q) = (ci + di, cq + dq);
                        if (0..side as i64).contains(&i) && (0..side as i64).contains(&q) {
                            candidates[count] = i as usize * side + q as usize;
                            count += 1;
                        }
                    }
                }
            }
        }
        let candidates = &mut candidates[..count];
        candidates.sort_unstable();
        let mut best = candidates[0];
        let mut best_dist = (z - self.points[best]).norm_sqr();
        for &c in candidates.iter().skip(1) {
            let d = (z - self.points[c]).norm_sqr();
            if d < best_dist {
                best = c;
                best_dist = d;
            }
        }
        best
    }

    fn exhaustive_nearest(&self, z: Sample) -> usize {
        let mut best = 0;
        let mut best_dist = (z - self.points[0]).norm_sqr();
        for (i, p) in self.points.iter().enumerate().skip(1) {
            let d = (z - p).norm_sqr();
            if d < best_dist {
                best = i;
                best_dist = d;
            }
        }
        best
    }

    pub fn decide(&self, z: Sample) -> Sample {
        self.points[self.nearest_index(z)]
    }
}

/// Maps MSB-first bit groups onto constellation points.
pub fn map_bits(bits: &[u8], constellation: &Constellation) -> Result<Vec<Sample>> {
    let k = constellation.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(Error::Framing(format!(
            "{} bits do not fill whole {}-bit symbols",
            bits.len(),
            k
        )));
    }
    Ok(bits
        .chunks_exact(k)
        .map(|group| {
            let label = group.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
            constellation.point_for_label(label)
        })
        .collect())
}

/// Minimum-distance hard decisions, returned as MSB-first bits.
pub fn demap_hard(symbols: &[Sample], constellation: &Constellation) -> Vec<u8> {
    let k = constellation.bits_per_symbol();
    let mut bits = Vec::with_capacity(symbols.len() * k);
    for &z in symbols {
        let label = constellation.labels[constellation.nearest_index(z)];
        bits.extend((0..k).rev().map(|s| ((label >> s) & 1) as u8));
    }
    bits
}
