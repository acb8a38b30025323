//! Coded-versus-uncoded comparison. Reports both the vertical gap (BER ratio
//! at equal channel SNR) and the horizontal gap (Eb/N0 difference at equal BER).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::csv::format_g6;
use super::link::BerPoint;
use super::plot::plotted_ber;

pub const TARGET_BERS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Eb/N0 at which the curve first falls to `target`, interpolating log10 BER
/// linearly between neighbouring points.
pub fn ebn0_at_ber(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    let t = target.log10();
    for w in curve.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let (l0, l1) = (y0.log10(), y1.log10());
        if l0 >= t && l1 <= t {
            if (l0 - l1).abs() < 1e-15 {
                return Some(x0);
            }
            return Some(x0 + (l0 - t) / (l0 - l1) * (x1 - x0));
        }
    }
    None
}

fn curve(points: &[&BerPoint]) -> Vec<(f64, f64)> {
    let mut c: Vec<(f64, f64)> = points.iter().map(|p| (p.ebn0_db, plotted_ber(p).0)).collect();
    c.sort_by(|a, b| a.0.total_cmp(&b.0));
    c
}

pub fn comparison_summary(points: &[BerPoint]) -> Option<String> {
    type Key = (String, String, String);
    let mut groups: BTreeMap<Key, BTreeMap<String, Vec<&BerPoint>>> = BTreeMap::new();
    for p in points {
        groups
            .entry((p.modulation.clone(), p.channel.clone(), p.receiver_mode.clone()))
            .or_default()
            .entry(p.coding.clone())
            .or_default()
            .push(p);
    }
    let mut out = String::new();
    for ((modulation, channel, receiver), codings) in &groups {
        let (Some(uncoded), Some(coded)) = (codings.get("none"), codings.get("cc_k7")) else {
            continue;
        };
        let _ = writeln!(out, "# {modulation} {channel} {receiver}: cc_k7 vs none");
        let _ = writeln!(out, "vertical (equal SNR): snr_db,ber_none,ber_cc_k7,gap_decades");
        for u in uncoded {
            let key = format_g6(u.snr_db);
            if let Some(c) = coded.iter().find(|c| format_g6(c.snr_db) == key) {
                let gap = if u.errors > 0 && c.errors > 0 {
                    format_g6((u.ber / c.ber).log10())
                } else {
                    "n/a".into()
                };
                let _ = writeln!(out, "{key},{},{},{gap}", format_g6(u.ber), format_g6(c.ber));
            }
        }
        let _ = writeln!(
            out,
            "horizontal (equal BER): target_ber,ebn0_none_db,ebn0_cc_k7_db,gap_db"
        );
        let (cu, cc) = (curve(uncoded), curve(coded));
        for target in TARGET_BERS {
            let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), format_g6);
            let (a, b) = (ebn0_at_ber(&cu, target), ebn0_at_ber(&cc, target));
            let gap = a.zip(b).map(|(a, b)| a - b);
            let _ = writeln!(out, "{},{},{},{}", format_g6(target), fmt(a), fmt(b), fmt(gap));
        }
        out.push('\n');
    }
    (!out.is_empty()).then_some(out)
}
