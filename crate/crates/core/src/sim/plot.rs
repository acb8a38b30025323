//! SVG rendering of BER curves: linear Eb/N0 axis, log10 BER axis with decade
//! gridlines, one polyline per (modulation, channel, coding) series.
//!
//! Zero-error points are drawn at the floor `1 / (2 bits)` with a hollow
//! triangle instead of a filled circle.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::csv::format_g6;
use super::link::BerPoint;
use crate::{Error, Result};

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 560.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 620.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 500.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf",
];

/// Plotted BER: the measured value, or the floor for zero-error points.
pub fn plotted_ber(p: &BerPoint) -> (f64, bool) {
    if p.errors == 0 {
        (1.0 / (2.0 * p.bits.max(1) as f64), true)
    } else {
        (p.ber, false)
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

pub fn render_svg(points: &[BerPoint]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::Config("no BER points to plot".into()));
    }
    let mut series: BTreeMap<(String, String, String), Vec<&BerPoint>> = BTreeMap::new();
    for p in points {
        series.entry(p.series_key()).or_default().push(p);
    }
    for s in series.values_mut() {
        s.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db).then(a.index.cmp(&b.index)));
    }

    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        let (y, _) = plotted_ber(p);
        x_min = x_min.min(p.ebn0_db);
        x_max = x_max.max(p.ebn0_db);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if x_max - x_min < 1e-9 {
        x_min -= 1.0;
        x_max += 1.0;
    }
    let step = nice_step(x_max - x_min);
    x_min = (x_min / step).floor() * step;
    x_max = (x_max / step).ceil() * step;
    let dec_lo = y_min.log10().floor() as i32;
    let mut dec_hi = (y_max.log10().ceil() as i32).min(0);
    if dec_hi <= dec_lo {
        dec_hi = dec_lo + 1;
    }

    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * (RIGHT - LEFT);
    let sy = |y: f64| BOTTOM - (y.log10() - dec_lo as f64) / (dec_hi - dec_lo) as f64 * (BOTTOM - TOP);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(svg, r##"<g class="grid" stroke="#cccccc" stroke-width="1">"##);
    for d in dec_lo..=dec_hi {
        let y = sy(10f64.powi(d));
        let _ = writeln!(
            svg,
            r#"<line class="decade" x1="{LEFT:.2}" y1="{y:.2}" x2="{RIGHT:.2}" y2="{y:.2}"/>"#
        );
    }
    let n_ticks = ((x_max - x_min) / step).round() as i64;
    for i in 0..=n_ticks {
        let x = sx(x_min + i as f64 * step);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{BOTTOM:.2}"/>"#
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    for d in dec_lo..=dec_hi {
        let y = sy(10f64.powi(d));
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for i in 0..=n_ticks {
        let v = x_min + i as f64 * step;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(v),
            BOTTOM + 18.0,
            format_g6(v)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Eb/N0 (dB)</text>"#,
        (LEFT + RIGHT) / 2.0,
        BOTTOM + 42.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">BER</text>"#,
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0
    );

    for (i, ((modulation, channel, coding), pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.ebn0_db), sy(plotted_ber(p).0)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        for p in pts {
            let (y, floor) = plotted_ber(p);
            let (cx, cy) = (sx(p.ebn0_db), sy(y));
            if floor {
                let _ = writeln!(
                    svg,
                    r#"<path class="floor" d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2} Z" fill="none" stroke="{color}"/>"#,
                    cx,
                    cy + 4.0,
                    cx - 4.0,
                    cy - 4.0,
                    cx + 4.0,
                    cy - 4.0
                );
            } else {
                let _ = writeln!(svg, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="{color}"/>"#);
            }
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            RIGHT + 15.0,
            RIGHT + 40.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{modulation} / {channel} / {coding}</text>"#,
            RIGHT + 46.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot(points: &[BerPoint], path: impl AsRef<Path>) -> Result<()> {
    let svg = render_svg(points)?;
    std::fs::write(path.as_ref(), svg).map_err(|e| Error::io(path.as_ref(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(ebn0: f64, errors: u64, bits: u64) -> BerPoint {
        BerPoint {
            index: 0,
            modulation: "qpsk".into(),
            channel: "awgn".into(),
            coding: "none".into(),
            receiver_mode: "known_channel_zf".into(),
            snr_db: ebn0 + 3.0,
            ebn0_db: ebn0,
            bits,
            errors,
            ber: errors as f64 / bits as f64,
            seed: 1,
        }
    }

    #[test]
    fn one_series_one_polyline() {
        let pts = vec![pt(0.0, 1000, 10_000), pt(2.0, 300, 10_000), pt(4.0, 20, 10_000)];
        let svg = render_svg(&pts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.matches(r#"class="decade""#).count() >= 2);
        assert!(svg.contains(">1e-1<") && svg.contains(">1e-3<"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn zero_error_points_sit_on_the_floor() {
        let p = pt(10.0, 0, 200_000);
        assert_eq!(plotted_ber(&p), (2.5e-6, true));
        let svg = render_svg(&[pt(8.0, 10, 200_000), p]).unwrap();
        assert_eq!(svg.matches(r#"class="floor""#).count(), 1);
    }

    #[test]
    fn deterministic_output() {
        let pts = vec![pt(0.0, 1000, 10_000), pt(2.0, 0, 10_000)];
        assert_eq!(render_svg(&pts).unwrap(), render_svg(&pts).unwrap());
    }

    #[test]
    fn nothing_to_plot() {
        assert!(render_svg(&[]).is_err());
    }
}
