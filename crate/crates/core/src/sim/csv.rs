//! BER point CSV: fixed header, one row per point, `%.6g`-style floats and
//! LF line endings.

use super::link::BerPoint;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "modulation,channel,coding,receiver_mode,snr_db,ebn0_db,bits,errors,ber,seed";

/// Formats like C's `%.6g`.
pub fn format_g6(x: f64) -> String {
    const PRECISION: i32 = 6;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn points_to_csv(points: &[BerPoint]) -> String {
    let mut out = String::with_capacity(64 * (points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            p.modulation,
            p.channel,
            p.coding,
            p.receiver_mode,
            format_g6(p.snr_db),
            format_g6(p.ebn0_db),
            p.bits,
            p.errors,
            format_g6(p.ber),
            p.seed
        ));
    }
    out
}

/// Reads rows written by [`points_to_csv`]; row order becomes the index.
pub fn parse_points_csv(text: &str) -> Result<Vec<BerPoint>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config("empty points file".into()))?;
    let columns: Vec<&str> = header.trim().split(',').collect();
    let col = |name: &str| {
        columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| Error::Config(format!("points file lacks a {name:?} column")))
    };
    let idx: Vec<usize> = CSV_HEADER.split(',').map(col).collect::<Result<_>>()?;
    let mut points = Vec::new();
    for (row, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        let get = |i: usize| {
            fields
                .get(idx[i])
                .copied()
                .ok_or_else(|| Error::Config(format!("row {} is missing fields", row + 2)))
        };
        let num = |i: usize| -> Result<f64> {
            get(i)?
                .parse()
                .map_err(|_| Error::Config(format!("row {}: bad number {:?}", row + 2, fields[idx[i]])))
        };
        let int = |i: usize| -> Result<u64> {
            get(i)?
                .parse()
                .map_err(|_| Error::Config(format!("row {}: bad integer {:?}", row + 2, fields[idx[i]])))
        };
        points.push(BerPoint {
            index: row as u64,
            modulation: get(0)?.to_string(),
            channel: get(1)?.to_string(),
            coding: get(2)?.to_string(),
            receiver_mode: get(3)?.to_string(),
            snr_db: num(4)?,
            ebn0_db: num(5)?,
            bits: int(6)?,
            errors: int(7)?,
            ber: num(8)?,
            seed: int(9)?,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g6_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (2.0, "2"),
            (50.0, "50"),
            (-3.0103, "-3.0103"),
            (6.98970004336, "6.9897"),
            (0.0125, "0.0125"),
            (1.2494e-5, "1.2494e-05"),
            (2.5e-6, "2.5e-06"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001, "1e-05"),
            (999999.5, "1e+06"),
            (1.0 / 3.0, "0.333333"),
        ];
        for (x, expected) in cases {
            assert_eq!(format_g6(x), expected, "{x}");
        }
    }

    #[test]
    fn header_only_for_no_points() {
        assert_eq!(points_to_csv(&[]), format!("{CSV_HEADER}\n"));
        assert!(parse_points_csv(&points_to_csv(&[])).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn g6_keeps_six_significant_digits(x in -1e9f64..1e9) {
            let parsed: f64 = format_g6(x).parse().unwrap();
            prop_assert!((parsed - x).abs() <= 5e-6 * x.abs().max(1e-300));
        }

        #[test]
        fn csv_rows_parse_back(errors in 0u64..1000, extra in 0u64..100_000, snr in -10f64..60.0, seed: u64) {
            let bits = errors + extra + 1;
            let p = BerPoint {
                index: 0,
                modulation: "64qam".into(),
                channel: "rician_fd40".into(),
                coding: "cc_k7".into(),
                receiver_mode: "pilot_fd_lms".into(),
                snr_db: snr,
                ebn0_db: snr - 3.0,
                bits,
                errors,
                ber: errors as f64 / bits as f64,
                seed,
            };
            let back = &parse_points_csv(&points_to_csv(std::slice::from_ref(&p))).unwrap()[0];
            prop_assert_eq!(&back.modulation, &p.modulation);
            prop_assert_eq!((back.bits, back.errors, back.seed), (p.bits, p.errors, p.seed));
            prop_assert!((back.ber - p.ber).abs() <= 5e-6 * p.ber);
            prop_assert!((back.snr_db - p.snr_db).abs() <= 5e-6 * p.snr_db.abs().max(1e-300));
        }
    }
}
