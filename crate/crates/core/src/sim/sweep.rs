//! Monte-Carlo sweeps over the configured grid.
//!
//! Points are independent jobs, each with its own random stream keyed by the
//! point index, so the parallel and sequential paths yield identical results.

use std::path::{Path, PathBuf};

use super::compare::comparison_summary;
use super::config::SimConfig;
use super::csv::points_to_csv;
use super::link::{run_point, BerPoint, PointSpec};
use super::plot::render_svg;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled and falls
    /// back to sequential execution otherwise.
    #[default]
    Parallel,
}

#[derive(Debug)]
pub struct SweepReport {
    /// Successful points, ordered by point index.
    pub points: Vec<BerPoint>,
    pub failures: Vec<Error>,
}

impl SweepReport {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Grid in lexicographic `(snr, modulation, channel, coding)` order.
pub fn enumerate_points(cfg: &SimConfig) -> Vec<PointSpec> {
    let mut points = Vec::new();
    for snr_db in cfg.snr_grid() {
        for &modulation in &cfg.modulations {
            for &channel in &cfg.channels {
                for &coding in &cfg.codings {
                    points.push(PointSpec {
                        index: points.len() as u64,
                        snr_db,
                        modulation,
                        channel,
                        coding,
                    });
                }
            }
        }
    }
    points
}

#[cfg(feature = "parallel")]
fn run_all(cfg: &SimConfig, specs: &[PointSpec], exec: Execution) -> Vec<Result<BerPoint>> {
    use rayon::prelude::*;
    match exec {
        Execution::Parallel => specs.par_iter().map(|p| run_point(cfg, p)).collect(),
        Execution::Sequential => specs.iter().map(|p| run_point(cfg, p)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_all(cfg: &SimConfig, specs: &[PointSpec], _exec: Execution) -> Vec<Result<BerPoint>> {
    specs.iter().map(|p| run_point(cfg, p)).collect()
}

pub fn run_sweep_with(cfg: &SimConfig, exec: Execution) -> SweepReport {
    let specs = enumerate_points(cfg);
    let mut points = Vec::with_capacity(specs.len());
    let mut failures = Vec::new();
    for result in run_all(cfg, &specs, exec) {
        match result {
            Ok(p) => points.push(p),
            Err(e) => failures.push(e),
        }
    }
    points.sort_by_key(|p| p.index);
    SweepReport { points, failures }
}

pub fn run_sweep(cfg: &SimConfig) -> SweepReport {
    run_sweep_with(cfg, Execution::default())
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes `ber.csv`, plus `ber.svg` when there is anything to plot and
/// `comparison.txt` when coded and uncoded series can be paired.
pub fn write_sweep_artifacts(points: &[BerPoint], out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = vec![write(out_dir.join("ber.csv"), &points_to_csv(points))?];
    if !points.is_empty() {
        written.push(write(out_dir.join("ber.svg"), &render_svg(points)?)?);
    }
    if let Some(summary) = comparison_summary(points) {
        written.push(write(out_dir.join("comparison.txt"), &summary)?);
    }
    Ok(written)
}
