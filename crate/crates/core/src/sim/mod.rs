//! Batch harness: configuration, source generation, end-to-end link
//! simulation, BER sweeps and their CSV/SVG artifacts.

mod compare;
mod config;
mod csv;
mod link;
mod plot;
mod source;
mod sweep;
mod trace;

pub use compare::comparison_summary;
pub use config::{Coding, ReceiverMode, SimConfig, SourceKind};
pub use csv::{format_g6, parse_points_csv, points_to_csv, CSV_HEADER};
pub use link::{ebn0_from_esn0, run_point, simulate_link, BerPoint, LinkOutcome, PointSpec};
pub use plot::{emit_plot, render_svg};
pub use source::{generate_source, reconstruct_sine, PCM_SCALE};
pub use sweep::{enumerate_points, run_sweep, run_sweep_with, write_sweep_artifacts, Execution, SweepReport};
pub use trace::{run_lms_trace, trace_to_csv, LmsTraceReport};
