use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ofdm_lms::sim::{
    emit_plot, enumerate_points, format_g6, generate_source, parse_points_csv, reconstruct_sine,
    run_lms_trace, run_sweep_with, simulate_link, trace_to_csv, write_sweep_artifacts, Execution, SimConfig,
    SourceKind,
};
use ofdm_lms::{Error, Result, RngStream};

#[derive(Parser)]
#[command(name = "sim", version, about = "OFDM link simulator with LMS equalization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo BER sweep; writes ber.csv, ber.svg and comparison.txt.
    BerSweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Run points one at a time instead of on the thread pool.
        #[arg(long)]
        sequential: bool,
    },
    /// Sends the 1 kHz sine PCM source through the link at every grid SNR.
    DemoAudio {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Per-step squared error of the pre-FFT equalizer during training.
    LmsTrace {
        #[arg(long)]
        config: PathBuf,
        /// Adds channel noise at this Es/N0; noiseless when omitted.
        #[arg(long)]
        snr_db: Option<f64>,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Renders a BER CSV into an SVG chart.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn sweep(cfg: &SimConfig, out: &Path, exec: Execution) -> Result<bool> {
    let report = run_sweep_with(cfg, exec);
    for failure in &report.failures {
        eprintln!("error: {failure}");
    }
    for path in write_sweep_artifacts(&report.points, out)? {
        println!("wrote {}", path.display());
    }
    Ok(report.is_success())
}

fn demo_audio(cfg: &SimConfig, out: &Path) -> Result<bool> {
    let mut cfg = cfg.clone();
    cfg.source = SourceKind::SinePcm;
    let ok = sweep(&cfg, out, Execution::Parallel)?;

    // Waveform at the top of the SNR grid for the first configured combination.
    let specs = enumerate_points(&cfg);
    let combos = cfg.modulations.len() * cfg.channels.len() * cfg.codings.len();
    let Some(spec) = specs.get(specs.len().saturating_sub(combos)) else {
        return Ok(ok);
    };
    let info = generate_source(cfg.n_bits)?;
    let mut rng = RngStream::new(cfg.seed, spec.index);
    let outcome = simulate_link(&cfg, spec, &info, &mut rng)?;
    let sent = reconstruct_sine(&info);
    let received = reconstruct_sine(&outcome.decoded);
    let mut csv = String::from("sample,sent,received\n");
    for (n, (s, r)) in sent.iter().zip(&received).enumerate() {
        csv.push_str(&format!("{n},{},{}\n", format_g6(*s), format_g6(*r)));
    }
    let path = out.join("audio.csv");
    write_file(&path, &csv)?;
    println!("wrote {} (snr {} dB)", path.display(), format_g6(spec.snr_db));
    Ok(ok)
}

fn lms_trace(cfg: &SimConfig, snr_db: Option<f64>, out: Option<&Path>) -> Result<()> {
    let report = run_lms_trace(cfg, snr_db)?;
    let csv = trace_to_csv(&report.trace);
    match out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    eprintln!(
        "mu {}{}, initial mse {}, final mse {}, windows non-increasing: {}",
        format_g6(report.trace.mu),
        if report.mu_swept { " (swept)" } else { "" },
        format_g6(report.initial_mse()),
        format_g6(report.final_mse()),
        report.is_non_increasing()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::BerSweep {
            config,
            seed,
            out,
            sequential,
        } => {
            let mut cfg = SimConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            sweep(&cfg, &out, exec)
        }
        Command::DemoAudio { config, out } => demo_audio(&SimConfig::load(&config)?, &out),
        Command::LmsTrace { config, snr_db, out } => {
            lms_trace(&SimConfig::load(&config)?, snr_db, out.as_deref())?;
            Ok(true)
        }
        Command::Plot { input, out } => {
            let text = fs::read_to_string(&input).map_err(|e| Error::io(&input, e))?;
            emit_plot(&parse_points_csv(&text)?, &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
