use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aperiodic_walk::runner::{self, parse_angle, SeedChoice, Settings};
use aperiodic_walk::{CoinFamily, Observable, Protocol};

#[derive(Parser)]
#[command(name = "aqw", version, about = "Quantum walks with aperiodic jump sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a jump sequence and write its diagnostics (PSD, ACF, ones fraction, LZC)
    Seq(Flags),
    /// Run one walk and write its observable series
    Walk(Flags),
    /// Fit diffusion exponents over a grid of coin angles
    Sweep(Flags),
    /// Write the normalized spin-asymmetry carpet of one walk
    Carpet(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// JSON or key=value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Protocol name (sweep: comma-separated list)
    #[arg(long, value_delimiter = ',')]
    protocol: Option<Vec<Protocol>>,
    /// Coin family H or K (sweep: comma-separated list)
    #[arg(long, value_delimiter = ',')]
    coin: Option<Vec<CoinFamily>>,
    /// Coin angle in radians, e.g. 0.7 or pi/4 (sweep: comma-separated grid)
    #[arg(long, value_delimiter = ',', value_parser = parse_theta)]
    theta: Option<Vec<f64>>,
    /// Evenly spaced sweep angles on [0, π/2] when --theta is absent
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    tmax: Option<usize>,
    /// 0, 1, or `both` (sweeps average over both)
    #[arg(long)]
    seed_symbol: Option<SeedChoice>,
    /// Shuffle seed of the random protocol
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Recording interval (seq: LZC prefix stride)
    #[arg(long)]
    stride: Option<usize>,
    /// Largest autocorrelation lag
    #[arg(long)]
    max_lag: Option<usize>,
    /// Observables to record, e.g. m2,S,IPR
    #[arg(long, value_delimiter = ',')]
    fields: Option<Vec<Observable>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the classical walk
    #[arg(long)]
    classical: bool,
    /// Default t_max to the full-scale 2×10⁵ steps
    #[arg(long)]
    full_scale: bool,
    /// Also write carpet.csv (walk)
    #[arg(long)]
    carpet: bool,
    /// Average the summary over the last N steps
    #[arg(long)]
    tail: Option<usize>,
    /// Evaluate sweep cells one at a time
    #[arg(long)]
    sequential: bool,
}

fn parse_theta(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

impl Flags {
    fn settings(self) -> aperiodic_walk::Result<Settings> {
        let base = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let flag = |b: bool| b.then_some(true);
        Ok(base.overridden_by(Settings {
            protocol: self.protocol,
            coin: self.coin,
            theta: self.theta,
            grid_points: self.grid_points,
            tmax: self.tmax,
            seed_symbol: self.seed_symbol,
            rng_seed: self.rng_seed,
            stride: self.stride,
            max_lag: self.max_lag,
            fields: self.fields,
            out: self.out,
            classical: flag(self.classical),
            full_scale: flag(self.full_scale),
            carpet: flag(self.carpet),
            tail: self.tail,
            sequential: flag(self.sequential),
        }))
    }
}

fn run(cli: Cli) -> aperiodic_walk::Result<()> {
    match cli.command {
        Command::Seq(flags) => {
            let report = runner::run_seqreport(&flags.settings()?)?;
            for f in &report.files {
                println!("{}", f.display());
            }
        }
        Command::Walk(flags) => {
            let run = runner::run_single(&flags.settings()?)?;
            for f in &run.files {
                println!("{}", f.display());
            }
            if let Some(fit) = run.fit {
                println!("alpha = {} over [{}, {}]", fit.alpha, fit.window[0], fit.window[1]);
            }
        }
        Command::Sweep(flags) => {
            let sweep = flags.settings()?.sweep_config()?;
            let result = runner::run_sweep(&sweep)?;
            for f in &result.files {
                println!("{}", f.display());
            }
        }
        Command::Carpet(flags) => {
            let path = runner::run_carpet(&flags.settings()?)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
