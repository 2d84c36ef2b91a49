//! Experiment orchestration: settings resolution (config file + flag
//! overrides), single runs, θ-sweeps and sequence reports, each writing a
//! fixed set of files.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::observables::{default_window, fit_alpha, FitResult};
use crate::sequences::{generate, BinarySequence, Protocol};
use crate::seqstats::{autocorrelation, lzc_curve, ones_fraction_curve, psd};
use crate::series::Observable;
use crate::walk::{classical_evolve, default_stride, evolve, CoinFamily, CoinSpec, Evolution, RunConfig};

/// Desk-scale default run length.
pub const DEFAULT_T_MAX: usize = 2000;
/// Run length of the published exponent curves, used by `full_scale`.
pub const FULL_SCALE_T_MAX: usize = 200_000;
pub const DEFAULT_GRID_POINTS: usize = 33;
pub const DEFAULT_LZC_STRIDE: usize = 100;
pub const DEFAULT_MAX_LAG: usize = 100;
pub const DEFAULT_RNG_SEED: u64 = 0;

/// Parses `0.3`, `pi`, `pi/4`, `3pi/8` or `3*pi/8` as radians.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::config("theta", format!("cannot read `{text}` as an angle"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let factor = num
        .strip_suffix("pi")
        .ok_or_else(bad)?
        .trim_end_matches('*');
    let factor = if factor.is_empty() {
        1.0
    } else {
        factor.parse::<f64>().map_err(|_| bad())?
    };
    Ok(factor * PI / den)
}

fn de_angle<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<f64>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum One {
        Num(f64),
        Text(String),
    }
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Many {
        One(One),
        List(Vec<One>),
    }
    let read = |o: One| match o {
        One::Num(v) => Ok(v),
        One::Text(t) => t
            .split(',')
            .map(parse_angle)
            .collect::<Result<Vec<_>>>()
            .map(|v| v[0]),
    };
    let values = match Option::<Many>::deserialize(d)? {
        None => return Ok(None),
        Some(Many::One(One::Text(t))) => t
            .split(',')
            .map(parse_angle)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?,
        Some(Many::One(o)) => vec![read(o).map_err(serde::de::Error::custom)?],
        Some(Many::List(l)) => l
            .into_iter()
            .map(read)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?,
    };
    Ok(Some(values))
}

fn de_list<'de, D, T>(d: D) -> std::result::Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: std::str::FromStr<Err = Error> + Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Form<T> {
        Text(String),
        List(Vec<String>),
        Typed(Vec<T>),
    }
    let split = |s: &str| -> std::result::Result<Vec<T>, D::Error> {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<T>().map_err(serde::de::Error::custom))
            .collect()
    };
    match Option::<Form<T>>::deserialize(d)? {
        None => Ok(None),
        Some(Form::Text(s)) => split(&s).map(Some),
        Some(Form::List(v)) => v
            .iter()
            .map(|s| split(s))
            .collect::<std::result::Result<Vec<Vec<T>>, _>>()
            .map(|v| Some(v.into_iter().flatten().collect())),
        Some(Form::Typed(v)) => Ok(Some(v)),
    }
}

/// Every knob of every subcommand; unset fields fall back to defaults.
///
/// A config file holds the same keys, as JSON or as `key = value` lines.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default, deserialize_with = "de_list", skip_serializing_if = "Option::is_none")]
    pub protocol: Option<Vec<Protocol>>,
    #[serde(default, deserialize_with = "de_list", skip_serializing_if = "Option::is_none")]
    pub coin: Option<Vec<CoinFamily>>,
    #[serde(default, deserialize_with = "de_angle", skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_symbol: Option<SeedChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_lag: Option<usize>,
    #[serde(default, deserialize_with = "de_list", skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<Observable>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_scale: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carpet: Option<bool>,
    /// Tail length averaged into the summary; 0 reports the final step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequential: Option<bool>,
}

/// Seed symbol `0`, `1`, or both (`"both"`), the last for seed averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedChoice {
    Zero,
    One,
    Both,
}

impl SeedChoice {
    pub fn symbols(self) -> &'static [u8] {
        match self {
            SeedChoice::Zero => &[0],
            SeedChoice::One => &[1],
            SeedChoice::Both => &[0, 1],
        }
    }
}

impl std::str::FromStr for SeedChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(SeedChoice::Zero),
            "1" => Ok(SeedChoice::One),
            "both" | "0,1" => Ok(SeedChoice::Both),
            _ => Err(Error::config("seed_symbol", format!("expected 0, 1 or both, got `{s}`"))),
        }
    }
}

impl Serialize for SeedChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SeedChoice::Zero => s.serialize_u8(0),
            SeedChoice::One => s.serialize_u8(1),
            SeedChoice::Both => s.serialize_str("both"),
        }
    }
}

impl<'de> Deserialize<'de> for SeedChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => n.to_string().parse().map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn config_error(e: serde_json::Error) -> Error {
    // serde names the offending key in its message
    Error::config("config", e.to_string())
}

impl Settings {
    /// Reads a JSON object, or `key = value` lines (`#` starts a comment).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(config_error);
        }
        let mut map = serde_json::Map::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}", n + 1), "expected `key = value`")
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let json = match serde_json::from_str::<serde_json::Value>(value) {
                Ok(v @ (serde_json::Value::Number(_) | serde_json::Value::Bool(_))) => v,
                _ => serde_json::Value::String(value.to_string()),
            };
            map.insert(key, json);
        }
        serde_json::from_value(serde_json::Value::Object(map)).map_err(config_error)
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overridden_by(self, flags: Settings) -> Settings {
        Settings {
            protocol: flags.protocol.or(self.protocol),
            coin: flags.coin.or(self.coin),
            theta: flags.theta.or(self.theta),
            grid_points: flags.grid_points.or(self.grid_points),
            tmax: flags.tmax.or(self.tmax),
            seed_symbol: flags.seed_symbol.or(self.seed_symbol),
            rng_seed: flags.rng_seed.or(self.rng_seed),
            stride: flags.stride.or(self.stride),
            max_lag: flags.max_lag.or(self.max_lag),
            fields: flags.fields.or(self.fields),
            out: flags.out.or(self.out),
            classical: flags.classical.or(self.classical),
            full_scale: flags.full_scale.or(self.full_scale),
            carpet: flags.carpet.or(self.carpet),
            tail: flags.tail.or(self.tail),
            sequential: flags.sequential.or(self.sequential),
        }
    }

    fn t_max(&self) -> usize {
        self.tmax.unwrap_or(if self.full_scale.unwrap_or(false) {
            FULL_SCALE_T_MAX
        } else {
            DEFAULT_T_MAX
        })
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    fn single<T: Copy>(list: &Option<Vec<T>>, field: &str, default: T) -> Result<T> {
        match list.as_deref() {
            None => Ok(default),
            Some([one]) => Ok(*one),
            Some(_) => Err(Error::config(field, "expects exactly one value")),
        }
    }

    fn single_protocol(&self) -> Result<Protocol> {
        Self::single(&self.protocol, "protocol", Protocol::Standard)
    }

    fn rng_for(&self, protocol: Protocol) -> Option<u64> {
        (protocol == Protocol::Random).then(|| self.rng_seed.unwrap_or(DEFAULT_RNG_SEED))
    }

    /// Resolves a single-run configuration.
    pub fn run_config(&self) -> Result<RunConfig> {
        let protocol = self.single_protocol()?;
        if protocol != Protocol::Random && self.rng_seed.is_some() {
            return Err(Error::config(
                "rng_seed",
                format!("not accepted by the {protocol} protocol"),
            ));
        }
        let family = Self::single(&self.coin, "coin", CoinFamily::H)?;
        let theta = Self::single(&self.theta, "theta", std::f64::consts::FRAC_PI_4)?;
        let seed_symbol = match self.seed_symbol.unwrap_or(SeedChoice::Zero) {
            SeedChoice::Zero => 0,
            SeedChoice::One => 1,
            SeedChoice::Both => {
                return Err(Error::config("seed_symbol", "a single run takes 0 or 1"))
            }
        };
        let t_max = self.t_max();
        let config = RunConfig {
            coin: CoinSpec::new(family, theta)?,
            protocol,
            seed_symbol,
            rng_seed: self.rng_for(protocol),
            t_max,
            record_stride: self.stride.unwrap_or_else(|| default_stride(t_max)),
            record_fields: self.fields.clone().unwrap_or_else(|| Observable::ALL.to_vec()),
            carpet: self.carpet.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let theta_grid = match &self.theta {
            Some(grid) => grid.clone(),
            None => {
                let n = self.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
                if n < 1 {
                    return Err(Error::config("grid_points", "must be at least 1"));
                }
                if n == 1 {
                    vec![0.0]
                } else {
                    (0..n).map(|j| FRAC_PI_2 * j as f64 / (n - 1) as f64).collect()
                }
            }
        };
        let sweep = SweepConfig {
            theta_grid,
            protocols: self.protocol.clone().unwrap_or_else(|| Protocol::ALL.to_vec()),
            families: self.coin.clone().unwrap_or_else(|| CoinFamily::ALL.to_vec()),
            seed_symbols: self.seed_symbol.unwrap_or(SeedChoice::Both).symbols().to_vec(),
            t_max: self.t_max(),
            rng_seed: self.rng_seed.unwrap_or(DEFAULT_RNG_SEED),
            classical: self.classical.unwrap_or(false),
            parallel: !self.sequential.unwrap_or(false),
            out: self.out_dir(),
        };
        sweep.validate()?;
        Ok(sweep)
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Walker {
    Quantum,
    Classical,
}

impl Walker {
    fn tag(self) -> &'static str {
        match self {
            Walker::Quantum => "qw",
            Walker::Classical => "cw",
        }
    }
}

/// The `config.json` written next to every run.
#[derive(Debug, Serialize)]
struct RunEcho<'a> {
    walker: Walker,
    x_max: usize,
    #[serde(flatten)]
    config: &'a RunConfig,
    final_norm: f64,
    fit: Option<FitResult>,
    tail_means: BTreeMap<String, f64>,
}

/// Files and summaries produced by [`run_single`].
#[derive(Debug)]
pub struct SingleRun {
    pub config: RunConfig,
    pub walker: Walker,
    pub evolution: Evolution,
    pub fit: Option<FitResult>,
    pub files: Vec<PathBuf>,
}

/// One walk (quantum, or classical when `settings.classical`), writing
/// `series.csv`, `config.json`, `fit.json` when the default window can be
/// fitted, and `carpet.csv` on request.
pub fn run_single(settings: &Settings) -> Result<SingleRun> {
    let config = settings.run_config()?;
    let walker = if settings.classical.unwrap_or(false) {
        Walker::Classical
    } else {
        Walker::Quantum
    };
    let evolution = match walker {
        Walker::Quantum => evolve(&config)?,
        Walker::Classical => classical_evolve(&config)?,
    };
    let dir = settings.out_dir();
    let mut files = Vec::new();

    let mut w = create(&dir, "series.csv")?;
    evolution.series.write_csv(&mut w)?;
    w.flush()?;
    files.push(dir.join("series.csv"));

    if let Some(carpet) = &evolution.carpet {
        let mut w = create(&dir, "carpet.csv")?;
        carpet.write_csv(&mut w)?;
        w.flush()?;
        files.push(dir.join("carpet.csv"));
    }

    let fit = evolution
        .series
        .pairs(Observable::M2)
        .and_then(|m2| fit_alpha(&m2, default_window(config.t_max)).ok());
    if let Some(fit) = &fit {
        write_json(&dir, "fit.json", fit)?;
        files.push(dir.join("fit.json"));
    }

    let tail = settings.tail.unwrap_or(0);
    let from = config.t_max.saturating_sub(tail.saturating_sub(1));
    let tail_means = evolution
        .series
        .fields()
        .filter_map(|o| {
            evolution
                .series
                .tail_mean(o, from)
                .map(|v| (o.column().to_string(), v))
        })
        .collect();
    write_json(
        &dir,
        "config.json",
        &RunEcho {
            walker,
            x_max: config.x_max(),
            config: &config,
            final_norm: evolution.final_norm,
            fit,
            tail_means,
        },
    )?;
    files.push(dir.join("config.json"));

    Ok(SingleRun {
        config,
        walker,
        evolution,
        fit,
        files,
    })
}

/// A single run that exports only the asymmetry carpet (plus its config echo).
pub fn run_carpet(settings: &Settings) -> Result<PathBuf> {
    let mut config = settings.run_config()?;
    config.carpet = true;
    config.record_fields = vec![Observable::M2];
    let evolution = evolve(&config)?;
    let dir = settings.out_dir();
    let mut w = create(&dir, "carpet.csv")?;
    evolution
        .carpet
        .as_ref()
        .expect("carpet requested")
        .write_csv(&mut w)?;
    w.flush()?;
    write_json(&dir, "config.json", &config)?;
    Ok(dir.join("carpet.csv"))
}

/// A grid of runs for exponent-versus-angle curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub theta_grid: Vec<f64>,
    pub protocols: Vec<Protocol>,
    pub families: Vec<CoinFamily>,
    pub seed_symbols: Vec<u8>,
    pub t_max: usize,
    /// Seed of the random protocol's shuffle.
    pub rng_seed: u64,
    /// Sweep the classical comparator instead of the quantum walk.
    pub classical: bool,
    pub parallel: bool,
    pub out: PathBuf,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta_grid.is_empty() {
            return Err(Error::config("theta", "grid is empty"));
        }
        if self.theta_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("theta", "grid must be strictly increasing"));
        }
        for &theta in &self.theta_grid {
            CoinSpec::new(CoinFamily::H, theta)?;
        }
        if self.protocols.is_empty() {
            return Err(Error::config("protocol", "no protocols selected"));
        }
        if self.families.is_empty() {
            return Err(Error::config("coin", "no coin families selected"));
        }
        if self.seed_symbols.is_empty() {
            return Err(Error::config("seed_symbol", "no seed symbols selected"));
        }
        if self.t_max < 10 {
            return Err(Error::config("tmax", "a sweep needs t_max >= 10"));
        }
        Ok(())
    }

    fn walker(&self) -> Walker {
        if self.classical {
            Walker::Classical
        } else {
            Walker::Quantum
        }
    }
}

/// Seed-averaged exponent of one `(family, protocol, θ)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: CoinFamily,
    pub walker: Walker,
    pub theta: f64,
    pub protocol: Protocol,
    pub alpha: f64,
    /// Standard error of the mean over seed symbols; zero for one seed.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    family: CoinFamily,
    protocol: Protocol,
    theta: f64,
    seed_symbol: u8,
}

fn cell_alpha(sweep: &SweepConfig, cell: Cell) -> Result<f64> {
    let protocol = cell.protocol;
    let config = RunConfig {
        coin: CoinSpec::new(cell.family, cell.theta)?,
        protocol,
        seed_symbol: cell.seed_symbol,
        rng_seed: (protocol == Protocol::Random).then_some(sweep.rng_seed),
        t_max: sweep.t_max,
        record_stride: default_stride(sweep.t_max),
        record_fields: vec![Observable::M2],
        carpet: false,
    };
    let run = if sweep.classical {
        classical_evolve(&config)?
    } else {
        evolve(&config)?
    };
    let m2 = run.series.pairs(Observable::M2).expect("m2 recorded");
    Ok(fit_alpha(&m2, default_window(sweep.t_max))?.alpha)
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Fits `α` for every cell, averages over seed symbols, and writes
/// `alpha_<family>_<qw|cw>.csv` with columns `theta,protocol,alpha,stderr`.
pub fn run_sweep(sweep: &SweepConfig) -> Result<SweepResult> {
    sweep.validate()?;
    // the classical map ignores the coin, so one run per (protocol, seed) serves every cell
    let grid: Vec<(CoinFamily, f64)> = if sweep.classical {
        vec![(CoinFamily::H, 0.0)]
    } else {
        sweep
            .families
            .iter()
            .flat_map(|&f| sweep.theta_grid.iter().map(move |&t| (f, t)))
            .collect()
    };
    let cells: Vec<Cell> = grid
        .iter()
        .flat_map(|&(family, theta)| {
            sweep.protocols.iter().flat_map(move |&protocol| {
                sweep.seed_symbols.iter().map(move |&seed_symbol| Cell {
                    family,
                    protocol,
                    theta,
                    seed_symbol,
                })
            })
        })
        .collect();

    let eval = |cell: &Cell| {
        cell_alpha(sweep, *cell).map_err(|e| {
            Error::config(
                "sweep",
                format!(
                    "cell (coin {}, protocol {}, theta {}, seed {}) failed: {e}",
                    cell.family, cell.protocol, cell.theta, cell.seed_symbol
                ),
            )
        })
    };
    let alphas: Vec<f64> = if sweep.parallel {
        cells.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        cells.iter().map(eval).collect::<Result<_>>()?
    };

    let per_seed = sweep.seed_symbols.len();
    let lookup: BTreeMap<(CoinFamily, Protocol, u64), (f64, f64)> = cells
        .chunks(per_seed)
        .zip(alphas.chunks(per_seed))
        .map(|(c, a)| ((c[0].family, c[0].protocol, c[0].theta.to_bits()), mean_and_stderr(a)))
        .collect();

    let walker = sweep.walker();
    let mut rows = Vec::new();
    let mut files = Vec::new();
    for &family in &sweep.families {
        let name = format!("alpha_{family}_{}.csv", walker.tag());
        let mut w = create(&sweep.out, &name)?;
        writeln!(w, "theta,protocol,alpha,stderr")?;
        for &theta in &sweep.theta_grid {
            for &protocol in &sweep.protocols {
                let key = if sweep.classical {
                    (CoinFamily::H, protocol, 0f64.to_bits())
                } else {
                    (family, protocol, theta.to_bits())
                };
                let (alpha, stderr) = lookup[&key];
                writeln!(w, "{theta},{protocol},{alpha},{stderr}")?;
                rows.push(SweepRow {
                    family,
                    walker,
                    theta,
                    protocol,
                    alpha,
                    stderr,
                });
            }
        }
        w.flush()?;
        files.push(sweep.out.join(name));
    }
    Ok(SweepResult { rows, files })
}

/// Sequence diagnostics written by [`run_seqreport`].
#[derive(Debug)]
pub struct SeqReport {
    pub sequence: BinarySequence,
    pub files: Vec<PathBuf>,
    /// True when the word is constant and PSD/ACF were replaced by markers.
    pub degenerate: bool,
}

const DEGENERATE_MARKER: &str =
    "degenerate: the sequence is constant, so its centered form vanishes and the normalized quantity is undefined\n";

/// Generates a sequence and writes `sequence.csv`, `sequence.json`,
/// `psd.csv`, `acf.csv`, `ones_fraction.csv` and `lzc.csv`. For a constant
/// word `psd.degenerate` and `acf.degenerate` replace the spectral files.
pub fn run_seqreport(settings: &Settings) -> Result<SeqReport> {
    let protocol = settings.single_protocol()?;
    if protocol != Protocol::Random && settings.rng_seed.is_some() {
        return Err(Error::config(
            "rng_seed",
            format!("not accepted by the {protocol} protocol"),
        ));
    }
    let seed_symbol = match settings.seed_symbol.unwrap_or(SeedChoice::Zero) {
        SeedChoice::Zero => 0,
        SeedChoice::One => 1,
        SeedChoice::Both => return Err(Error::config("seed_symbol", "a report takes 0 or 1")),
    };
    let sequence = generate(protocol, seed_symbol, settings.rng_for(protocol), settings.t_max())?;
    let word = &sequence.symbols;
    let dir = settings.out_dir();
    let mut files = Vec::new();
    let mut emit = |name: &str, body: &dyn Fn(&mut BufWriter<File>) -> std::io::Result<()>| -> Result<()> {
        let mut w = create(&dir, name)?;
        body(&mut w)?;
        w.flush()?;
        files.push(dir.join(name));
        Ok(())
    };

    emit("sequence.csv", &|w| sequence.write_csv(w))?;
    emit("sequence.json", &|w| writeln!(w, "{}", sequence.to_json()))?;

    let mut degenerate = false;
    match psd(word) {
        Ok(spec) => emit("psd.csv", &|w| spec.write_csv(w))?,
        Err(Error::Degenerate(_)) => {
            degenerate = true;
            emit("psd.degenerate", &|w| w.write_all(DEGENERATE_MARKER.as_bytes()))?;
        }
        Err(e) => return Err(e),
    }
    let max_lag = settings.max_lag.unwrap_or(DEFAULT_MAX_LAG).min(word.len() - 1);
    match autocorrelation(word, max_lag) {
        Ok(acf) => emit("acf.csv", &|w| acf.as_curve().write_csv(w, "tau", "R"))?,
        Err(Error::Degenerate(_)) => {
            degenerate = true;
            emit("acf.degenerate", &|w| w.write_all(DEGENERATE_MARKER.as_bytes()))?;
        }
        Err(e) => return Err(e),
    }

    let ones = ones_fraction_curve(word)?;
    emit("ones_fraction.csv", &|w| ones.write_csv(w, "t", "f"))?;
    let stride = settings.stride.unwrap_or(DEFAULT_LZC_STRIDE).min(word.len());
    let lzc = lzc_curve(word, stride)?;
    emit("lzc.csv", &|w| lzc.write_csv(w, "t", "lzc"))?;

    Ok(SeqReport {
        sequence,
        files,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("3pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("3*pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert!(parse_angle("tau/4").is_err());
    }

    #[test]
    fn key_value_and_json_agree() {
        let kv = Settings::parse(
            "# comment\nprotocol = fibonacci\ncoin = K\ntheta = pi/8\ntmax = 50\nseed-symbol = 1\n",
        )
        .unwrap();
        let json = Settings::parse(
            r#"{"protocol": "fibonacci", "coin": "K", "theta": "pi/8", "tmax": 50, "seed_symbol": 1}"#,
        )
        .unwrap();
        assert_eq!(kv, json);
        let config = kv.run_config().unwrap();
        assert_eq!(config.coin.family, CoinFamily::K);
        assert_eq!(config.seed_symbol, 1);
        assert_eq!(config.t_max, 50);
    }

    #[test]
    fn lists_in_json() {
        let s = Settings::parse(r#"{"protocol": ["standard", "random"], "theta": [0, "pi/4"]}"#).unwrap();
        assert_eq!(s.protocol, Some(vec![Protocol::Standard, Protocol::Random]));
        assert_eq!(s.theta, Some(vec![0.0, PI / 4.0]));
    }

    #[test]
    fn flags_win() {
        let file = Settings::parse("tmax = 50\ncoin = K").unwrap();
        let flags = Settings {
            tmax: Some(70),
            ..Settings::default()
        };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.tmax, Some(70));
        assert_eq!(merged.coin, Some(vec![CoinFamily::K]));
    }

    #[test]
    fn errors_name_the_field() {
        let err = Settings::parse("bogus = 3").unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
        let err = Settings::parse("theta = 2.0").unwrap().run_config().unwrap_err().to_string();
        assert!(err.contains("theta"), "{err}");
        let err = Settings::parse("rng_seed = 4").unwrap().run_config().unwrap_err().to_string();
        assert!(err.contains("rng_seed"), "{err}");
        let err = Settings::parse("protocol = golden").unwrap_err().to_string();
        assert!(err.contains("golden"), "{err}");
    }

    #[test]
    fn default_grid() {
        let sweep = Settings::default().sweep_config().unwrap();
        assert_eq!(sweep.theta_grid.len(), DEFAULT_GRID_POINTS);
        assert_eq!(sweep.theta_grid[0], 0.0);
        assert_eq!(*sweep.theta_grid.last().unwrap(), FRAC_PI_2);
        assert_eq!(sweep.seed_symbols, [0, 1]);
        assert_eq!(sweep.t_max, DEFAULT_T_MAX);
        let full = Settings {
            full_scale: Some(true),
            ..Settings::default()
        };
        assert_eq!(full.sweep_config().unwrap().t_max, FULL_SCALE_T_MAX);
    }

    #[test]
    fn sweep_validation() {
        let mut s = Settings::parse("theta = pi/4,pi/8").unwrap();
        assert!(s.sweep_config().is_err());
        s.theta = Some(vec![]);
        assert!(s.sweep_config().is_err());
        s.theta = Some(vec![0.1]);
        s.tmax = Some(5);
        assert!(s.sweep_config().is_err());
    }

    #[test]
    fn standard_error_over_two_seeds() {
        let (m, e) = mean_and_stderr(&[1.0, 1.2]);
        assert!((m - 1.1).abs() < 1e-15);
        assert!((e - 0.1).abs() < 1e-12);
        assert_eq!(mean_and_stderr(&[2.0]), (2.0, 0.0));
    }
}
