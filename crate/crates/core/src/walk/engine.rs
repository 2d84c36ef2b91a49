use serde::{Deserialize, Serialize};

use super::coin::CoinSpec;
use super::state::{ClassicalProfile, SpinorField};
use crate::error::{Error, Result};
use crate::observables::{
    self, entanglement_entropy, ipr, jsd, moment, reduced_coin_matrix, shannon_entropy, Carpet,
    ProbabilityProfile,
};
use crate::sequences::{generate, BinarySequence, JumpSchedule, Protocol};
use crate::series::{Observable, ObservableSeries};

/// Largest tolerated drift of the total probability at the end of a run.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Everything that determines one evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub coin: CoinSpec,
    pub protocol: Protocol,
    pub seed_symbol: u8,
    pub rng_seed: Option<u64>,
    pub t_max: usize,
    pub record_stride: usize,
    pub record_fields: Vec<Observable>,
    pub carpet: bool,
}

impl RunConfig {
    /// Records every observable at the default stride, no carpet.
    pub fn new(coin: CoinSpec, protocol: Protocol, t_max: usize) -> Self {
        RunConfig {
            coin,
            protocol,
            seed_symbol: 0,
            rng_seed: (protocol == Protocol::Random).then_some(0),
            t_max,
            record_stride: default_stride(t_max),
            record_fields: Observable::ALL.to_vec(),
            carpet: false,
        }
    }

    pub fn with_fields(mut self, fields: &[Observable]) -> Self {
        self.record_fields = fields.to_vec();
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn with_seed_symbol(mut self, seed_symbol: u8) -> Self {
        self.seed_symbol = seed_symbol;
        self
    }

    /// Half-width of the lattice; jumps never exceed 2, so the walker stays inside.
    pub fn x_max(&self) -> usize {
        (2 * self.t_max).max(1)
    }

    pub fn extent(&self) -> usize {
        2 * self.x_max() + 1
    }

    pub fn validate(&self) -> Result<()> {
        self.coin.validate()?;
        if self.record_stride == 0 {
            return Err(Error::config("record_stride", "must be at least 1"));
        }
        if self.seed_symbol > 1 {
            return Err(Error::config("seed_symbol", "must be 0 or 1"));
        }
        match (self.protocol, self.rng_seed) {
            (Protocol::Random, None) => {
                Err(Error::config("rng_seed", "required by the random protocol"))
            }
            (p, Some(_)) if p != Protocol::Random => Err(Error::config(
                "rng_seed",
                format!("not accepted by the {p} protocol"),
            )),
            _ => Ok(()),
        }
    }

    /// The binary word driving this run, `t_max + 1` symbols long.
    pub fn sequence(&self) -> Result<BinarySequence> {
        generate(
            self.protocol,
            self.seed_symbol,
            self.rng_seed,
            self.t_max.max(1),
        )
    }

    fn records(&self, t: usize) -> bool {
        t.is_multiple_of(self.record_stride) || t == self.t_max
    }
}

/// Sample every step up to `t_max = 1000`, every tenth step beyond.
pub fn default_stride(t_max: usize) -> usize {
    if t_max <= 1000 {
        1
    } else {
        10
    }
}

/// Output of [`evolve`] or [`classical_evolve`].
#[derive(Debug, Clone)]
pub struct Evolution {
    pub series: ObservableSeries,
    pub carpet: Option<Carpet>,
    /// The generated word, absent when the caller supplied the jumps.
    pub sequence: Option<BinarySequence>,
    /// Total probability after the last step.
    pub final_norm: f64,
}

/// One walker step as a pure function.
pub fn step(state: &SpinorField, coin: &CoinSpec, jump: usize) -> Result<SpinorField> {
    let mut next = state.clone();
    next.step(&coin.matrix(), jump)?;
    Ok(next)
}

pub fn classical_step(profile: &ClassicalProfile, jump: usize) -> Result<ClassicalProfile> {
    let mut next = profile.clone();
    next.step(jump)?;
    Ok(next)
}

pub fn initial_state(coin: &CoinSpec, extent: usize) -> Result<SpinorField> {
    SpinorField::initial(coin, extent)
}

fn check_schedule(jumps: &JumpSchedule, t_max: usize) -> Result<()> {
    if jumps.len() < t_max {
        return Err(Error::config(
            "jumps",
            format!("{} jumps cannot drive {t_max} steps", jumps.len()),
        ));
    }
    if jumps.as_slice().iter().any(|j| !(1..=2).contains(j)) {
        return Err(Error::config("jumps", "every jump must be 1 or 2"));
    }
    Ok(())
}

fn kurtosis_or_nan(m2: f64, m4: f64) -> f64 {
    observables::kurtosis(m2, m4).unwrap_or(f64::NAN)
}

/// Shared per-row evaluation of the profile-based observables.
struct ProfileStats {
    m2: f64,
    m4: f64,
    shannon: f64,
    ipr: f64,
}

impl ProfileStats {
    fn of(p: &ProbabilityProfile) -> Self {
        ProfileStats {
            m2: moment(p, 2),
            m4: moment(p, 4),
            shannon: shannon_entropy(p),
            ipr: ipr(p),
        }
    }

    fn get(&self, o: Observable) -> Option<f64> {
        Some(match o {
            Observable::M2 => self.m2,
            Observable::M4 => self.m4,
            Observable::Kappa => kurtosis_or_nan(self.m2, self.m4),
            Observable::Shannon => self.shannon,
            Observable::Ipr => self.ipr,
            Observable::Jsd | Observable::Entanglement => return None,
        })
    }
}

/// Runs the quantum walk described by `config`.
pub fn evolve(config: &RunConfig) -> Result<Evolution> {
    config.validate()?;
    let sequence = config.sequence()?;
    let jumps = sequence.to_jumps();
    let mut run = evolve_with_jumps(config, &jumps)?;
    run.sequence = Some(sequence);
    Ok(run)
}

/// Quantum walk under an explicit jump schedule; `config`'s protocol fields
/// are ignored.
pub fn evolve_with_jumps(config: &RunConfig, jumps: &JumpSchedule) -> Result<Evolution> {
    config.coin.validate()?;
    if config.record_stride == 0 {
        return Err(Error::config("record_stride", "must be at least 1"));
    }
    check_schedule(jumps, config.t_max)?;

    let coin = config.coin.matrix();
    let extent = config.extent();
    let mut state = SpinorField::initial(&config.coin, extent)?;
    let wants_jsd = config.record_fields.contains(&Observable::Jsd);
    let mut classical = if wants_jsd {
        Some(ClassicalProfile::delta(extent)?)
    } else {
        None
    };
    let mut series = ObservableSeries::new(&config.record_fields);
    let mut carpet = config.carpet.then(|| Carpet::new(config.x_max()));

    let mut record = |t: usize, state: &SpinorField, classical: Option<&ClassicalProfile>| -> Result<()> {
        if let Some(c) = carpet.as_mut() {
            c.rows.push(observables::asymmetry_row(state));
        }
        if !config.records(t) {
            return Ok(());
        }
        let p = state.probability();
        let stats = ProfileStats::of(&p);
        let s_e = if series.fields().any(|o| o == Observable::Entanglement) {
            entanglement_entropy(&reduced_coin_matrix(state))?
        } else {
            f64::NAN
        };
        let jsd_value = classical.map_or(f64::NAN, |c| jsd(&p, &c.probability()));
        series.push_with(t, |o| match o {
            Observable::Jsd => jsd_value,
            Observable::Entanglement => s_e,
            other => stats.get(other).unwrap_or(f64::NAN),
        });
        Ok(())
    };

    record(0, &state, classical.as_ref())?;
    for (t, &jump) in jumps.as_slice()[..config.t_max].iter().enumerate() {
        state.step(&coin, jump)?;
        if let Some(c) = classical.as_mut() {
            c.step(jump)?;
        }
        record(t + 1, &state, classical.as_ref())?;
    }

    let final_norm = state.norm();
    if (final_norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Numerical(format!("norm drifted to {final_norm}")));
    }
    Ok(Evolution {
        series,
        carpet,
        sequence: None,
        final_norm,
    })
}

/// Runs the classical comparator with the same jump schedule. Quantum-only
/// fields (JSD, S_e) are dropped from the record.
pub fn classical_evolve(config: &RunConfig) -> Result<Evolution> {
    config.validate()?;
    let sequence = config.sequence()?;
    let jumps = sequence.to_jumps();
    let mut run = classical_evolve_with_jumps(config, &jumps)?;
    run.sequence = Some(sequence);
    Ok(run)
}

pub fn classical_evolve_with_jumps(config: &RunConfig, jumps: &JumpSchedule) -> Result<Evolution> {
    if config.record_stride == 0 {
        return Err(Error::config("record_stride", "must be at least 1"));
    }
    check_schedule(jumps, config.t_max)?;
    let fields: Vec<Observable> = config
        .record_fields
        .iter()
        .copied()
        .filter(|o| !o.quantum_only())
        .collect();
    let mut series = ObservableSeries::new(&fields);
    let mut profile = ClassicalProfile::delta(config.extent())?;

    let mut record = |t: usize, profile: &ClassicalProfile| {
        if config.records(t) {
            let stats = ProfileStats::of(&profile.probability());
            series.push_with(t, |o| stats.get(o).unwrap_or(f64::NAN));
        }
    };
    record(0, &profile);
    for (t, &jump) in jumps.as_slice()[..config.t_max].iter().enumerate() {
        profile.step(jump)?;
        record(t + 1, &profile);
    }

    let final_norm = profile.total();
    if (final_norm - 1.0).abs() > 1e-12 {
        return Err(Error::Numerical(format!("classical mass drifted to {final_norm}")));
    }
    Ok(Evolution {
        series,
        carpet: None,
        sequence: None,
        final_norm,
    })
}
