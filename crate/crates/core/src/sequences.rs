//! Binary jump-control sequences and the jump schedules they induce.
//!
//! Every protocol yields a word `b_0 … b_tmax` over `{0, 1}`; the walker
//! then hops `J_t = 1 + b_t` sites at step `t`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// `b_t = 0` for every `t`, i.e. unit jumps.
    Standard,
    Periodic,
    Fibonacci,
    ThueMorse,
    RudinShapiro,
    /// A uniformly shuffled balanced periodic word.
    Random,
}

impl Protocol {
    pub const ALL: [Protocol; 6] = [
        Protocol::Standard,
        Protocol::Periodic,
        Protocol::Fibonacci,
        Protocol::ThueMorse,
        Protocol::RudinShapiro,
        Protocol::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Standard => "standard",
            Protocol::Periodic => "periodic",
            Protocol::Fibonacci => "fibonacci",
            Protocol::ThueMorse => "thue-morse",
            Protocol::RudinShapiro => "rudin-shapiro",
            Protocol::Random => "random",
        }
    }

    pub fn is_substitution(self) -> bool {
        matches!(
            self,
            Protocol::Fibonacci | Protocol::ThueMorse | Protocol::RudinShapiro
        )
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "standard" | "std" => Ok(Protocol::Standard),
            "periodic" => Ok(Protocol::Periodic),
            "fibonacci" | "fib" => Ok(Protocol::Fibonacci),
            "thuemorse" | "tm" => Ok(Protocol::ThueMorse),
            "rudinshapiro" | "rs" => Ok(Protocol::RudinShapiro),
            "random" => Ok(Protocol::Random),
            _ => Err(Error::config("protocol", format!("unknown protocol `{s}`"))),
        }
    }
}

/// A generated binary word together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinarySequence {
    pub protocol: Protocol,
    pub seed_symbol: u8,
    pub rng_seed: Option<u64>,
    #[serde(with = "symbol_string")]
    pub symbols: Vec<u8>,
}

impl BinarySequence {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn to_jumps(&self) -> JumpSchedule {
        to_jumps(self)
    }

    /// Single-column CSV with header `b_t`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "b_t")?;
        for b in &self.symbols {
            writeln!(w, "{b}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let seq: BinarySequence = serde_json::from_str(s)?;
        if seq.symbols.iter().any(|&b| b > 1) {
            return Err(Error::config("symbols", "symbols must be 0 or 1"));
        }
        Ok(seq)
    }
}

/// Per-step jump lengths, each 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpSchedule(pub Vec<usize>);

impl JumpSchedule {
    /// Unit jumps for `len` steps.
    pub fn standard(len: usize) -> Self {
        JumpSchedule(vec![1; len])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total displacement after the first `steps` jumps.
    pub fn reach(&self, steps: usize) -> usize {
        self.0[..steps].iter().sum()
    }
}

pub fn to_jumps(seq: &BinarySequence) -> JumpSchedule {
    JumpSchedule(seq.symbols.iter().map(|&b| 1 + b as usize).collect())
}

/// Generate `t_max + 1` symbols of `protocol` starting from `seed_symbol`.
///
/// `rng_seed` is required for [`Protocol::Random`] and rejected otherwise.
pub fn generate(
    protocol: Protocol,
    seed_symbol: u8,
    rng_seed: Option<u64>,
    t_max: usize,
) -> Result<BinarySequence> {
    if t_max == 0 {
        return Err(Error::config("t_max", "must be at least 1"));
    }
    if seed_symbol > 1 {
        return Err(Error::config("seed_symbol", "must be 0 or 1"));
    }
    match (protocol, rng_seed) {
        (Protocol::Random, None) => {
            return Err(Error::config("rng_seed", "required by the random protocol"))
        }
        (p, Some(_)) if p != Protocol::Random => {
            return Err(Error::config(
                "rng_seed",
                format!("not accepted by the {p} protocol"),
            ))
        }
        _ => {}
    }

    let len = t_max + 1;
    let symbols = match protocol {
        Protocol::Standard => vec![0; len],
        Protocol::Periodic => periodic(seed_symbol, len),
        Protocol::Fibonacci => substitute(seed_symbol, len, fibonacci_rule),
        Protocol::ThueMorse => substitute(seed_symbol, len, thue_morse_rule),
        Protocol::RudinShapiro => rudin_shapiro(seed_symbol, len),
        Protocol::Random => shuffled(seed_symbol, len, rng_seed.unwrap_or_default()),
    };
    debug_assert_eq!(symbols.len(), len);

    Ok(BinarySequence {
        protocol,
        seed_symbol,
        rng_seed,
        symbols,
    })
}

fn periodic(start: u8, len: usize) -> Vec<u8> {
    (0..len).map(|t| start ^ (t % 2) as u8).collect()
}

fn fibonacci_rule(s: u8) -> &'static [u8] {
    match s {
        0 => &[0, 1],
        _ => &[0],
    }
}

fn thue_morse_rule(s: u8) -> &'static [u8] {
    match s {
        0 => &[0, 1],
        _ => &[1, 0],
    }
}

// Rudin-Shapiro letters A, B, C, D are 0..=3.
fn rudin_shapiro_rule(s: u8) -> &'static [u8] {
    match s {
        0 => &[0, 1],
        1 => &[0, 2],
        2 => &[3, 1],
        _ => &[3, 2],
    }
}

/// Iterate `rule` from `start` until the word holds at least `len` letters,
/// then truncate.
fn substitute(start: u8, len: usize, rule: fn(u8) -> &'static [u8]) -> Vec<u8> {
    let mut word = vec![start];
    while word.len() < len {
        word = word.iter().flat_map(|&s| rule(s).iter().copied()).collect();
    }
    word.truncate(len);
    word
}

fn rudin_shapiro(seed_symbol: u8, len: usize) -> Vec<u8> {
    // seed 0 starts from A, seed 1 from D
    let start = if seed_symbol == 0 { 0 } else { 3 };
    let mut word = substitute(start, len, rudin_shapiro_rule);
    for s in &mut word {
        *s = u8::from(*s >= 2);
    }
    word
}

/// Fisher-Yates shuffle (ChaCha8 stream seeded with `rng_seed`) of the
/// balanced periodic word, then a swap so that `b_0 = seed_symbol`.
fn shuffled(seed_symbol: u8, len: usize, rng_seed: u64) -> Vec<u8> {
    let mut word = periodic(0, len);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    word.shuffle(&mut rng);
    if word[0] != seed_symbol {
        if let Some(pos) = word.iter().position(|&b| b == seed_symbol) {
            word.swap(0, pos);
        }
    }
    word
}

mod symbol_string {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(symbols: &[u8], s: S) -> Result<S::Ok, S::Error> {
        let text: String = symbols.iter().map(|&b| char::from(b'0' + b)).collect();
        s.serialize_str(&text)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(d)?;
        text.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(de::Error::custom(format!("invalid symbol `{other}`"))),
            })
            .collect()
    }
}
