use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoinFamily {
    /// Generalized Hadamard, `[[cos θ, sin θ], [sin θ, -cos θ]]`.
    H,
    /// Generalized Fourier (Kempe), `[[cos θ, i sin θ], [i sin θ, cos θ]]`.
    K,
}

impl CoinFamily {
    pub const ALL: [CoinFamily; 2] = [CoinFamily::H, CoinFamily::K];

    /// Relative phase `e^{iφ}` of the up component in the symmetric initial
    /// state: `φ = π/2` for H and `φ = 0` for K.
    pub fn initial_phase(self) -> Complex64 {
        match self {
            CoinFamily::H => Complex64::i(),
            CoinFamily::K => Complex64::new(1.0, 0.0),
        }
    }
}

impl fmt::Display for CoinFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoinFamily::H => "H",
            CoinFamily::K => "K",
        })
    }
}

impl FromStr for CoinFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h" | "hadamard" => Ok(CoinFamily::H),
            "k" | "kempe" | "fourier" => Ok(CoinFamily::K),
            _ => Err(Error::config("coin", format!("unknown coin family `{s}`"))),
        }
    }
}

/// A coin family at a fixed angle `θ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinSpec {
    pub family: CoinFamily,
    pub theta: f64,
}

impl CoinSpec {
    pub fn new(family: CoinFamily, theta: f64) -> Result<Self> {
        let spec = CoinSpec { family, theta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(&self.theta) {
            return Err(Error::config(
                "theta",
                format!("{} lies outside [0, π/2]", self.theta),
            ));
        }
        Ok(())
    }

    /// Matrix elements in the `(↑, ↓)` basis: row 0 produces the new up
    /// amplitude, row 1 the new down amplitude.
    pub fn matrix(&self) -> CoinMatrix {
        let (s, c) = self.theta.sin_cos();
        let re = |v: f64| Complex64::new(v, 0.0);
        let im = |v: f64| Complex64::new(0.0, v);
        CoinMatrix(match self.family {
            CoinFamily::H => [[re(c), re(s)], [re(s), re(-c)]],
            CoinFamily::K => [[re(c), im(s)], [im(s), re(c)]],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix(pub [[Complex64; 2]; 2]);

impl CoinMatrix {
    /// Returns `(up', down')`.
    #[inline]
    pub fn apply(&self, up: Complex64, down: Complex64) -> (Complex64, Complex64) {
        let m = &self.0;
        (m[0][0] * up + m[0][1] * down, m[1][0] * up + m[1][1] * down)
    }

    /// Largest entry of `|C†C - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = &self.0;
        let mut worst: f64 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let dot: Complex64 = (0..2).map(|r| m[r][a].conj() * m[r][b]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}
