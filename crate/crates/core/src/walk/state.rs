use num_complex::Complex64;

use super::coin::{CoinMatrix, CoinSpec};
use crate::error::{Error, Result};
use crate::observables::ProbabilityProfile;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Inclusive index range outside of which every entry is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Support {
    lo: usize,
    hi: usize,
}

fn check_shift(support: Support, jump: usize, extent: usize) -> Result<()> {
    if support.lo < jump || support.hi + jump >= extent {
        return Err(Error::Boundary {
            lo: support.lo,
            hi: support.hi,
            jump,
            extent,
        });
    }
    Ok(())
}

/// Walker amplitudes `ψ^D(x)`, `ψ^U(x)` on the sites `x ∈ [-x_max, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    x_max: usize,
    down: Vec<Complex64>,
    up: Vec<Complex64>,
    support: Support,
}

impl SpinorField {
    /// Builds a field from dense amplitude arrays of odd length `2·x_max + 1`.
    pub fn from_amplitudes(down: Vec<Complex64>, up: Vec<Complex64>) -> Result<Self> {
        if down.len() != up.len() {
            return Err(Error::Shape(down.len(), up.len()));
        }
        let extent = down.len();
        if extent < 3 || extent.is_multiple_of(2) {
            return Err(Error::config("extent", "lattice size must be odd and at least 3"));
        }
        let occupied = |i: &usize| down[*i] != ZERO || up[*i] != ZERO;
        let lo = (0..extent).find(occupied).unwrap_or(extent / 2);
        let hi = (0..extent).rev().find(occupied).unwrap_or(extent / 2);
        Ok(SpinorField {
            x_max: extent / 2,
            down,
            up,
            support: Support { lo, hi },
        })
    }

    /// `(|↓⟩ + e^{iφ}|↑⟩)/√2` at the origin, with the family's symmetric phase.
    pub fn initial(coin: &CoinSpec, extent: usize) -> Result<Self> {
        if extent < 3 || extent.is_multiple_of(2) {
            return Err(Error::config("extent", "lattice size must be odd and at least 3"));
        }
        let x_max = extent / 2;
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        let mut down = vec![ZERO; extent];
        let mut up = vec![ZERO; extent];
        down[x_max] = Complex64::new(amp, 0.0);
        up[x_max] = coin.family.initial_phase() * amp;
        Ok(SpinorField {
            x_max,
            down,
            up,
            support: Support { lo: x_max, hi: x_max },
        })
    }

    pub fn x_max(&self) -> usize {
        self.x_max
    }

    pub fn extent(&self) -> usize {
        self.down.len()
    }

    /// Index of the site `x = 0`.
    pub fn origin_offset(&self) -> usize {
        self.x_max
    }

    pub fn down(&self) -> &[Complex64] {
        &self.down
    }

    pub fn up(&self) -> &[Complex64] {
        &self.up
    }

    pub fn position(&self, index: usize) -> i64 {
        index as i64 - self.x_max as i64
    }

    /// Amplitudes at position `x`, or `None` off the lattice.
    pub fn at(&self, x: i64) -> Option<(Complex64, Complex64)> {
        let i = usize::try_from(x + self.x_max as i64).ok()?;
        Some((*self.down.get(i)?, *self.up.get(i)?))
    }

    /// Occupied window as an index range.
    pub fn support(&self) -> std::ops::RangeInclusive<usize> {
        self.support.lo..=self.support.hi
    }

    pub fn norm(&self) -> f64 {
        self.support()
            .map(|i| self.down[i].norm_sqr() + self.up[i].norm_sqr())
            .sum()
    }

    /// Both edge sites are untouched.
    pub fn boundary_clear(&self) -> bool {
        let last = self.extent() - 1;
        [0, last]
            .iter()
            .all(|&i| self.down[i] == ZERO && self.up[i] == ZERO)
    }

    /// `P(x) = |ψ^D(x)|² + |ψ^U(x)|²` over the occupied window.
    pub fn probability(&self) -> ProbabilityProfile {
        let mass = self
            .support()
            .map(|i| self.down[i].norm_sqr() + self.up[i].norm_sqr())
            .collect();
        ProbabilityProfile::new(self.position(self.support.lo), mass)
    }

    /// One application of `T̂ (Ĉ ⊗ 1)`: coin on every site, then the down
    /// component moves `jump` sites left and the up component `jump` right.
    pub fn step(&mut self, coin: &CoinMatrix, jump: usize) -> Result<()> {
        let Support { lo, hi } = self.support;
        check_shift(self.support, jump, self.extent())?;
        for i in lo..=hi {
            let (u, d) = coin.apply(self.up[i], self.down[i]);
            self.up[i] = u;
            self.down[i] = d;
        }

        self.down.copy_within(lo..=hi, lo - jump);
        let stale = (hi + 1).saturating_sub(jump).max(lo);
        self.down[stale..=hi].fill(ZERO);

        self.up.copy_within(lo..=hi, lo + jump);
        let stale = (lo + jump).min(hi + 1);
        self.up[lo..stale].fill(ZERO);

        self.support = Support {
            lo: lo - jump,
            hi: hi + jump,
        };
        self.trim();
        Ok(())
    }

    fn trim(&mut self) {
        let Support { mut lo, mut hi } = self.support;
        while lo < hi && self.down[lo] == ZERO && self.up[lo] == ZERO {
            lo += 1;
        }
        while hi > lo && self.down[hi] == ZERO && self.up[hi] == ZERO {
            hi -= 1;
        }
        self.support = Support { lo, hi };
    }
}

/// Probability mass of the classical comparator on `x ∈ [-x_max, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalProfile {
    x_max: usize,
    mass: Vec<f64>,
    support: Support,
}

impl ClassicalProfile {
    /// `δ_{x,0}` on a lattice of `extent` sites.
    pub fn delta(extent: usize) -> Result<Self> {
        let mut mass = vec![0.0; extent];
        let x_max = extent / 2;
        if extent < 3 || extent.is_multiple_of(2) {
            return Err(Error::config("extent", "lattice size must be odd and at least 3"));
        }
        mass[x_max] = 1.0;
        Ok(ClassicalProfile {
            x_max,
            mass,
            support: Support { lo: x_max, hi: x_max },
        })
    }

    pub fn from_mass(mass: Vec<f64>) -> Result<Self> {
        let extent = mass.len();
        if extent < 3 || extent.is_multiple_of(2) {
            return Err(Error::config("extent", "lattice size must be odd and at least 3"));
        }
        if mass.iter().any(|&m| m.is_nan() || m < 0.0) {
            return Err(Error::config("mass", "entries must be nonnegative"));
        }
        let lo = mass.iter().position(|&m| m != 0.0).unwrap_or(extent / 2);
        let hi = mass.iter().rposition(|&m| m != 0.0).unwrap_or(extent / 2);
        Ok(ClassicalProfile {
            x_max: extent / 2,
            mass,
            support: Support { lo, hi },
        })
    }

    pub fn extent(&self) -> usize {
        self.mass.len()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn at(&self, x: i64) -> Option<f64> {
        let i = usize::try_from(x + self.x_max as i64).ok()?;
        self.mass.get(i).copied()
    }

    pub fn total(&self) -> f64 {
        self.mass[self.support.lo..=self.support.hi].iter().sum()
    }

    pub fn probability(&self) -> ProbabilityProfile {
        ProbabilityProfile::new(
            self.support.lo as i64 - self.x_max as i64,
            self.mass[self.support.lo..=self.support.hi].to_vec(),
        )
    }

    /// `P'(x) = ½ P(x - J) + ½ P(x + J)`.
    pub fn step(&mut self, jump: usize) -> Result<()> {
        let Support { lo, hi } = self.support;
        check_shift(self.support, jump, self.extent())?;
        let half: Vec<f64> = self.mass[lo..=hi].iter().map(|m| 0.5 * m).collect();
        self.mass[lo..=hi].fill(0.0);
        for (j, h) in half.iter().enumerate() {
            self.mass[lo + j - jump] += h;
        }
        for (j, h) in half.iter().enumerate() {
            self.mass[lo + j + jump] += h;
        }
        self.support = Support {
            lo: lo - jump,
            hi: hi + jump,
        };
        Ok(())
    }
}
