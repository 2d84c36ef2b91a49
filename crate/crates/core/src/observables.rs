//! Distributional, informational and entanglement measures of walker states,
//! and the diffusion-exponent fit.
//!
//! Logarithm bases: Shannon entropy in nats; KLD, JSD and the entanglement
//! entropy in bits, so that the latter two lie in `[0, 1]`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walk::SpinorField;

/// Probability mass `P(x)` on the contiguous sites `start, start + 1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityProfile {
    start: i64,
    mass: Vec<f64>,
}

impl ProbabilityProfile {
    pub fn new(start: i64, mass: Vec<f64>) -> Self {
        ProbabilityProfile { start, mass }
    }

    /// Profile over `x ∈ [-x_max, x_max]` from a dense array.
    pub fn centered(mass: Vec<f64>) -> Self {
        let x_max = (mass.len() / 2) as i64;
        ProbabilityProfile { start: -x_max, mass }
    }

    /// A point mass at `x`.
    pub fn delta(x: i64) -> Self {
        ProbabilityProfile {
            start: x,
            mass: vec![1.0],
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// `P(x)`, zero off the stored window.
    pub fn at(&self, x: i64) -> f64 {
        usize::try_from(x - self.start)
            .ok()
            .and_then(|i| self.mass.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.mass
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.start + i as i64, p))
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    fn end(&self) -> i64 {
        self.start + self.mass.len() as i64
    }
}

/// `m_n = Σ_x xⁿ P(x)`.
pub fn moment(profile: &ProbabilityProfile, n: u32) -> f64 {
    profile
        .iter()
        .map(|(x, p)| (x as f64).powi(n as i32) * p)
        .sum()
}

/// `κ = m₄ / m₂²`, the raw ratio.
pub fn kurtosis(m2: f64, m4: f64) -> Result<f64> {
    if m2 <= 0.0 {
        return Err(Error::Numerical("kurtosis undefined for m2 = 0".into()));
    }
    Ok(m4 / (m2 * m2))
}

/// `S = -Σ P log P` in nats; empty sites contribute nothing.
pub fn shannon_entropy(profile: &ProbabilityProfile) -> f64 {
    -profile
        .mass
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Inverse participation ratio `(Σ P²)⁻¹`.
pub fn ipr(profile: &ProbabilityProfile) -> f64 {
    1.0 / profile.mass.iter().map(|p| p * p).sum::<f64>()
}

/// Kullback-Leibler divergence `Σ R log₂(R/W)` in bits.
pub fn kld(r: &ProbabilityProfile, w: &ProbabilityProfile) -> Result<f64> {
    let mut total = 0.0;
    for (x, rp) in r.iter().filter(|(_, p)| *p > 0.0) {
        let wp = w.at(x);
        if wp <= 0.0 {
            return Err(Error::InfiniteDivergence((x - r.start) as usize));
        }
        total += rp * (rp / wp).log2();
    }
    Ok(total)
}

/// Jensen-Shannon dissimilarity in bits, symmetric and within `[0, 1]`.
pub fn jsd(p: &ProbabilityProfile, q: &ProbabilityProfile) -> f64 {
    let lo = p.start.min(q.start);
    let hi = p.end().max(q.end());
    let mut total = 0.0;
    for x in lo..hi {
        let (a, b) = (p.at(x), q.at(x));
        let m = 0.5 * (a + b);
        // summing both halves per site makes the result exactly symmetric
        let term = |v: f64| if v > 0.0 { v * (v / m).log2() } else { 0.0 };
        total += term(a) + term(b);
    }
    (0.5 * total).clamp(0.0, 1.0)
}

/// Reduced coin density matrix `[[G_a, G_ab], [G_ab*, G_b]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoinMatrix {
    /// `Σ |ψ^D|²`
    pub g_a: f64,
    /// `Σ |ψ^U|²`
    pub g_b: f64,
    /// `Σ ψ^D (ψ^U)*`
    pub g_ab: Complex64,
}

impl ReducedCoinMatrix {
    /// Eigenvalues `(λ⁻, λ⁺)`.
    pub fn eigenvalues(&self) -> Result<(f64, f64)> {
        let arg = 1.0 - 4.0 * self.g_a * self.g_b + 4.0 * self.g_ab.norm_sqr();
        const TOL: f64 = 1e-12;
        if !(-TOL..=1.0 + TOL).contains(&arg) {
            return Err(Error::Numerical(format!(
                "eigenvalue discriminant {arg} outside [0, 1]"
            )));
        }
        let root = arg.clamp(0.0, 1.0).sqrt();
        Ok((0.5 - 0.5 * root, 0.5 + 0.5 * root))
    }
}

pub fn reduced_coin_matrix(state: &SpinorField) -> ReducedCoinMatrix {
    let (down, up) = (state.down(), state.up());
    let mut rc = ReducedCoinMatrix {
        g_a: 0.0,
        g_b: 0.0,
        g_ab: Complex64::new(0.0, 0.0),
    };
    for i in state.support() {
        rc.g_a += down[i].norm_sqr();
        rc.g_b += up[i].norm_sqr();
        rc.g_ab += down[i] * up[i].conj();
    }
    rc
}

/// Spin-lattice entanglement entropy in bits.
pub fn entanglement_entropy(rc: &ReducedCoinMatrix) -> Result<f64> {
    let (minus, plus) = rc.eigenvalues()?;
    let h = |l: f64| if l > 0.0 { -l * l.log2() } else { 0.0 };
    Ok(h(minus) + h(plus))
}

/// `A(x) = |ψ^U(x)|² - |ψ^D(x)|²` over the whole lattice, divided by its
/// largest magnitude. An identically zero row stays zero.
pub fn asymmetry_row(state: &SpinorField) -> Vec<f64> {
    let (down, up) = (state.down(), state.up());
    let mut row: Vec<f64> = up
        .iter()
        .zip(down)
        .map(|(u, d)| u.norm_sqr() - d.norm_sqr())
        .collect();
    let max = row.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    if max > 0.0 {
        row.iter_mut().for_each(|a| *a /= max);
    }
    row
}

/// Normalized asymmetry `A_t(x)/|A_t|^max`, one row per time step.
#[derive(Debug, Clone, PartialEq)]
pub struct Carpet {
    pub x_max: usize,
    pub rows: Vec<Vec<f64>>,
}

impl Carpet {
    pub fn new(x_max: usize) -> Self {
        Carpet {
            x_max,
            rows: Vec::new(),
        }
    }

    pub fn value(&self, t: usize, x: i64) -> Option<f64> {
        let i = usize::try_from(x + self.x_max as i64).ok()?;
        self.rows.get(t)?.get(i).copied()
    }

    /// Triplets `t,x,A_norm`, `t` major and `x` ascending.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,x,A_norm")?;
        for (t, row) in self.rows.iter().enumerate() {
            for (i, a) in row.iter().enumerate() {
                writeln!(w, "{t},{},{a}", i as i64 - self.x_max as i64)?;
            }
        }
        Ok(())
    }
}

pub fn asymmetry_carpet<'a>(states: impl IntoIterator<Item = &'a SpinorField>) -> Carpet {
    let mut carpet = Carpet::new(0);
    for s in states {
        carpet.x_max = s.x_max();
        carpet.rows.push(asymmetry_row(s));
    }
    carpet
}

/// Power-law fit `m₂ ≈ e^intercept · t^alpha` on a log-log scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    pub intercept: f64,
    pub window: [usize; 2],
    /// RMS of the log-log residuals.
    pub residual: f64,
}

/// Default fit window `[t_max/10, t_max]`, never starting before `t = 10`.
pub fn default_window(t_max: usize) -> [usize; 2] {
    [(t_max / 10).max(10), t_max]
}

/// Ordinary least squares of `ln m₂` against `ln t` over samples with
/// `window[0] ≤ t ≤ window[1]`.
pub fn fit_alpha(samples: &[(usize, f64)], window: [usize; 2]) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, _)| (window[0]..=window[1]).contains(t))
        .map(|&(t, m2)| {
            if t == 0 || m2.is_nan() || m2 <= 0.0 || !m2.is_finite() {
                Err(Error::Fit(format!("m2({t}) = {m2} cannot enter a log-log fit")))
            } else {
                Ok(((t as f64).ln(), m2.ln()))
            }
        })
        .collect::<Result<_>>()?;

    let mut ts: Vec<f64> = pts.iter().map(|p| p.0).collect();
    ts.dedup();
    if ts.len() < 2 {
        return Err(Error::Fit(format!(
            "window [{}, {}] holds fewer than two distinct times",
            window[0], window[1]
        )));
    }

    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let alpha = sxy / sxx;
    let intercept = mean_y - alpha * mean_x;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - alpha * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitResult {
        alpha,
        intercept,
        window,
        residual,
    })
}
