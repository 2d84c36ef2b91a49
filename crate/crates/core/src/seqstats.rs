//! Diagnostics of binary sequences: Lempel-Ziv complexity, autocorrelation,
//! power spectrum and running symbol balance.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::series::Curve;

/// Lempel-Ziv complexity of a word and the partition that realizes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LzcTrace {
    pub complexity: usize,
    /// Consecutive components; their concatenation is the input word.
    pub partitions: Vec<Vec<u8>>,
}

impl LzcTrace {
    /// Components joined by `·`, e.g. `1·0·11·010·1`.
    pub fn dotted(&self) -> String {
        self.partitions
            .iter()
            .map(|p| p.iter().map(|&b| char::from(b'0' + b)).collect::<String>())
            .collect::<Vec<_>>()
            .join("·")
    }
}

/// Kaspar-Schuster Lempel-Ziv complexity.
///
/// Scans left to right, growing the current component `Q` while it still
/// occurs in the vocabulary of everything before it (the prefix `SQ` minus its
/// last symbol). When `Q` is new it becomes a component and the count goes up;
/// an unfinished copy at the end of the word counts as one more.
pub fn lzc(word: &[u8]) -> Result<LzcTrace> {
    let n = word.len();
    if n == 0 {
        return Err(Error::Empty("lzc needs a nonempty word"));
    }
    // start index of every component
    let mut starts = vec![0usize];
    if n > 1 {
        // `l`: length of S; `i`: candidate copy origin; `k`: length of Q being
        // matched at `i`; `k_max`: longest such length over the origins tried
        let (mut l, mut i, mut k, mut k_max) = (1usize, 0usize, 1usize, 1usize);
        loop {
            if word[i + k - 1] == word[l + k - 1] {
                k += 1;
                if l + k > n {
                    starts.push(l);
                    break;
                }
            } else {
                k_max = k_max.max(k);
                i += 1;
                if i == l {
                    starts.push(l);
                    l += k_max;
                    if l + 1 > n {
                        break;
                    }
                    i = 0;
                    k = 1;
                    k_max = 1;
                } else {
                    k = 1;
                }
            }
        }
    }
    let partitions = starts
        .iter()
        .zip(starts.iter().skip(1).chain(std::iter::once(&n)))
        .map(|(&a, &b)| word[a..b].to_vec())
        .collect::<Vec<_>>();
    Ok(LzcTrace {
        complexity: partitions.len(),
        partitions,
    })
}

/// Complexity of the prefixes of length `stride`, `2·stride`, …
///
/// Each prefix is evaluated from scratch; prefixes run in parallel.
pub fn lzc_curve(word: &[u8], stride: usize) -> Result<Curve<usize>> {
    if stride == 0 || stride > word.len() {
        return Err(Error::config(
            "stride",
            format!("must lie in 1..={}", word.len()),
        ));
    }
    let t: Vec<usize> = (1..=word.len() / stride).map(|j| j * stride).collect();
    let values = t
        .par_iter()
        .map(|&len| lzc(&word[..len]).map(|tr| tr.complexity))
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve { t, values })
}

/// Normalized autocorrelation `R(τ)/R(0)` for `τ = 0 … τ_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct AcfRecord {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
}

impl AcfRecord {
    pub fn as_curve(&self) -> Curve<f64> {
        Curve {
            t: self.lags.clone(),
            values: self.values.clone(),
        }
    }
}

fn symbols_as_f64(word: &[u8]) -> Vec<f64> {
    word.iter().map(|&b| b as f64).collect()
}

fn centered(values: &[f64]) -> Result<Vec<f64>> {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let z: Vec<f64> = values.iter().map(|&v| v - mean).collect();
    let scale = 1e-12 * mean.abs().max(1.0);
    if z.iter().all(|&v| v.abs() <= scale) {
        return Err(Error::Degenerate("constant sequence has no fluctuations"));
    }
    Ok(z)
}

/// Autocorrelation of the mean-centered word,
/// `R(τ) = (1/(T-τ)) Σ_{t≥τ} z_t z_{t-τ}`, normalized so that `R(0) = 1`.
pub fn autocorrelation(word: &[u8], tau_max: usize) -> Result<AcfRecord> {
    autocorrelation_of(&symbols_as_f64(word), tau_max)
}

/// [`autocorrelation`] of an arbitrary real series.
pub fn autocorrelation_of(word: &[f64], tau_max: usize) -> Result<AcfRecord> {
    if word.is_empty() {
        return Err(Error::Empty("autocorrelation needs a nonempty word"));
    }
    if tau_max == 0 || tau_max >= word.len() {
        return Err(Error::config(
            "tau_max",
            format!("must lie in 1..{}", word.len()),
        ));
    }
    let z = centered(word)?;
    let t_len = z.len();
    let raw: Vec<f64> = (0..=tau_max)
        .map(|tau| {
            let s: f64 = z[tau..].iter().zip(&z).map(|(a, b)| a * b).sum();
            s / (t_len - tau) as f64
        })
        .collect();
    let r0 = raw[0];
    Ok(AcfRecord {
        lags: (0..=tau_max).collect(),
        values: raw.into_iter().map(|r| r / r0).collect(),
    })
}

/// Power spectrum over `ω = 1 … T`, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRecord {
    pub frequencies: Vec<usize>,
    pub power: Vec<f64>,
}

impl SpectrumRecord {
    pub fn omega_max(&self) -> usize {
        self.frequencies.len()
    }

    /// `ω / ω_max` for each bin.
    pub fn scaled_frequencies(&self) -> Vec<f64> {
        let m = self.omega_max() as f64;
        self.frequencies.iter().map(|&w| w as f64 / m).collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "omega_scaled,phi")?;
        for (f, p) in self.scaled_frequencies().iter().zip(&self.power) {
            writeln!(w, "{f},{p}")?;
        }
        Ok(())
    }
}

/// `Φ(ω) ∝ |Σ_n z_n e^{-2πiωn/T}|²` of the mean-centered word, normalized to
/// unit total. Bin `ω = T` is the zero-frequency bin.
pub fn psd(word: &[u8]) -> Result<SpectrumRecord> {
    psd_of(&symbols_as_f64(word))
}

/// [`psd`] of an arbitrary real series.
pub fn psd_of(word: &[f64]) -> Result<SpectrumRecord> {
    let t_len = word.len();
    if t_len < 2 {
        return Err(Error::config("word", "spectrum needs at least two symbols"));
    }
    let z = centered(word)?;
    let mut buf: Vec<Complex64> = z.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(t_len).process(&mut buf);

    // 1/(2π) prefactor cancels in the normalization
    let mut power: Vec<f64> = (1..=t_len).map(|w| buf[w % t_len].norm_sqr()).collect();
    let total: f64 = power.iter().sum();
    power.iter_mut().for_each(|p| *p /= total);
    Ok(SpectrumRecord {
        frequencies: (1..=t_len).collect(),
        power,
    })
}

/// Running fraction of ones, `f(t) = #{s ≤ t : b_s = 1} / (t + 1)`.
pub fn ones_fraction_curve(word: &[u8]) -> Result<Curve<f64>> {
    if word.is_empty() {
        return Err(Error::Empty("ones fraction needs a nonempty word"));
    }
    let mut ones = 0usize;
    let values = word
        .iter()
        .enumerate()
        .map(|(t, &b)| {
            ones += b as usize;
            ones as f64 / (t + 1) as f64
        })
        .collect();
    Ok(Curve {
        t: (0..word.len()).collect(),
        values,
    })
}
