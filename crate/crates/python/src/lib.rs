use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use aperiodic_walk::observables::{self as obs, default_window, ProbabilityProfile};
use aperiodic_walk::seqstats;
use aperiodic_walk::walk::{classical_evolve, evolve, CoinMatrix};
use aperiodic_walk::{
    BinarySequence, CoinFamily, CoinSpec, Error, Observable, Protocol, RunConfig, SpinorField,
};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn coin(family: &str, theta: f64) -> PyResult<CoinSpec> {
    CoinSpec::new(parse(family)?, theta).map_err(err)
}

fn bits(word: &[i64]) -> PyResult<Vec<u8>> {
    word.iter()
        .map(|&b| match b {
            0 | 1 => Ok(b as u8),
            _ => Err(PyValueError::new_err(format!("symbol {b} is not 0 or 1"))),
        })
        .collect()
}

/// A binary jump-control word.
#[pyclass(name = "Sequence", module = "aperiodic_walk", frozen)]
struct PySequence(BinarySequence);

#[pymethods]
impl PySequence {
    #[getter]
    fn protocol(&self) -> &'static str {
        self.0.protocol.name()
    }

    #[getter]
    fn seed_symbol(&self) -> u8 {
        self.0.seed_symbol
    }

    #[getter]
    fn rng_seed(&self) -> Option<u64> {
        self.0.rng_seed
    }

    #[getter]
    fn symbols(&self) -> Vec<u32> {
        self.0.symbols.iter().map(|&b| b.into()).collect()
    }

    /// Jump lengths `1 + b_t`.
    fn jumps(&self) -> Vec<usize> {
        self.0.to_jumps().0
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        BinarySequence::from_json(text).map(PySequence).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __getitem__(&self, i: isize) -> PyResult<u8> {
        let n = self.0.len() as isize;
        let j = if i < 0 { i + n } else { i };
        if (0..n).contains(&j) {
            Ok(self.0.symbols[j as usize])
        } else {
            Err(PyIndexError::new_err("sequence index out of range"))
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Sequence(protocol={:?}, seed_symbol={}, len={})",
            self.0.protocol.name(),
            self.0.seed_symbol,
            self.0.len()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (protocol, t_max, seed_symbol = 0, rng_seed = None))]
fn generate_sequence(
    protocol: &str,
    t_max: usize,
    seed_symbol: u8,
    rng_seed: Option<u64>,
) -> PyResult<PySequence> {
    aperiodic_walk::generate(parse(protocol)?, seed_symbol, rng_seed, t_max)
        .map(PySequence)
        .map_err(err)
}

/// Lempel-Ziv complexity and its components as strings.
#[pyfunction]
fn lzc(word: Vec<i64>) -> PyResult<(usize, Vec<String>)> {
    let trace = seqstats::lzc(&bits(&word)?).map_err(err)?;
    let parts = trace
        .partitions
        .iter()
        .map(|p| p.iter().map(|b| char::from(b'0' + b)).collect())
        .collect();
    Ok((trace.complexity, parts))
}

#[pyfunction]
fn lzc_curve(word: Vec<i64>, stride: usize) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let c = seqstats::lzc_curve(&bits(&word)?, stride).map_err(err)?;
    Ok((c.t, c.values))
}

/// Normalized autocorrelation `R(τ)` for `τ = 0..=max_lag`.
#[pyfunction]
fn autocorrelation(word: Vec<f64>, max_lag: usize) -> PyResult<(Vec<usize>, Vec<f64>)> {
    let acf = seqstats::autocorrelation_of(&word, max_lag).map_err(err)?;
    Ok((acf.lags, acf.values))
}

/// Normalized power spectrum against `ω/ω_max`.
#[pyfunction]
fn psd(word: Vec<f64>) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = seqstats::psd_of(&word).map_err(err)?;
    Ok((s.scaled_frequencies(), s.power))
}

#[pyfunction]
fn ones_fraction(word: Vec<i64>) -> PyResult<(Vec<usize>, Vec<f64>)> {
    let c = seqstats::ones_fraction_curve(&bits(&word)?).map_err(err)?;
    Ok((c.t, c.values))
}

/// Runs one walk and returns its observable columns, keyed by name, plus
/// `t`, `final_norm` and (on request) the `carpet` rows.
#[pyfunction]
#[pyo3(signature = (
    protocol = "standard", t_max = 1000, coin_family = "H", theta = FRAC_PI_4,
    seed_symbol = 0, rng_seed = None, stride = None, fields = None,
    classical = false, carpet = false,
))]
#[allow(clippy::too_many_arguments)]
fn run_walk<'py>(
    py: Python<'py>,
    protocol: &str,
    t_max: usize,
    coin_family: &str,
    theta: f64,
    seed_symbol: u8,
    rng_seed: Option<u64>,
    stride: Option<usize>,
    fields: Option<Vec<String>>,
    classical: bool,
    carpet: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let protocol: Protocol = parse(protocol)?;
    let mut config = RunConfig::new(coin(coin_family, theta)?, protocol, t_max)
        .with_seed_symbol(seed_symbol);
    if rng_seed.is_some() || protocol != Protocol::Random {
        config.rng_seed = rng_seed;
    }
    if let Some(s) = stride {
        config = config.with_stride(s);
    }
    if let Some(names) = fields {
        let fields: Vec<Observable> = names.iter().map(|n| parse(n)).collect::<PyResult<_>>()?;
        config = config.with_fields(&fields);
    }
    config.carpet = carpet;

    let run = py
        .detach(|| {
            if classical {
                classical_evolve(&config)
            } else {
                evolve(&config)
            }
        })
        .map_err(err)?;

    let out = PyDict::new(py);
    out.set_item("t", run.series.t.clone())?;
    for o in run.series.fields() {
        out.set_item(o.column(), run.series.column(o).unwrap_or_default().to_vec())?;
    }
    out.set_item("final_norm", run.final_norm)?;
    if let Some(c) = run.carpet {
        out.set_item("carpet", c.rows)?;
    }
    Ok(out)
}

/// Least-squares slope of `ln m2` against `ln t`; the window defaults to
/// `[max(t_max/10, 10), t_max]`.
#[pyfunction]
#[pyo3(signature = (t, m2, window = None))]
fn fit_alpha<'py>(
    py: Python<'py>,
    t: Vec<usize>,
    m2: Vec<f64>,
    window: Option<(usize, usize)>,
) -> PyResult<Bound<'py, PyDict>> {
    if t.len() != m2.len() {
        return Err(err(Error::Shape(t.len(), m2.len())));
    }
    let window = match window {
        Some((a, b)) => [a, b],
        None => default_window(t.iter().copied().max().unwrap_or(0)),
    };
    let samples: Vec<(usize, f64)> = t.into_iter().zip(m2).collect();
    let fit = obs::fit_alpha(&samples, window).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("alpha", fit.alpha)?;
    out.set_item("intercept", fit.intercept)?;
    out.set_item("window", (fit.window[0], fit.window[1]))?;
    out.set_item("residual", fit.residual)?;
    Ok(out)
}

fn profile(p: Vec<f64>, start: Option<i64>) -> ProbabilityProfile {
    match start {
        Some(s) => ProbabilityProfile::new(s, p),
        None => ProbabilityProfile::centered(p),
    }
}

/// `Σ xⁿ P(x)`; `p[0]` sits at `start`, or the array is centered on 0.
#[pyfunction]
#[pyo3(signature = (p, n, start = None))]
fn moment(p: Vec<f64>, n: u32, start: Option<i64>) -> f64 {
    obs::moment(&profile(p, start), n)
}

#[pyfunction]
fn shannon_entropy(p: Vec<f64>) -> f64 {
    obs::shannon_entropy(&ProbabilityProfile::centered(p))
}

#[pyfunction]
fn ipr(p: Vec<f64>) -> f64 {
    obs::ipr(&ProbabilityProfile::centered(p))
}

/// Jensen-Shannon dissimilarity of two arrays centered on the same origin.
#[pyfunction]
fn jsd(p: Vec<f64>, q: Vec<f64>) -> f64 {
    obs::jsd(&ProbabilityProfile::centered(p), &ProbabilityProfile::centered(q))
}

#[pyfunction]
fn kld(r: Vec<f64>, w: Vec<f64>) -> PyResult<f64> {
    obs::kld(&ProbabilityProfile::centered(r), &ProbabilityProfile::centered(w)).map_err(err)
}

/// Spin-lattice entanglement entropy (bits) of a state given as dense
/// down/up amplitude arrays.
#[pyfunction]
fn entanglement_entropy(down: Vec<Complex64>, up: Vec<Complex64>) -> PyResult<f64> {
    let state = SpinorField::from_amplitudes(down, up).map_err(err)?;
    obs::entanglement_entropy(&obs::reduced_coin_matrix(&state)).map_err(err)
}

/// A walker state that can be stepped by hand.
#[pyclass(name = "Spinor", module = "aperiodic_walk")]
struct PySpinor {
    state: SpinorField,
    coin: CoinMatrix,
}

#[pymethods]
impl PySpinor {
    /// The symmetric initial state on `[-x_max, x_max]`.
    #[new]
    #[pyo3(signature = (x_max, coin_family = "H", theta = FRAC_PI_4))]
    fn new(x_max: usize, coin_family: &str, theta: f64) -> PyResult<Self> {
        let spec = coin(coin_family, theta)?;
        let state = SpinorField::initial(&spec, 2 * x_max + 1).map_err(err)?;
        Ok(PySpinor {
            state,
            coin: spec.matrix(),
        })
    }

    fn step(&mut self, jump: usize) -> PyResult<()> {
        self.state.step(&self.coin, jump).map_err(err)
    }

    fn norm(&self) -> f64 {
        self.state.norm()
    }

    /// `P(x)` over the whole lattice, index 0 at `-x_max`.
    fn probability(&self) -> Vec<f64> {
        self.state
            .down()
            .iter()
            .zip(self.state.up())
            .map(|(d, u)| d.norm_sqr() + u.norm_sqr())
            .collect()
    }

    /// `(down, up)` amplitude arrays.
    fn amplitudes(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (self.state.down().to_vec(), self.state.up().to_vec())
    }

    fn entanglement_entropy(&self) -> PyResult<f64> {
        obs::entanglement_entropy(&obs::reduced_coin_matrix(&self.state)).map_err(err)
    }

    #[getter]
    fn x_max(&self) -> usize {
        self.state.x_max()
    }
}

#[pyfunction]
fn protocols() -> Vec<&'static str> {
    Protocol::ALL.iter().map(|p| p.name()).collect()
}

#[pyfunction]
fn coin_families() -> Vec<String> {
    CoinFamily::ALL.iter().map(|f| f.to_string()).collect()
}

#[pymodule]
#[pyo3(name = "aperiodic_walk")]
fn aperiodic_walk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySequence>()?;
    m.add_class::<PySpinor>()?;
    m.add_function(wrap_pyfunction!(generate_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(lzc, m)?)?;
    m.add_function(wrap_pyfunction!(lzc_curve, m)?)?;
    m.add_function(wrap_pyfunction!(autocorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(psd, m)?)?;
    m.add_function(wrap_pyfunction!(ones_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(run_walk, m)?)?;
    m.add_function(wrap_pyfunction!(fit_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(ipr, m)?)?;
    m.add_function(wrap_pyfunction!(jsd, m)?)?;
    m.add_function(wrap_pyfunction!(kld, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(protocols, m)?)?;
    m.add_function(wrap_pyfunction!(coin_families, m)?)?;
    Ok(())
}
