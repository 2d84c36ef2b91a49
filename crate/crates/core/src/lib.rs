//! Discrete-time quantum walks whose jump lengths follow binary aperiodic
//! sequences (periodic, Fibonacci, Thue-Morse, Rudin-Shapiro, random), with
//! the sequence diagnostics and wavepacket observables used to study them.

pub mod error;
pub mod observables;
pub mod runner;
pub mod sequences;
pub mod seqstats;
pub mod series;
pub mod walk;

pub use error::{Error, Result};
pub use observables::{FitResult, ProbabilityProfile, ReducedCoinMatrix};
pub use sequences::{generate, to_jumps, BinarySequence, JumpSchedule, Protocol};
pub use series::{Observable, ObservableSeries};
pub use walk::{CoinFamily, CoinSpec, RunConfig, SpinorField};
