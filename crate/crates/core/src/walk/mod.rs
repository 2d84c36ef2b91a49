//! Coined walker under jump-modulated shifts, and its classical comparator.

mod coin;
mod engine;
mod state;

pub use coin::{CoinFamily, CoinMatrix, CoinSpec};
pub use engine::{
    classical_evolve, classical_evolve_with_jumps, classical_step, default_stride, evolve,
    evolve_with_jumps, initial_state, step, Evolution, RunConfig, NORM_TOLERANCE,
};
pub use state::{ClassicalProfile, SpinorField};
