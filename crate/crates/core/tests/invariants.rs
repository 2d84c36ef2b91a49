use std::f64::consts::FRAC_PI_2;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aperiodic_walk::seqstats::lzc;
use aperiodic_walk::walk::{classical_evolve, step, CoinFamily, CoinSpec, RunConfig};
use aperiodic_walk::{generate, Observable, Protocol, SpinorField};

fn rng_for(p: Protocol) -> Option<u64> {
    (p == Protocol::Random).then_some(7)
}

#[test]
fn single_steps_preserve_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let extent = 21;
    for _ in 0..10_000 {
        let family = if rng.random_bool(0.5) {
            CoinFamily::H
        } else {
            CoinFamily::K
        };
        let coin = CoinSpec::new(family, rng.random_range(0.0..=FRAC_PI_2)).unwrap();
        let jump = rng.random_range(1..=2);

        let mut amp = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mut down = vec![Complex64::new(0.0, 0.0); extent];
        let mut up = down.clone();
        for i in 3..extent - 3 {
            down[i] = amp();
            up[i] = amp();
        }
        let norm: f64 = down.iter().chain(&up).map(|a| a.norm_sqr()).sum();
        let scale = norm.sqrt().recip();
        down.iter_mut().chain(up.iter_mut()).for_each(|a| *a *= scale);

        let state = SpinorField::from_amplitudes(down, up).unwrap();
        let next = step(&state, &coin, jump).unwrap();
        assert!(
            (next.norm() - state.norm()).abs() < 1e-12,
            "{family} θ={} J={jump}",
            coin.theta
        );
    }
}

#[test]
fn classical_mass_survives_a_long_run() {
    let t_max = 100_000;
    let coin = CoinSpec::new(CoinFamily::H, 0.0).unwrap();
    let mut config = RunConfig::new(coin, Protocol::Random, t_max)
        .with_fields(&[Observable::M2])
        .with_stride(t_max);
    config.rng_seed = Some(3);
    let run = classical_evolve(&config).unwrap();
    assert_abs_diff_eq!(run.final_norm, 1.0, epsilon = 1e-12);
    // J² averages to 2.5 over a balanced word
    let m2 = run.series.column(Observable::M2).unwrap()[1];
    assert_abs_diff_eq!(m2 / t_max as f64, 2.5, epsilon = 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequences_have_the_requested_length(
        p in prop::sample::select(Protocol::ALL.to_vec()),
        seed in 0u8..2,
        t_max in 1usize..3000,
    ) {
        let seq = generate(p, seed, rng_for(p), t_max).unwrap();
        prop_assert_eq!(seq.symbols.len(), t_max + 1);
        prop_assert!(seq.symbols.iter().all(|&b| b <= 1));
        // a Fibonacci word grown from 1 passes through 1 -> 0 and starts with 0
        if !matches!(p, Protocol::Standard | Protocol::Fibonacci) {
            prop_assert_eq!(seq.symbols[0], seed);
        }
    }

    #[test]
    fn substitution_words_extend_their_prefixes(
        p in prop::sample::select(vec![
            Protocol::Periodic,
            Protocol::Fibonacci,
            Protocol::ThueMorse,
            Protocol::RudinShapiro,
        ]),
        seed in 0u8..2,
        short in 1usize..500,
        extra in 0usize..2000,
    ) {
        let a = generate(p, seed, None, short).unwrap();
        let b = generate(p, seed, None, short + extra).unwrap();
        prop_assert_eq!(&a.symbols[..], &b.symbols[..=short]);
    }

    #[test]
    fn words_of_two_or_more_symbols_have_two_components(
        w in prop::collection::vec(0u8..2, 2..300),
    ) {
        let trace = lzc(&w).unwrap();
        prop_assert!(trace.complexity >= 2);
        prop_assert_eq!(trace.partitions.concat(), w);
    }
}
