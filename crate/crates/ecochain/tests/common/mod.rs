//! Shared samplers for the property and acceptance suites: seeded RNG draws
//! of valid parameter sets and nonnegative states.
//!
//! Not every test target uses every helper.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ecochain::model::{validate_params, ModelVariant, ParameterSet, State};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random parameter set satisfying every constraint (finite K included).
pub fn sample_params(rng: &mut ChaCha8Rng) -> ParameterSet {
    let c = rng.gen_range(0.1..1.0);
    let q = rng.gen_range(0.1..1.0);
    let b = rng.gen_range(0.1..1.0);
    let mu = rng.gen_range(0.05..0.5);
    let p = ParameterSet::new(
        c * rng.gen_range(0.1..0.9),
        q * rng.gen_range(0.1..0.9),
        c,
        b * rng.gen_range(0.1..0.9),
        q,
        b,
        rng.gen_range(0.05..1.0),
        rng.gen_range(0.05..1.0),
        mu + rng.gen_range(0.0..0.5),
        mu,
        rng.gen_range(0.1..1.5),
        rng.gen_range(0.5..5.0),
    );
    debug_assert!(validate_params(&p, ModelVariant::LogisticEpidemic).is_valid());
    p
}

/// A random state in `[lo, hi]^4`, with `I = 0` for disease-free variants.
pub fn sample_state(rng: &mut ChaCha8Rng, variant: ModelVariant, lo: f64, hi: f64) -> State {
    let mut x = State::new(
        rng.gen_range(lo..hi),
        rng.gen_range(lo..hi),
        rng.gen_range(lo..hi),
        rng.gen_range(lo..hi),
    );
    if variant.is_disease_free() {
        x.i = 0.0;
    }
    x
}

/// Largest componentwise difference scaled by `max(1, |a|, |b|)`.
pub fn max_scaled_gap(a: &State, b: &State) -> f64 {
    a.as_array()
        .iter()
        .zip(b.as_array())
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}
