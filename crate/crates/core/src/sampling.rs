//! Deterministic random sampling of algebra elements.
//!
//! Every trial owns its own generator, derived from `(seed, index)` by selecting a
//! ChaCha stream, so results never depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::Element;

pub type TrialRng = ChaCha8Rng;

/// Generator for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Coefficients uniform in `[-1, 1]`.
pub fn uniform_element(rng: &mut impl Rng, level: u32) -> Element {
    let coeffs = (0..1usize << level)
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect();
    Element::from_vec(level, coeffs)
}

/// Uniform coefficients, rescaled onto the ball of radius `max_norm` when longer.
pub fn bounded_element(rng: &mut impl Rng, level: u32, max_norm: f64) -> Element {
    let x = uniform_element(rng, level);
    let n = x.norm();
    if n > max_norm {
        x.scale(max_norm / n)
    } else {
        x
    }
}

/// Pure imaginary element with uniform coefficients; level must be at least 1.
pub fn uniform_pure(rng: &mut impl Rng, level: u32) -> Element {
    assert!(level >= 1, "A_0 has no pure imaginary elements");
    loop {
        let a = uniform_element(rng, level).imag_part();
        if a.norm() > 1e-3 {
            return a;
        }
    }
}

/// Unit-norm pure imaginary element.
pub fn unit_pure(rng: &mut impl Rng, level: u32) -> Element {
    let a = uniform_pure(rng, level);
    let n = a.norm();
    a.scale(1.0 / n)
}

/// Nonzero element with uniform coefficients.
pub fn nonzero_element(rng: &mut impl Rng, level: u32) -> Element {
    loop {
        let x = uniform_element(rng, level);
        if x.norm() > 1e-3 {
            return x;
        }
    }
}
