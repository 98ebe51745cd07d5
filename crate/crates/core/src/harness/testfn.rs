//! Synthetic data: the three-Gaussian test curve and reproducible uniform noise.
//!
//! Noise comes from xoshiro256++ seeded by SplitMix64 expansion of a 64-bit
//! seed (the reference seeding for the xoshiro family). Each 64-bit output `x`
//! maps to `u = ((x >> 11) + 0.5) · 2⁻⁵³ ∈ (0, 1)` and then to the perturbation
//! `amplitude · (2u − 1)`, strictly inside `(−amplitude, amplitude)`. Draws are
//! consumed in sample order, one per point.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::geometry::Dataset;

/// `e^(−15(x−½)²) + ½e^(−20(x−½)²) − ¾e^(−8(x+½)²)`
pub fn test_function(x: f64) -> f64 {
    let a = x - 0.5;
    let b = x + 0.5;
    (-15.0 * a * a).exp() + 0.5 * (-20.0 * a * a).exp() - 0.75 * (-8.0 * b * b).exp()
}

/// `n` equally spaced abscissae on `[low, high]` (both ends included).
pub fn uniform_abscissae(n: usize, low: f64, high: f64) -> Vec<f64> {
    if n == 1 {
        return vec![low];
    }
    let step = (high - low) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { high } else { low + step * i as f64 })
        .collect()
}

/// Noise-free samples of [`test_function`].
pub fn sample_test_function(n: usize, low: f64, high: f64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::Config(format!("need at least 2 samples, got {n}")));
    }
    if !(low < high) {
        return Err(Error::Config(format!("empty interval [{low}, {high}]")));
    }
    let xs = uniform_abscissae(n, low, high);
    let ys: Vec<f64> = xs.iter().map(|&x| test_function(x)).collect();
    Dataset::from_1d(&xs, &ys)
}

/// Deterministic uniform noise source; see the module docs for the exact algorithm.
#[derive(Debug, Clone)]
pub struct UniformNoise {
    rng: Xoshiro256PlusPlus,
    amplitude: f64,
}

impl UniformNoise {
    pub fn new(amplitude: f64, seed: u64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::Config(format!("noise amplitude must be >= 0, got {amplitude}")));
        }
        Ok(Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            amplitude,
        })
    }

    pub fn draw(&mut self) -> f64 {
        let u = ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
        self.amplitude * (2.0 * u - 1.0)
    }
}

/// Adds an independent `uniform(−amplitude, amplitude)` draw to each value.
pub fn add_uniform_noise(dataset: &Dataset, amplitude: f64, seed: u64) -> Result<Dataset> {
    let mut noise = UniformNoise::new(amplitude, seed)?;
    if amplitude == 0.0 {
        return Ok(dataset.clone());
    }
    let values = dataset.values().iter().map(|v| v + noise.draw()).collect();
    dataset.with_values(values)
}
