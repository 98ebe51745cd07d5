//! Compactly supported radial profiles used both as LOWESS weights and as the
//! RBF kernel.
//!
//! A profile maps a normalized distance `r >= 0` to a weight in `[0, 1]` with
//! `w(0) = 1`, non-increasing on `[0, 1]` and identically zero for `r >= 1`.

use crate::error::{Error, Result};

/// Radial profile shared by the weighting function and the basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelProfile {
    /// `(1 - r^3)^3` on `[0, 1)`, zero beyond.
    #[default]
    Tricube,
}

impl KernelProfile {
    /// Checked evaluation: rejects negative or non-finite radii.
    pub fn weight(self, r: f64) -> Result<f64> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidRadius(r));
        }
        Ok(self.eval(r))
    }

    /// Unchecked evaluation for radii already known to be valid.
    #[inline]
    pub fn eval(self, r: f64) -> f64 {
        match self {
            KernelProfile::Tricube => {
                if r >= 1.0 {
                    0.0
                } else {
                    let t = 1.0 - r * r * r;
                    t * t * t
                }
            }
        }
    }

    /// Value at the origin; 1 for every admissible profile.
    pub fn at_origin(self) -> f64 {
        self.eval(0.0)
    }
}

/// Maps a raw distance into the kernel's unit support by dividing by the
/// neighborhood radius `d_max`.
pub fn normalized_distance(dist: f64, d_max: f64) -> Result<f64> {
    if !(d_max > 0.0) {
        return Err(Error::DegenerateNeighborhood);
    }
    Ok(dist / d_max)
}

/// Kernel weights for a list of neighbor distances normalized by their maximum.
///
/// When every distance is zero (all neighbors coincide with the query) each
/// normalized radius is taken as 0, so every neighbor gets full weight.
pub(crate) fn neighbor_weights(kernel: KernelProfile, distances: &[f64], d_max: f64) -> Vec<f64> {
    if d_max > 0.0 {
        distances.iter().map(|&d| kernel.eval(d / d_max)).collect()
    } else {
        vec![kernel.at_origin(); distances.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: KernelProfile = KernelProfile::Tricube;

    #[test]
    fn tricube_reference_values() {
        assert_eq!(K.weight(0.0).unwrap(), 1.0);
        assert_eq!(K.weight(1.0).unwrap(), 0.0);
        assert_eq!(K.weight(0.5).unwrap(), 0.669921875);
        assert_eq!(K.weight(3.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(matches!(K.weight(-0.1), Err(Error::InvalidRadius(_))));
        assert!(K.weight(f64::NAN).is_err());
        assert!(K.weight(f64::INFINITY).is_err());
    }

    #[test]
    fn admissibility_on_dense_grid() {
        let mut prev = K.weight(0.0).unwrap();
        assert_eq!(prev, 1.0);
        for i in 1..=10_000 {
            let r = i as f64 / 10_000.0;
            let w = K.weight(r).unwrap();
            assert!(w <= prev, "not monotone at r = {r}");
            assert!((0.0..=1.0).contains(&w));
            prev = w;
        }
        for i in 0..1000 {
            assert_eq!(K.weight(1.0 + i as f64 * 0.01).unwrap(), 0.0);
        }
    }

    #[test]
    fn continuous_at_support_edge() {
        assert!(K.weight(1.0 - 1e-6).unwrap() < 1e-15);
        assert_eq!(K.weight(1.0 + 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalized_distance(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(normalized_distance(0.9, 0.9).unwrap(), 1.0);
        assert_eq!(normalized_distance(0.45, 0.9).unwrap(), 0.5);
        assert!(matches!(
            normalized_distance(1.0, 0.0),
            Err(Error::DegenerateNeighborhood)
        ));
        assert!(normalized_distance(1.0, -2.0).is_err());
    }

    #[test]
    fn scale_free_weights() {
        let d = [0.0, 0.1, 0.37, 0.8, 1.3];
        let w1 = neighbor_weights(K, &d, 1.3);
        let scaled: Vec<f64> = d.iter().map(|x| x * 4.0).collect();
        let w2 = neighbor_weights(K, &scaled, 5.2);
        for (a, b) in w1.iter().zip(&w2) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
