//! Quality measures for a smoothed curve.
//!
//! * Curvature error `E_c`: sum of absolute discrete second derivatives over
//!   the interior points of a 1D curve. Lower is smoother.
//! * Distance error `E_d`: for each approximated point, the Euclidean distance
//!   (in graph space, position ⊕ value) to the closest reference point, summed.

use crate::error::{Error, Result};
use crate::geometry::SpatialIndex;

/// An ordered list of (position, value) samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoints {
    dim: usize,
    positions: Vec<f64>,
    values: Vec<f64>,
}

impl CurvePoints {
    pub fn new(dim: usize, positions: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if positions.len() != dim * values.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * values.len(),
                found: positions.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(i) = positions.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i / dim));
        }
        Ok(Self { dim, positions, values })
    }

    pub fn from_1d(xs: &[f64], values: &[f64]) -> Result<Self> {
        Self::new(1, xs.to_vec(), values.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    /// Flat row-major buffer of `position ⊕ value` points.
    fn graph_points(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() * (self.dim + 1));
        for i in 0..self.len() {
            out.extend_from_slice(self.position(i));
            out.push(self.values[i]);
        }
        out
    }
}

/// Per-method quality summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub method: String,
    /// K for local methods, M for the global fit.
    pub param: usize,
    /// `None` when the curve is not one-dimensional.
    pub curvature: Option<f64>,
    pub distance: f64,
}

/// `(f(xᵢ₊₁) − 2f(xᵢ) + f(xᵢ₋₁)) / ((xᵢ₊₁ − xᵢ)(xᵢ − xᵢ₋₁))` at interior index `i`.
pub fn second_difference(curve: &CurvePoints, i: usize) -> Result<f64> {
    if curve.dim != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: curve.dim,
        });
    }
    if i == 0 || i + 1 >= curve.len() {
        return Err(Error::NotInterior(i));
    }
    let x = &curve.positions;
    let f = &curve.values;
    let right = x[i + 1] - x[i];
    let left = x[i] - x[i - 1];
    if right == 0.0 {
        return Err(Error::DuplicateAbscissa(i + 1));
    }
    if left == 0.0 {
        return Err(Error::DuplicateAbscissa(i));
    }
    Ok((f[i + 1] - 2.0 * f[i] + f[i - 1]) / (right * left))
}

/// `Σ |f''(xᵢ)|` over interior points; needs at least three points with
/// strictly increasing abscissae.
///
/// Affine data scores exactly zero on uniform grids only: the numerator is the
/// symmetric second difference whatever the spacing.
pub fn curvature_error(curve: &CurvePoints) -> Result<f64> {
    if curve.len() < 3 {
        return Err(Error::Config(format!(
            "curvature needs at least 3 points, got {}",
            curve.len()
        )));
    }
    if curve.dim == 1 {
        if let Some(i) = curve.positions.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::DuplicateAbscissa(i + 1));
        }
    }
    (1..curve.len() - 1).try_fold(0.0, |acc, i| Ok(acc + second_difference(curve, i)?.abs()))
}

/// `Σᵢ minⱼ ‖pᵢ − kⱼ‖` in graph space, with the nearest reference point found
/// through a spatial index.
pub fn distance_error(approx: &CurvePoints, reference: &CurvePoints) -> Result<f64> {
    if approx.is_empty() || reference.is_empty() {
        return Err(Error::Empty);
    }
    if approx.dim != reference.dim {
        return Err(Error::DimensionMismatch {
            expected: reference.dim,
            found: approx.dim,
        });
    }
    let gdim = approx.dim + 1;
    let index = SpatialIndex::from_flat(gdim, reference.graph_points())?;
    approx
        .graph_points()
        .chunks_exact(gdim)
        .try_fold(0.0, |acc, p| Ok(acc + index.nearest_distance(p)?))
}
