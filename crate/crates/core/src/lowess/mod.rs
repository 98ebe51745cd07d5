//! Locally weighted polynomial regression (LOWESS).
//!
//! For each query point ξ the K nearest samples are weighted by the kernel of
//! their distance to ξ (normalized by the distance to the K-th neighbor) and a
//! polynomial in the shifted coordinates `x - ξ` is fitted by weighted least
//! squares. Since every non-constant shifted monomial vanishes at ξ, the
//! smoothed value is the constant coefficient.
//!
//! In one dimension the constant and linear fits have closed forms that
//! [`smooth`] uses automatically.

mod basis;

pub use basis::{basis_monomials, PolynomialBasis};

use crate::error::{Error, Result};
use crate::geometry::{Dataset, NeighborSet, SpatialIndex};
use crate::kernels::{neighbor_weights, KernelProfile};
use crate::linsolve::{solve_weighted_normal_equations, DenseMatrix, RANK_TOLERANCE};

/// Parameters of a LOWESS smoother.
#[derive(Debug, Clone, PartialEq)]
pub struct LowessConfig {
    pub degree: u32,
    pub neighbors: usize,
    pub kernel: KernelProfile,
    /// Non-constant terms to drop from the full basis.
    pub mask: Option<Vec<Vec<u32>>>,
    /// Retry with lower degrees when the local normal matrix is singular.
    pub degree_fallback: bool,
}

impl LowessConfig {
    pub fn new(degree: u32, neighbors: usize) -> Self {
        Self {
            degree,
            neighbors,
            kernel: KernelProfile::Tricube,
            mask: None,
            degree_fallback: true,
        }
    }

    pub fn with_mask(mut self, mask: Vec<Vec<u32>>) -> Self {
        self.mask = Some(mask);
        self
    }

    pub fn without_fallback(mut self) -> Self {
        self.degree_fallback = false;
        self
    }

    pub fn basis(&self, dim: usize) -> Result<PolynomialBasis> {
        basis_monomials(dim, self.degree, self.mask.as_deref())
    }

    fn validate(&self, dim: usize) -> Result<PolynomialBasis> {
        let basis = self.basis(dim)?;
        if self.neighbors < 1 {
            return Err(Error::InvalidK(self.neighbors));
        }
        if self.neighbors < basis.len() {
            return Err(Error::Config(format!(
                "K = {} is smaller than the {} basis terms",
                self.neighbors,
                basis.len()
            )));
        }
        Ok(basis)
    }
}

/// A local polynomial centered at ξ, in shifted coordinates `x - ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFit {
    pub center: Vec<f64>,
    pub basis: PolynomialBasis,
    pub coefficients: Vec<f64>,
    /// Weighted residual sum `Σ wᵢ (yᵢ - P(xᵢ - ξ))²` at the solution.
    pub objective: f64,
    /// Degree actually fitted, after any fallback.
    pub degree: u32,
}

impl LocalFit {
    /// Approximation at the center.
    pub fn value(&self) -> f64 {
        self.coefficients[0]
    }

    /// Evaluates the local polynomial at `x`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let offset: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        self.basis.evaluate(&self.coefficients, &offset)
    }
}

struct Neighborhood {
    weights: Vec<f64>,
    offsets: Vec<f64>,
    values: Vec<f64>,
    scale: f64,
}

fn gather(neighbors: &NeighborSet, dataset: &Dataset, kernel: KernelProfile) -> Result<Neighborhood> {
    let dim = dataset.dim();
    if neighbors.query().len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: neighbors.query().len(),
        });
    }
    let d_max = neighbors.d_max();
    let weights = neighbor_weights(kernel, neighbors.distances(), d_max);
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::DegenerateNeighborhood);
    }
    let mut offsets = Vec::with_capacity(neighbors.len() * dim);
    let mut values = Vec::with_capacity(neighbors.len());
    for &i in neighbors.indices() {
        offsets.extend(dataset.position(i).iter().zip(neighbors.query()).map(|(x, q)| x - q));
        values.push(dataset.value(i));
    }
    Ok(Neighborhood {
        weights,
        offsets,
        values,
        scale: if d_max > 0.0 { d_max } else { 1.0 },
    })
}

/// Weighted least-squares fit of a shifted polynomial over a neighborhood.
pub fn fit_local(neighbors: &NeighborSet, dataset: &Dataset, config: &LowessConfig) -> Result<LocalFit> {
    let dim = dataset.dim();
    let full = config.basis(dim)?;
    let hood = gather(neighbors, dataset, config.kernel)?;

    let mut degree = full.degree();
    loop {
        let basis = full.truncated(degree);
        match fit_with_basis(&hood, &basis, dim) {
            Ok((coefficients, objective)) => {
                return Ok(LocalFit {
                    center: neighbors.query().to_vec(),
                    basis,
                    coefficients,
                    objective,
                    degree,
                })
            }
            Err(Error::RankDeficient { .. }) if config.degree_fallback && degree > 0 => degree -= 1,
            Err(e) => return Err(e),
        }
    }
}

// Fits in coordinates scaled by the neighborhood radius so the normal matrix
// conditioning does not depend on the absolute data spacing.
fn fit_with_basis(hood: &Neighborhood, basis: &PolynomialBasis, dim: usize) -> Result<(Vec<f64>, f64)> {
    let k = hood.values.len();
    let q = basis.len();
    let mut data = Vec::with_capacity(k * q);
    for off in hood.offsets.chunks_exact(dim) {
        basis.extend_row(off, hood.scale, &mut data);
    }
    let a = DenseMatrix::new(k, q, data)?;
    let mut coeffs = solve_weighted_normal_equations(&a, &hood.weights, &hood.values)?;
    let fitted = a.mul_vec(&coeffs);
    let objective = hood
        .weights
        .iter()
        .zip(&hood.values)
        .zip(&fitted)
        .map(|((w, y), f)| w * (y - f) * (y - f))
        .sum();
    basis.unscale(&mut coeffs, hood.scale);
    Ok((coeffs, objective))
}

/// Weighted mean of the neighbor values.
pub fn fit_constant_closed_form(neighbors: &NeighborSet, dataset: &Dataset, kernel: KernelProfile) -> Result<LocalFit> {
    let hood = gather(neighbors, dataset, kernel)?;
    let a0 = weighted_mean(&hood.weights, &hood.values)?;
    let objective = hood
        .weights
        .iter()
        .zip(&hood.values)
        .map(|(w, y)| w * (y - a0) * (y - a0))
        .sum();
    Ok(LocalFit {
        center: neighbors.query().to_vec(),
        basis: basis_monomials(dataset.dim(), 0, None)?,
        coefficients: vec![a0],
        objective,
        degree: 0,
    })
}

/// `Σ wᵢ yᵢ / Σ wᵢ`.
pub fn weighted_mean(weights: &[f64], values: &[f64]) -> Result<f64> {
    let (sw, swy) = weights
        .iter()
        .zip(values)
        .fold((0.0, 0.0), |(sw, swy), (w, y)| (sw + w, swy + w * y));
    if !(sw > 0.0) {
        return Err(Error::DegenerateNeighborhood);
    }
    Ok(swy / sw)
}

/// Explicit 2×2 inverse for the one-dimensional local line, in shifted
/// coordinates `u = x - ξ`.
pub fn fit_linear_closed_form(neighbors: &NeighborSet, dataset: &Dataset, kernel: KernelProfile) -> Result<LocalFit> {
    if dataset.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: dataset.dim(),
        });
    }
    let hood = gather(neighbors, dataset, kernel)?;
    let (a0, a1) = weighted_line(&hood.weights, &hood.offsets, &hood.values)?;
    let objective = hood
        .weights
        .iter()
        .zip(&hood.offsets)
        .zip(&hood.values)
        .map(|((w, u), y)| {
            let r = y - a0 - a1 * u;
            w * r * r
        })
        .sum();
    Ok(LocalFit {
        center: neighbors.query().to_vec(),
        basis: basis_monomials(1, 1, None)?,
        coefficients: vec![a0, a1],
        objective,
        degree: 1,
    })
}

/// Closed-form weighted line `y ≈ a0 + a1·u`.
pub fn weighted_line(weights: &[f64], u: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let (mut sw, mut swu, mut swuu, mut swy, mut swuy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((&w, &u), &y) in weights.iter().zip(u).zip(y) {
        sw += w;
        swu += w * u;
        swuu += w * u * u;
        swy += w * y;
        swuy += w * u * y;
    }
    let det = sw * swuu - swu * swu;
    if !(det > RANK_TOLERANCE * sw * swuu) {
        return Err(Error::RankDeficient { rank: 1, size: 2 });
    }
    let a0 = (swy * swuu - swu * swuy) / det;
    let a1 = (sw * swuy - swy * swu) / det;
    Ok((a0, a1))
}

/// Smooths a dataset at a batch of query positions.
///
/// Reuses one spatial index across queries. One-dimensional constant and
/// linear fits without a mask take the closed-form paths.
#[derive(Debug, Clone)]
pub struct LowessSmoother<'a> {
    dataset: &'a Dataset,
    index: SpatialIndex,
    config: LowessConfig,
}

impl<'a> LowessSmoother<'a> {
    pub fn new(dataset: &'a Dataset, config: LowessConfig) -> Result<Self> {
        config.validate(dataset.dim())?;
        if config.neighbors > dataset.len() {
            return Err(Error::InsufficientPoints {
                requested: config.neighbors,
                available: dataset.len(),
            });
        }
        Ok(Self {
            dataset,
            index: SpatialIndex::build(dataset),
            config,
        })
    }

    pub fn fit_at(&self, query: &[f64]) -> Result<LocalFit> {
        let neighbors = self.index.k_nearest(query, self.config.neighbors)?;
        let closed_form = self.dataset.dim() == 1 && self.config.mask.is_none();
        match (closed_form, self.config.degree) {
            (true, 0) => fit_constant_closed_form(&neighbors, self.dataset, self.config.kernel),
            (true, 1) => match fit_linear_closed_form(&neighbors, self.dataset, self.config.kernel) {
                Err(Error::RankDeficient { .. }) if self.config.degree_fallback => {
                    fit_constant_closed_form(&neighbors, self.dataset, self.config.kernel)
                }
                other => other,
            },
            _ => fit_local(&neighbors, self.dataset, &self.config),
        }
    }

    pub fn value_at(&self, query: &[f64]) -> Result<f64> {
        self.fit_at(query).map(|f| f.value())
    }
}

/// Smoothed values at every query position.
pub fn smooth<Q: AsRef<[f64]>>(dataset: &Dataset, queries: &[Q], config: &LowessConfig) -> Result<Vec<f64>> {
    if queries.is_empty() {
        return Err(Error::Empty);
    }
    let smoother = LowessSmoother::new(dataset, config.clone())?;
    queries
        .iter()
        .enumerate()
        .map(|(index, q)| {
            smoother.value_at(q.as_ref()).map_err(|e| Error::Query {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Smoothed values at the dataset's own sample positions.
pub fn smooth_at_samples(dataset: &Dataset, config: &LowessConfig) -> Result<Vec<f64>> {
    let queries: Vec<&[f64]> = dataset.positions().collect();
    smooth(dataset, &queries, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_data() -> Dataset {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        Dataset::from_1d(&xs, &ys).unwrap()
    }

    #[test]
    fn reproduces_line_general_path() {
        let ds = line_data();
        let index = SpatialIndex::build(&ds);
        let cfg = LowessConfig::new(1, 5);
        for xi in [0.0, 0.33, 0.95, 1.9] {
            let nb = index.k_nearest(&[xi], 5).unwrap();
            let fit = fit_local(&nb, &ds, &cfg).unwrap();
            assert!((fit.value() - (2.0 * xi + 1.0)).abs() < 1e-9);
            assert!(fit.objective <= 1e-18);
            assert!((fit.coefficients[1] - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn two_neighbors_at_sample_positions() {
        let ds = line_data();
        let out = smooth_at_samples(&ds, &LowessConfig::new(1, 2)).unwrap();
        for (o, y) in out.iter().zip(ds.values()) {
            assert!((o - y).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_data() {
        let ds = Dataset::from_1d(&[0.0, 0.5, 1.3, 2.0, 2.2], &[4.5; 5]).unwrap();
        let out = smooth(&ds, &[[0.1], [1.0], [2.1]], &LowessConfig::new(0, 4)).unwrap();
        assert!(out.iter().all(|v| (v - 4.5).abs() < 1e-15));
    }

    #[test]
    fn weighted_mean_examples() {
        assert_eq!(weighted_mean(&[1.0, 1.0, 1.0], &[1.0, 2.0, 6.0]).unwrap(), 3.0);
        assert_eq!(weighted_mean(&[1.0, 0.0], &[4.0, 99.0]).unwrap(), 4.0);
        assert!((weighted_mean(&[0.8, 0.2], &[1.0, 2.0]).unwrap() - 1.2).abs() < 1e-15);
        assert!(matches!(
            weighted_mean(&[0.0, 0.0], &[1.0, 2.0]),
            Err(Error::DegenerateNeighborhood)
        ));
    }

    #[test]
    fn symmetric_line_decouples() {
        let u = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let y = [3.0, 1.0, 4.0, 1.0, 5.0];
        let (a0, a1) = weighted_line(&[1.0; 5], &u, &y).unwrap();
        assert!((a0 - 14.0 / 5.0).abs() < 1e-14);
        let slope = u.iter().zip(&y).map(|(u, y)| u * y).sum::<f64>() / 10.0;
        assert!((a1 - slope).abs() < 1e-14);
    }

    #[test]
    fn line_closed_form_rejects_single_abscissa() {
        assert!(matches!(
            weighted_line(&[1.0, 0.5], &[0.3, 0.3], &[1.0, 2.0]),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn fallback_on_clustered_neighborhood() {
        // Three duplicated abscissae plus a far point: the line is
        // undetermined once the far point gets zero weight.
        let ds = Dataset::from_1d(&[1.0, 1.0, 1.0, 3.0], &[1.0, 2.0, 3.0, 10.0]).unwrap();
        let index = SpatialIndex::build(&ds);
        let nb = index.k_nearest(&[1.0], 4).unwrap();
        let fit = fit_local(&nb, &ds, &LowessConfig::new(2, 4)).unwrap();
        assert_eq!(fit.degree, 0);
        assert!((fit.value() - 2.0).abs() < 1e-14);

        let strict = LowessConfig::new(1, 4).without_fallback();
        assert!(matches!(fit_local(&nb, &ds, &strict), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn degenerate_when_only_far_neighbor() {
        let ds = Dataset::from_1d(&[0.0, 5.0], &[1.0, 2.0]).unwrap();
        let index = SpatialIndex::build(&ds);
        let nb = index.k_nearest(&[2.0], 1).unwrap();
        assert!(matches!(
            fit_local(&nb, &ds, &LowessConfig::new(0, 1)),
            Err(Error::DegenerateNeighborhood)
        ));
    }

    #[test]
    fn query_errors_carry_index() {
        let ds = Dataset::from_1d(&[0.0, 5.0], &[1.0, 2.0]).unwrap();
        let err = smooth(&ds, &[[0.0], [2.0]], &LowessConfig::new(0, 1)).unwrap_err();
        assert!(matches!(err, Error::Query { index: 1, .. }));
        assert!(matches!(err.root(), Error::DegenerateNeighborhood));
    }

    #[test]
    fn config_checks() {
        let ds = line_data();
        assert!(LowessSmoother::new(&ds, LowessConfig::new(2, 2)).is_err());
        assert!(LowessSmoother::new(&ds, LowessConfig::new(1, 21)).is_err());
        assert!(smooth::<[f64; 1]>(&ds, &[], &LowessConfig::new(1, 3)).is_err());
    }

    #[test]
    fn masked_plane_in_2d() {
        // z = 1 + 2x - y, fitted with the xy term removed from a quadratic.
        let mut pos = Vec::new();
        let mut vals = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                let (x, y) = (i as f64 * 0.2, j as f64 * 0.2);
                pos.extend_from_slice(&[x, y]);
                vals.push(1.0 + 2.0 * x - y);
            }
        }
        let ds = Dataset::new(2, pos, vals).unwrap();
        let cfg = LowessConfig::new(2, 20).with_mask(vec![vec![1, 1]]);
        let out = smooth(&ds, &[[0.5, 0.5], [0.1, 0.9]], &cfg).unwrap();
        assert!((out[0] - 1.5).abs() < 1e-9);
        assert!((out[1] - 0.3).abs() < 1e-9);
    }
}
