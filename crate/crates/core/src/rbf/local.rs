use crate::error::{Error, Result};
use crate::geometry::{Dataset, NeighborSet, SpatialIndex};
use crate::kernels::{neighbor_weights, KernelProfile};
use crate::linsolve::{solve_least_squares, DenseMatrix, RANK_TOLERANCE};
use crate::lowess::{basis_monomials, PolynomialBasis};

/// Polynomial tail attached to the single local basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbfTail {
    None,
    Constant,
    Degree(u32),
}

impl RbfTail {
    fn degree(self) -> Option<u32> {
        match self {
            RbfTail::None => None,
            RbfTail::Constant => Some(0),
            RbfTail::Degree(d) => Some(d),
        }
    }

    /// Next simpler tail: `Degree(d) → … → Constant → None`.
    fn lower(self) -> Option<RbfTail> {
        match self {
            RbfTail::Degree(d) if d > 1 => Some(RbfTail::Degree(d - 1)),
            RbfTail::Degree(_) => Some(RbfTail::Constant),
            RbfTail::Constant => Some(RbfTail::None),
            RbfTail::None => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalRbfConfig {
    pub polynomial: RbfTail,
    pub neighbors: usize,
    pub kernel: KernelProfile,
    pub degree_fallback: bool,
}

impl LocalRbfConfig {
    pub fn new(polynomial: RbfTail, neighbors: usize) -> Self {
        Self {
            polynomial,
            neighbors,
            kernel: KernelProfile::Tricube,
            degree_fallback: true,
        }
    }

    pub fn without_fallback(mut self) -> Self {
        self.degree_fallback = false;
        self
    }

    /// Number of unknowns: λ₁ plus the tail terms.
    pub fn unknowns(&self, dim: usize) -> usize {
        1 + self
            .polynomial
            .degree()
            .map_or(0, |d| basis_monomials(dim, d, None).map_or(0, |b| b.len()))
    }
}

/// One basis function centered at ξ plus a shifted polynomial tail:
/// `f(x) = λ₁ Φ(‖x − ξ‖ / d_max) + P(x − ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalRbfFit {
    pub center: Vec<f64>,
    pub lambda: f64,
    pub tail: RbfTail,
    /// Tail coefficients in the shifted basis; empty when there is no tail.
    pub coefficients: Vec<f64>,
    pub basis: Option<PolynomialBasis>,
    pub kernel: KernelProfile,
    /// Radius used to normalize distances (the K-th neighbor distance).
    pub support: f64,
    /// `‖Aη − f‖₂` at the solution.
    pub residual_norm: f64,
}

impl LocalRbfFit {
    /// Approximation at the center: `λ₁ Φ(0) + a₀`.
    pub fn value(&self) -> f64 {
        self.lambda * self.kernel.at_origin() + self.coefficients.first().copied().unwrap_or(0.0)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let offset: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let r = offset.iter().map(|v| v * v).sum::<f64>().sqrt();
        let phi = if self.support > 0.0 {
            self.kernel.eval(r / self.support)
        } else if r == 0.0 {
            self.kernel.at_origin()
        } else {
            0.0
        };
        let tail = self
            .basis
            .as_ref()
            .map_or(0.0, |b| b.evaluate(&self.coefficients, &offset));
        self.lambda * phi + tail
    }
}

struct Hood {
    phi: Vec<f64>,
    offsets: Vec<f64>,
    values: Vec<f64>,
    support: f64,
}

fn gather(neighbors: &NeighborSet, dataset: &Dataset, kernel: KernelProfile) -> Result<Hood> {
    let dim = dataset.dim();
    if neighbors.query().len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: neighbors.query().len(),
        });
    }
    let support = neighbors.d_max();
    let phi = neighbor_weights(kernel, neighbors.distances(), support);
    let mut offsets = Vec::with_capacity(neighbors.len() * dim);
    let mut values = Vec::with_capacity(neighbors.len());
    for &i in neighbors.indices() {
        offsets.extend(dataset.position(i).iter().zip(neighbors.query()).map(|(x, q)| x - q));
        values.push(dataset.value(i));
    }
    Ok(Hood {
        phi,
        offsets,
        values,
        support,
    })
}

/// Unweighted least-squares fit of `[Φ(rᵢ) | shifted monomials]` over the
/// neighborhood.
pub fn fit_local_rbf(neighbors: &NeighborSet, dataset: &Dataset, config: &LocalRbfConfig) -> Result<LocalRbfFit> {
    let dim = dataset.dim();
    let hood = gather(neighbors, dataset, config.kernel)?;
    if hood.phi.iter().all(|&p| p == 0.0) && config.polynomial == RbfTail::None {
        return Err(Error::DegenerateNeighborhood);
    }
    let scale = if hood.support > 0.0 { hood.support } else { 1.0 };

    let mut tail = config.polynomial;
    loop {
        let basis = tail.degree().map(|d| basis_monomials(dim, d, None)).transpose()?;
        match solve_rbf(&hood, basis.as_ref(), dim, scale) {
            Ok((mut eta, residual_norm)) => {
                let lambda = eta.remove(0);
                if let Some(b) = &basis {
                    b.unscale(&mut eta, scale);
                }
                return Ok(LocalRbfFit {
                    center: neighbors.query().to_vec(),
                    lambda,
                    tail,
                    coefficients: eta,
                    basis,
                    kernel: config.kernel,
                    support: hood.support,
                    residual_norm,
                });
            }
            Err(Error::RankDeficient { .. }) if config.degree_fallback && tail.lower().is_some() => {
                tail = tail.lower().expect("checked above");
            }
            Err(Error::RankDeficient { .. }) if tail == RbfTail::None => return Err(Error::DegenerateNeighborhood),
            Err(e) => return Err(e),
        }
    }
}

fn solve_rbf(hood: &Hood, basis: Option<&PolynomialBasis>, dim: usize, scale: f64) -> Result<(Vec<f64>, f64)> {
    let k = hood.values.len();
    let cols = 1 + basis.map_or(0, |b| b.len());
    let mut data = Vec::with_capacity(k * cols);
    for (phi, off) in hood.phi.iter().zip(hood.offsets.chunks_exact(dim)) {
        data.push(*phi);
        if let Some(b) = basis {
            b.extend_row(off, scale, &mut data);
        }
    }
    let a = DenseMatrix::new(k, cols, data)?;
    let eta = solve_least_squares(&a, &hood.values)?;
    let residual_norm = a
        .mul_vec(&eta)
        .iter()
        .zip(&hood.values)
        .map(|(f, y)| (y - f) * (y - f))
        .sum::<f64>()
        .sqrt();
    Ok((eta, residual_norm))
}

/// Closed-form `(λ₁, a₀)` for the constant tail via the explicit 2×2 inverse.
pub fn fit_local_rbf_constant_closed_form(
    neighbors: &NeighborSet,
    dataset: &Dataset,
    kernel: KernelProfile,
) -> Result<LocalRbfFit> {
    let hood = gather(neighbors, dataset, kernel)?;
    let (lambda, a0) = rbf_constant_coefficients(&hood.phi, &hood.values)?;
    let residual_norm = hood
        .phi
        .iter()
        .zip(&hood.values)
        .map(|(p, y)| (y - lambda * p - a0).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(LocalRbfFit {
        center: neighbors.query().to_vec(),
        lambda,
        tail: RbfTail::Constant,
        coefficients: vec![a0],
        basis: Some(basis_monomials(dataset.dim(), 0, None)?),
        kernel,
        support: hood.support,
        residual_norm,
    })
}

/// Solves `[Σφ² Σφ; Σφ K] (λ, a₀)ᵀ = (Σφf, Σf)ᵀ` explicitly.
pub fn rbf_constant_coefficients(phi: &[f64], f: &[f64]) -> Result<(f64, f64)> {
    let k = phi.len() as f64;
    let (mut s1, mut s2, mut sf, mut spf) = (0.0, 0.0, 0.0, 0.0);
    for (&p, &y) in phi.iter().zip(f) {
        s1 += p;
        s2 += p * p;
        sf += y;
        spf += p * y;
    }
    let det = s2 * k - s1 * s1;
    if !(det > RANK_TOLERANCE * s2 * k) {
        return Err(Error::RankDeficient { rank: 1, size: 2 });
    }
    let lambda = (k * spf - s1 * sf) / det;
    let a0 = (s2 * sf - s1 * spf) / det;
    Ok((lambda, a0))
}

/// Closed-form `λ₁ = Σφᵢfᵢ / Σφᵢ²` without a polynomial tail.
pub fn fit_local_rbf_no_polynomial_closed_form(
    neighbors: &NeighborSet,
    dataset: &Dataset,
    kernel: KernelProfile,
) -> Result<LocalRbfFit> {
    let hood = gather(neighbors, dataset, kernel)?;
    let lambda = rbf_projection(&hood.phi, &hood.values)?;
    let residual_norm = hood
        .phi
        .iter()
        .zip(&hood.values)
        .map(|(p, y)| (y - lambda * p).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(LocalRbfFit {
        center: neighbors.query().to_vec(),
        lambda,
        tail: RbfTail::None,
        coefficients: Vec::new(),
        basis: None,
        kernel,
        support: hood.support,
        residual_norm,
    })
}

pub fn rbf_projection(phi: &[f64], f: &[f64]) -> Result<f64> {
    let (num, den) = phi
        .iter()
        .zip(f)
        .fold((0.0, 0.0), |(n, d), (p, y)| (n + p * y, d + p * p));
    if !(den > 0.0) {
        return Err(Error::DegenerateNeighborhood);
    }
    Ok(num / den)
}

/// Batch evaluator for the local RBF approximation.
#[derive(Debug, Clone)]
pub struct LocalRbfSmoother<'a> {
    dataset: &'a Dataset,
    index: SpatialIndex,
    config: LocalRbfConfig,
}

impl<'a> LocalRbfSmoother<'a> {
    pub fn new(dataset: &'a Dataset, config: LocalRbfConfig) -> Result<Self> {
        if config.neighbors < 1 {
            return Err(Error::InvalidK(config.neighbors));
        }
        if config.neighbors > dataset.len() {
            return Err(Error::InsufficientPoints {
                requested: config.neighbors,
                available: dataset.len(),
            });
        }
        let unknowns = config.unknowns(dataset.dim());
        if config.neighbors < unknowns {
            return Err(Error::Config(format!(
                "K = {} is smaller than the {unknowns} unknowns",
                config.neighbors
            )));
        }
        Ok(Self {
            dataset,
            index: SpatialIndex::build(dataset),
            config,
        })
    }

    pub fn fit_at(&self, query: &[f64]) -> Result<LocalRbfFit> {
        let neighbors = self.index.k_nearest(query, self.config.neighbors)?;
        let kernel = self.config.kernel;
        match self.config.polynomial {
            RbfTail::None => fit_local_rbf_no_polynomial_closed_form(&neighbors, self.dataset, kernel),
            RbfTail::Constant => match fit_local_rbf_constant_closed_form(&neighbors, self.dataset, kernel) {
                Err(Error::RankDeficient { .. }) if self.config.degree_fallback => {
                    fit_local_rbf_no_polynomial_closed_form(&neighbors, self.dataset, kernel)
                }
                other => other,
            },
            RbfTail::Degree(_) => fit_local_rbf(&neighbors, self.dataset, &self.config),
        }
    }

    pub fn value_at(&self, query: &[f64]) -> Result<f64> {
        self.fit_at(query).map(|f| f.value())
    }
}

/// Local RBF approximation at every query position.
pub fn smooth_local_rbf<Q: AsRef<[f64]>>(
    dataset: &Dataset,
    queries: &[Q],
    config: &LocalRbfConfig,
) -> Result<Vec<f64>> {
    if queries.is_empty() {
        return Err(Error::Empty);
    }
    let smoother = LocalRbfSmoother::new(dataset, config.clone())?;
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
