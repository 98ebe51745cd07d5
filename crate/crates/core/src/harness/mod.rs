//! Experiment harness: synthetic data, method runs, error metrics, timing and
//! result files.
//!
//! [`run_experiment`] samples the test function, perturbs it with seeded
//! uniform noise, runs every configured method at the query points, and
//! scores each smoothed curve with the curvature error and with the distance
//! error against the noise-free samples.

mod bench;
mod io;
mod method;
mod testfn;

use std::time::{Duration, Instant};

pub use bench::{scaling_exponent, timing_benchmark, TimingRow};
pub use io::{
    read_curves_csv, read_dataset_csv, write_comparison_table, write_curves_csv, write_dataset_csv, write_svg_plot,
    write_table_csv, CurveRecord,
};
pub use method::{MethodSpec, QueryMode};
pub use testfn::{add_uniform_noise, sample_test_function, test_function, uniform_abscissae, UniformNoise};

use crate::error::{Error, Result};
use crate::geometry::Dataset;
use crate::lowess::{smooth, LowessConfig};
use crate::metrics::{curvature_error, distance_error, CurvePoints, ErrorReport};
use crate::rbf::{fit_global, place_centers, smooth_local_rbf, LocalRbfConfig};

/// Input data for an experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// Samples of the test function on `interval` with uniform noise.
    Synthetic {
        n: usize,
        interval: (f64, f64),
        amplitude: f64,
        seed: u64,
    },
    /// User data; the distance error uses `reference` when given, otherwise
    /// the data itself.
    Provided { data: Dataset, reference: Option<Dataset> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: DataSource,
    pub methods: Vec<MethodSpec>,
    pub queries: QueryMode,
}

impl ExperimentConfig {
    /// The standard setup: `n` samples on `[-1, 1]` with noise amplitude 0.1.
    pub fn standard(n: usize, seed: u64, methods: Vec<MethodSpec>) -> Self {
        Self::synthetic(n, (-1.0, 1.0), 0.1, seed, methods)
    }

    pub fn synthetic(n: usize, interval: (f64, f64), amplitude: f64, seed: u64, methods: Vec<MethodSpec>) -> Self {
        Self {
            source: DataSource::Synthetic {
                n,
                interval,
                amplitude,
                seed,
            },
            methods,
            queries: QueryMode::AtSamples,
        }
    }

    pub fn with_queries(mut self, queries: QueryMode) -> Self {
        self.queries = queries;
        self
    }

    /// Builds the (noisy input, noise-free reference) pair.
    pub fn datasets(&self) -> Result<(Dataset, Dataset)> {
        match &self.source {
            DataSource::Synthetic {
                n,
                interval,
                amplitude,
                seed,
            } => {
                if *n < 3 {
                    return Err(Error::Config(format!("need at least 3 samples, got {n}")));
                }
                let clean = sample_test_function(*n, interval.0, interval.1)?;
                let noisy = add_uniform_noise(&clean, *amplitude, *seed)?;
                Ok((noisy, clean))
            }
            DataSource::Provided { data, reference } => {
                let reference = reference.clone().unwrap_or_else(|| data.clone());
                if reference.dim() != data.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: data.dim(),
                        found: reference.dim(),
                    });
                }
                Ok((data.clone(), reference))
            }
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        for m in &self.methods {
            if m.is_local() && m.param() > n {
                return Err(Error::Config(format!("{m}: K = {} exceeds N = {n}", m.param())));
            }
        }
        Ok(())
    }
}

/// Query positions for a dataset.
pub fn query_points(dataset: &Dataset, mode: QueryMode) -> Result<Vec<Vec<f64>>> {
    match mode {
        QueryMode::AtSamples => Ok(dataset.positions().map(<[f64]>::to_vec).collect()),
        QueryMode::UniformGrid(r) => place_centers(dataset, r),
    }
}

/// Runs one method and returns its values at the queries.
pub fn run_method(method: &MethodSpec, dataset: &Dataset, queries: &[Vec<f64>]) -> Result<Vec<f64>> {
    match *method {
        MethodSpec::Lowess { degree, k } => smooth(dataset, queries, &LowessConfig::new(degree, k)),
        MethodSpec::RbfLocal { tail, k } => smooth_local_rbf(dataset, queries, &LocalRbfConfig::new(tail, k)),
        MethodSpec::RbfGlobal { m, degree, overlap } => {
            let model = fit_global(dataset, m, degree, overlap)?;
            Ok(model.evaluate_many(queries))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub values: Vec<f64>,
    pub errors: ErrorReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    pub method: MethodSpec,
    /// Failure message when the method could not be run.
    pub result: std::result::Result<MethodResult, String>,
    pub elapsed: Duration,
}

impl MethodOutcome {
    pub fn errors(&self) -> Option<&ErrorReport> {
        self.result.as_ref().ok().map(|r| &r.errors)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub noisy: Dataset,
    pub reference: Dataset,
    pub queries: Vec<Vec<f64>>,
    pub outcomes: Vec<MethodOutcome>,
}

impl ExperimentReport {
    /// Copy with all timings zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for o in &mut out.outcomes {
            o.elapsed = Duration::ZERO;
        }
        out
    }

    pub fn error_reports(&self) -> Vec<&ErrorReport> {
        self.outcomes.iter().filter_map(MethodOutcome::errors).collect()
    }

    pub fn all_failed(&self) -> bool {
        !self.outcomes.is_empty() && self.outcomes.iter().all(|o| o.result.is_err())
    }

    pub fn outcome(&self, method: &MethodSpec) -> Option<&MethodOutcome> {
        self.outcomes.iter().find(|o| &o.method == method)
    }
}

/// Curvature error of a 1D curve after sorting by abscissa; `None` for
/// higher dimensions or repeated abscissae.
pub fn curve_curvature(queries: &[Vec<f64>], values: &[f64]) -> Option<f64> {
    if queries.first().is_none_or(|q| q.len() != 1) || queries.len() < 3 {
        return None;
    }
    let mut pairs: Vec<(f64, f64)> = queries.iter().map(|q| q[0]).zip(values.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    CurvePoints::from_1d(&xs, &ys).and_then(|c| curvature_error(&c)).ok()
}

fn score(method: &MethodSpec, queries: &[Vec<f64>], values: &[f64], reference: &CurvePoints) -> Result<ErrorReport> {
    let dim = reference.dim();
    let flat: Vec<f64> = queries.iter().flatten().copied().collect();
    let approx = CurvePoints::new(dim, flat, values.to_vec())?;
    Ok(ErrorReport {
        method: method.to_string(),
        param: method.param(),
        curvature: curve_curvature(queries, values),
        distance: distance_error(&approx, reference)?,
    })
}

/// Runs every configured method; a failing method is recorded and the rest
/// still run.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (noisy, reference) = config.datasets()?;
    config.validate(noisy.len())?;
    let queries = query_points(&noisy, config.queries)?;
    let reference_curve = CurvePoints::new(
        reference.dim(),
        reference.raw_positions().to_vec(),
        reference.values().to_vec(),
    )?;

    let outcomes = config
        .methods
        .iter()
        .map(|method| {
            let start = Instant::now();
            let values = run_method(method, &noisy, &queries);
            let elapsed = start.elapsed();
            let result = values
                .and_then(|values| {
                    let errors = score(method, &queries, &values, &reference_curve)?;
                    Ok(MethodResult { values, errors })
                })
                .map_err(|e| e.to_string());
            MethodOutcome {
                method: *method,
                result,
                elapsed,
            }
        })
        .collect();

    Ok(ExperimentReport {
        config: config.clone(),
        noisy,
        reference,
        queries,
        outcomes,
    })
}
