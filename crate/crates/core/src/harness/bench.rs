use std::time::Instant;

use super::{query_points, run_method, ExperimentConfig};
use crate::error::{Error, Result};

/// Median wall-clock time of one method over several repeats.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub method: String,
    pub n: usize,
    /// K for local methods, M for the global one.
    pub param: usize,
    /// Number of query points.
    pub r: usize,
    pub median_ms: f64,
}

/// Times every configured method `repeats` times (index construction and
/// fitting included) and reports the median.
pub fn timing_benchmark(config: &ExperimentConfig, repeats: usize) -> Result<Vec<TimingRow>> {
    if repeats < 3 {
        return Err(Error::Config(format!("need at least 3 repeats, got {repeats}")));
    }
    let (noisy, _) = config.datasets()?;
    config.validate(noisy.len())?;
    let queries = query_points(&noisy, config.queries)?;

    config
        .methods
        .iter()
        .map(|method| {
            let mut samples = Vec::with_capacity(repeats);
            for _ in 0..repeats {
                let start = Instant::now();
                let values = run_method(method, &noisy, &queries)?;
                samples.push(start.elapsed().as_secs_f64() * 1e3);
                std::hint::black_box(values);
            }
            samples.sort_by(f64::total_cmp);
            Ok(TimingRow {
                method: method.to_string(),
                n: noisy.len(),
                param: method.param(),
                r: queries.len(),
                median_ms: median(&samples),
            })
        })
        .collect()
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Least-squares slope of `ln(time)` against `ln(size)`.
pub fn scaling_exponent(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Config("need at least two (size, time) samples".into()));
    }
    if samples.iter().any(|&(s, t)| !(s > 0.0 && t > 0.0)) {
        return Err(Error::Config("sizes and times must be positive".into()));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(s, t)| (s.ln(), t.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Config("sizes must not all be equal".into()));
    }
    Ok(sxy / sxx)
}
