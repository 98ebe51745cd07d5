//! Smoothing of noisy scattered data with local polynomial regression
//! (LOWESS) and radial basis functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: datasets, exact K-nearest-neighbor search
//! * [`kernels`]: the tricube weight profile
//! * [`linsolve`]: weighted least squares via the normal equations
//! * [`lowess`]: local polynomial fits at arbitrary query points
//! * [`rbf`]: local (single-center) and global radial basis fits
//! * [`metrics`]: curvature and distance errors of a smoothed curve
//! * [`harness`]: synthetic data, experiment runs, timing and result files
//!
//! ```
//! use scatter_smooth::{lowess, Dataset, LowessConfig};
//!
//! let xs: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
//! let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
//! let data = Dataset::from_1d(&xs, &ys)?;
//!
//! let smoothed = lowess::smooth(&data, &[[0.25], [0.5]], &LowessConfig::new(1, 10))?;
//! assert!((smoothed[0] - (-0.25)).abs() < 1e-12);
//! assert!((smoothed[1] - 0.5).abs() < 1e-12);
//! # Ok::<(), scatter_smooth::Error>(())
//! ```

// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod harness;
pub mod kernels;
pub mod linsolve;
pub mod lowess;
pub mod metrics;
pub mod rbf;

pub use error::{Error, Result};
pub use geometry::{Dataset, NeighborSet, SamplePoint, SpatialIndex};
pub use kernels::KernelProfile;
pub use lowess::{LowessConfig, LowessSmoother};
pub use rbf::{GlobalRbfModel, LocalRbfConfig, LocalRbfSmoother, RbfTail};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/neighbors.md")]
    mod neighbors {}
    #[doc = include_str!("../../../book/src/lowess.md")]
    mod lowess {}
    #[doc = include_str!("../../../book/src/rbf.md")]
    mod rbf {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
