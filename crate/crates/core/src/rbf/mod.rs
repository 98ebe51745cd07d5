//! Radial basis function approximation.
//!
//! Two families live here:
//!
//! * the *local* (simplified) variant, which fits a single basis function
//!   centered at the query point plus an optional shifted polynomial tail to
//!   the K nearest samples, exactly like LOWESS but without weights;
//! * the *global* variant, which fits M fixed centers and a polynomial tail to
//!   the whole dataset at once and yields one continuous formula.
//!
//! Both use the tricube profile as the compactly supported basis function.

mod global;
mod local;

pub use global::{center_spacing, fit_global, fit_global_with, place_centers, GlobalRbfModel, DEFAULT_OVERLAP};
pub use local::{
    fit_local_rbf, fit_local_rbf_constant_closed_form, fit_local_rbf_no_polynomial_closed_form,
    rbf_constant_coefficients, rbf_projection, smooth_local_rbf, LocalRbfConfig, LocalRbfFit, LocalRbfSmoother,
    RbfTail,
};
