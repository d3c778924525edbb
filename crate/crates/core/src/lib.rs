//! Model-agnostic validation statistics for scenario generators.
//!
//! Two statistics compare an empirical sample `E` with a generated sample `G`
//! of the same size:
//!
//! * **nearest neighbor coincidence** ([`measures::nnc`]) measures how well the
//!   generator reproduces the dependence structure of `E`; it is near 0 when
//!   both samples share a distribution.
//! * **memorizing ratio** ([`measures::memorizing_ratio`]) is the share of
//!   empirical points with a generated point unusually close to them; for an
//!   honest generator it tends to `rho^d / (rho^d + 1)`, for a copying
//!   generator it approaches 1.
//!
//! The [`theory`] module provides the reference limits, [`sampling`] the seeded
//! random variates and [`experiments`] the Monte-Carlo studies and a toy
//! generator harness.

pub mod error;
pub mod experiments;
pub mod measures;
pub mod nn;
pub mod point;
pub mod sampling;
pub mod theory;

pub use error::{Error, Result};
pub use measures::{
    memorizing_ratio, nnc, validate, ExpectationMode, MrResult, NncResult, ValidationReport,
};
pub use nn::{knn_pooled, min_cross_distance, within_set_nn_distance, NeighborTable, SearchMethod};
pub use point::{Label, MeasureParams, PointSet};
pub use sampling::{Density, Role, SeedPath};
