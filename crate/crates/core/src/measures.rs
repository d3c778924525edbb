//! Nearest neighbor coincidence (nnc) and memorizing ratio (mr).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nn::{self, SearchMethod};
use crate::point::{check_k, check_rho, MeasureParams, PointSet};
use crate::theory;

/// Which centering value is subtracted from `T1` and `T2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectationMode {
    /// `(m - 1) / (2m - 1)`, the exact null expectation at finite `m`.
    #[default]
    ExactExpectation,
    /// The large-sample limit `1/2`.
    AsymptoticHalf,
}

impl ExpectationMode {
    pub fn expected_t(self, m: usize) -> f64 {
        match self {
            ExpectationMode::ExactExpectation => (m as f64 - 1.0) / (2.0 * m as f64 - 1.0),
            ExpectationMode::AsymptoticHalf => 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NncResult {
    /// Share of empirical points' neighbors that are empirical.
    pub t1: f64,
    /// Share of generated points' neighbors that are generated.
    pub t2: f64,
    pub expected_t: f64,
    pub nnc: f64,
    pub mode: ExpectationMode,
    /// Queries whose neighbor list had an unresolved tie at the k-th distance.
    pub tie_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MrResult {
    pub mr: f64,
    pub memorized_flags: Vec<bool>,
    pub mr_limit: f64,
}

impl MrResult {
    pub fn memorized_count(&self) -> usize {
        self.memorized_flags.iter().filter(|&&f| f).count()
    }
}

/// Nearest neighbor coincidence of `(e, g)` with neighbor depth `k`.
pub fn nnc(e: &PointSet, g: &PointSet, k: usize, mode: ExpectationMode) -> Result<NncResult> {
    nnc_with(e, g, k, mode, SearchMethod::default())
}

pub fn nnc_with(
    e: &PointSet,
    g: &PointSet,
    k: usize,
    mode: ExpectationMode,
    method: SearchMethod,
) -> Result<NncResult> {
    e.check_same_size(g)?;
    e.check_same_dim(g)?;
    let m = e.len();
    check_k(k, 2 * m - 1)?;
    let table = nn::knn_pooled_with(e, g, k, method)?;
    let own = |range: std::ops::Range<usize>| -> usize {
        range.map(|q| table.same_source_count(q)).sum()
    };
    let denom = (m * k) as f64;
    let t1 = own(0..m) as f64 / denom;
    let t2 = own(m..2 * m) as f64 / denom;
    let expected_t = mode.expected_t(m);
    Ok(NncResult {
        t1,
        t2,
        expected_t,
        nnc: 0.5 * (t1 - expected_t).abs() + 0.5 * (t2 - expected_t).abs(),
        mode,
        tie_count: table.tie_count(),
    })
}

/// Fraction of empirical points that have a generated point strictly inside
/// the ball of radius `rho` times their within-set nearest-neighbor distance.
///
/// A point with an exact duplicate in `e` has radius 0 and is never flagged.
pub fn memorizing_ratio(e: &PointSet, g: &PointSet, rho: f64) -> Result<MrResult> {
    memorizing_ratio_with(e, g, rho, SearchMethod::default())
}

pub fn memorizing_ratio_with(
    e: &PointSet,
    g: &PointSet,
    rho: f64,
    method: SearchMethod,
) -> Result<MrResult> {
    e.check_same_size(g)?;
    e.check_same_dim(g)?;
    check_rho(rho)?;
    let radius = nn::within_set_nn_distance_with(e, method);
    let cross = nn::min_cross_distance_with(e, g, method)?;
    let memorized_flags: Vec<bool> = cross
        .par_iter()
        .zip(radius.par_iter())
        .map(|(&c, &r)| c < rho * r)
        .collect();
    let hits = memorized_flags.iter().filter(|&&f| f).count();
    Ok(MrResult {
        mr: hits as f64 / e.len() as f64,
        memorized_flags,
        mr_limit: theory::mr_limit(rho, e.dim())?,
    })
}

/// Memorizing ratios of `(e, g)` for several `rho` at the cost of one.
pub fn memorizing_ratios(e: &PointSet, g: &PointSet, rhos: &[f64]) -> Result<Vec<f64>> {
    e.check_same_size(g)?;
    e.check_same_dim(g)?;
    for &rho in rhos {
        check_rho(rho)?;
    }
    let radius = nn::within_set_nn_distance(e);
    let cross = nn::min_cross_distance(e, g)?;
    let m = e.len() as f64;
    Ok(rhos
        .iter()
        .map(|&rho| {
            let hits = cross.iter().zip(&radius).filter(|&(&c, &r)| c < rho * r).count();
            hits as f64 / m
        })
        .collect())
}

/// Both statistics for one `(E, G)` pair together with their reference values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub nnc: f64,
    pub mr: f64,
    pub t1: f64,
    pub t2: f64,
    pub expected_t: f64,
    pub mr_limit: f64,
    pub m: usize,
    pub d: usize,
    pub k: usize,
    pub rho: f64,
    pub mode: ExpectationMode,
    pub memorized_count: usize,
    pub tie_count: usize,
}

pub fn validate(
    e: &PointSet,
    g: &PointSet,
    params: MeasureParams,
    mode: ExpectationMode,
) -> Result<ValidationReport> {
    e.check_same_size(g)?;
    e.check_same_dim(g)?;
    params.validate_for(e.len())?;
    let n = nnc(e, g, params.k, mode)?;
    let r = memorizing_ratio(e, g, params.rho)?;
    Ok(ValidationReport {
        nnc: n.nnc,
        mr: r.mr,
        t1: n.t1,
        t2: n.t2,
        expected_t: n.expected_t,
        mr_limit: r.mr_limit,
        m: e.len(),
        d: e.dim(),
        k: params.k,
        rho: params.rho,
        mode,
        memorized_count: r.memorized_count(),
        tie_count: n.tie_count,
    })
}
