//! Large-sample reference values for the memorizing ratio.
//!
//! For iid empirical and generated samples with a bounded, piecewise continuous
//! density, the number of generated points in the shrunken nearest-neighbor
//! ball of an empirical point is asymptotically geometric:
//! `Q(s) = rho^(ds) / (rho^d + 1)^(s+1)`, whatever the density. The limit of
//! the memorizing ratio is `1 - Q(0)`. [`q_quadrature`] integrates the original
//! density-dependent integral and exists to check the closed form.

pub mod quadrature;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::check_rho;
use crate::sampling::Density;

/// Absolute tolerance used by [`q_quadrature`].
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Integrand evaluation budget for one [`q_quadrature`] call.
pub const QUADRATURE_MAX_EVALS: usize = 10_000_000;

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    Ok(())
}

/// Mean-square limit `rho^d / (rho^d + 1)` of the memorizing ratio.
pub fn mr_limit(rho: f64, d: usize) -> Result<f64> {
    Ok(1.0 - q_closed_form(0, rho, d)?)
}

/// Limiting probability that exactly `s` generated points fall in the ball.
pub fn q_closed_form(s: u32, rho: f64, d: usize) -> Result<f64> {
    check_rho(rho)?;
    check_dim(d)?;
    let rd = rho.powi(d as i32);
    Ok(rd.powi(s as i32) / (rd + 1.0).powi(s as i32 + 1))
}

/// `rho^-d f^(2+s) / (f + rho^-d f)^(s+1)`, evaluated in log space so large
/// `s` does not underflow in the tails.
fn weiss_integrand(f: f64, s: u32, inv_rho_d: f64) -> f64 {
    if f <= 0.0 {
        return 0.0;
    }
    let denom = f + inv_rho_d * f;
    (inv_rho_d.ln() + (2.0 + s as f64) * f.ln() - (s as f64 + 1.0) * denom.ln()).exp()
}

/// Compactifying map `x = t / (1 - t^2)` from `(-1, 1)` onto the real line.
#[inline]
fn to_real(t: f64) -> f64 {
    t / (1.0 - t * t)
}

#[inline]
fn jacobian(t: f64) -> f64 {
    let u = 1.0 - t * t;
    (1.0 + t * t) / (u * u)
}

/// Inverse of [`to_real`], used to carry density breakpoints into `t`.
fn to_unit(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (-1.0 + (1.0 + 4.0 * x * x).sqrt()) / (2.0 * x)
    }
}

/// Numerically integrates Weiss' integral for `Q(s)` over `R^d`, `d ∈ {1, 2}`.
pub fn q_quadrature(s: u32, rho: f64, d: usize, density: Density) -> Result<f64> {
    check_rho(rho)?;
    check_dim(d)?;
    let inv_rho_d = rho.powi(-(d as i32));
    let breaks: Vec<f64> = density.breakpoints().iter().map(|&x| to_unit(x)).collect();
    match d {
        1 => {
            let g = |t: f64| weiss_integrand(density.pdf(&[to_real(t)]), s, inv_rho_d) * jacobian(t);
            quadrature::integrate(g, -1.0, 1.0, &breaks, QUADRATURE_TOL, QUADRATURE_MAX_EVALS)
                .map(|r| r.value)
        }
        2 => {
            let mut used = 0usize;
            let mut failure = None;
            // inner errors accumulate over an outer interval of length 2
            let inner_tol = QUADRATURE_TOL / 10.0;
            let outer = |t1: f64| {
                if failure.is_some() {
                    return 0.0;
                }
                let x1 = to_real(t1);
                let j1 = jacobian(t1);
                let inner = |t2: f64| {
                    weiss_integrand(density.pdf(&[x1, to_real(t2)]), s, inv_rho_d) * jacobian(t2)
                };
                let budget = QUADRATURE_MAX_EVALS.saturating_sub(used);
                match quadrature::integrate(inner, -1.0, 1.0, &breaks, inner_tol, budget) {
                    Ok(r) => {
                        used += r.evaluations;
                        r.value * j1
                    }
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                }
            };
            let r = quadrature::integrate(
                outer,
                -1.0,
                1.0,
                &breaks,
                QUADRATURE_TOL / 2.0,
                QUADRATURE_MAX_EVALS,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            r.map(|r| r.value)
        }
        _ => Err(Error::InvalidParameter(format!(
            "quadrature oracle supports d = 1 or 2, got {d}"
        ))),
    }
}

/// One cell of the closed-form versus quadrature comparison grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QCheckRow {
    pub s: u32,
    pub rho: f64,
    pub d: usize,
    pub density: Density,
    pub closed_form: f64,
    pub quadrature: f64,
    pub abs_diff: f64,
}

/// Values of `s`, `rho` and `d` covered by [`q_check_grid`].
pub const Q_CHECK_S: std::ops::RangeInclusive<u32> = 0..=5;
pub const Q_CHECK_RHO: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const Q_CHECK_D: [usize; 2] = [1, 2];

/// Evaluates both routes over every `(s, rho, d, density)` combination.
pub fn q_check_grid() -> Result<Vec<QCheckRow>> {
    use rayon::prelude::*;
    let mut cells = Vec::new();
    for density in Density::ALL {
        for d in Q_CHECK_D {
            for rho in Q_CHECK_RHO {
                for s in Q_CHECK_S {
                    cells.push((s, rho, d, density));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(s, rho, d, density)| {
            let closed_form = q_closed_form(s, rho, d)?;
            let quadrature = q_quadrature(s, rho, d, density)?;
            Ok(QCheckRow {
                s,
                rho,
                d,
                density,
                closed_form,
                quadrature,
                abs_diff: (closed_form - quadrature).abs(),
            })
        })
        .collect()
}
