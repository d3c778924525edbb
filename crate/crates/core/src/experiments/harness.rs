//! Trajectories of both statistics along a schedule of generators.

use rayon::prelude::*;
use serde::Serialize;

use super::generators::{generate, GeneratorKind, GeneratorSpec};
use super::summarize;
use crate::error::{Error, Result};
use crate::measures::{self, ExpectationMode};
use crate::point::{check_k, check_rho, PointSet};
use crate::sampling::SeedPath;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarnessConfig {
    pub k: usize,
    pub rho: f64,
    pub mode: ExpectationMode,
    /// Independent generator draws per step; standard errors need at least 2.
    pub repetitions: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            k: 3,
            rho: 0.5,
            mode: ExpectationMode::ExactExpectation,
            repetitions: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessPoint {
    pub step: usize,
    pub tag: String,
    pub sigma: Option<f64>,
    /// Mean over repetitions.
    pub nnc: f64,
    pub mr: f64,
    pub nnc_se: Option<f64>,
    pub mr_se: Option<f64>,
}

/// JitterResampler steps with sigma decaying geometrically from `start` to `end`.
pub fn sigma_schedule(start: f64, end: f64, steps: usize, m: usize, seed: SeedPath) -> Result<Vec<GeneratorSpec>> {
    if !(start > 0.0 && end > 0.0 && start.is_finite() && end.is_finite()) {
        return Err(Error::InvalidParameter("sigma bounds must be positive".into()));
    }
    if steps == 0 {
        return Ok(Vec::new());
    }
    let ratio = if steps == 1 { 1.0 } else { (end / start).powf(1.0 / (steps - 1) as f64) };
    Ok((0..steps)
        .map(|i| GeneratorSpec {
            kind: GeneratorKind::JitterResampler {
                sigma: start * ratio.powi(i as i32),
            },
            m,
            seed: seed.step(i as u64),
        })
        .collect())
}

/// Evaluates nnc and mr of every generator in `schedule` against `training`.
pub fn run_harness(
    training: &PointSet,
    schedule: &[GeneratorSpec],
    config: HarnessConfig,
) -> Result<Vec<HarnessPoint>> {
    if schedule.is_empty() {
        return Err(Error::InvalidParameter("empty schedule".into()));
    }
    if config.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
    }
    check_rho(config.rho)?;
    check_k(config.k, 2 * training.len() - 1)?;

    schedule
        .iter()
        .enumerate()
        .map(|(step, spec)| {
            let draws = (0..config.repetitions)
                .into_par_iter()
                .map(|rep| {
                    let spec = GeneratorSpec {
                        seed: spec.seed.repetition(rep as u64),
                        ..*spec
                    };
                    let g = generate(&spec, training)?;
                    let nnc = measures::nnc(training, &g, config.k, config.mode)?.nnc;
                    let mr = measures::memorizing_ratio(training, &g, config.rho)?.mr;
                    Ok((nnc, mr))
                })
                .collect::<Result<Vec<(f64, f64)>>>()?;
            let (nncs, mrs): (Vec<f64>, Vec<f64>) = draws.into_iter().unzip();
            let (nnc, _, nnc_se) = summarize(&nncs);
            let (mr, _, mr_se) = summarize(&mrs);
            Ok(HarnessPoint {
                step,
                tag: spec.kind.tag(),
                sigma: spec.kind.sigma(),
                nnc,
                mr,
                nnc_se,
                mr_se,
            })
        })
        .collect()
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "spearman needs paired samples");
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_basics() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), 1.0);
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), -1.0);
        assert_eq!(ranks(&[5.0, 1.0, 5.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        // monotone transforms do not matter
        let x = [0.3, 1.2, -4.0, 8.0, 2.2];
        let y: Vec<f64> = x.iter().map(|v: &f64| v.exp()).collect();
        assert!((spearman(&x, &y) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_schedule() {
        let s = sigma_schedule(1.0, 0.01, 3, 10, SeedPath::new(0)).unwrap();
        let sig: Vec<f64> = s.iter().map(|g| g.kind.sigma().unwrap()).collect();
        assert_eq!(sig[0], 1.0);
        assert!((sig[1] - 0.1).abs() < 1e-15);
        assert!((sig[2] - 0.01).abs() < 1e-15);
        assert!(sigma_schedule(1.0, 0.0, 3, 10, SeedPath::new(0)).is_err());
        assert!(sigma_schedule(1.0, 0.1, 0, 10, SeedPath::new(0)).unwrap().is_empty());
    }
}
