//! Monte-Carlo studies of both statistics and a toy generator harness.

mod generators;
mod harness;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{self, ExpectationMode};
use crate::point::Label;
use crate::sampling::{sample, Density, Role, SeedPath};
use crate::theory;

pub use generators::{correlated_line, generate, GeneratorKind, GeneratorSpec, Source};
pub use harness::{run_harness, sigma_schedule, spearman, HarnessConfig, HarnessPoint};

/// Which statistic an experiment evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Mr,
    Nnc,
    Both,
}

impl Statistic {
    fn includes(self, other: Statistic) -> bool {
        self == other || self == Statistic::Both
    }
}

/// A two-independent-samples Monte-Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub density: Density,
    /// Law of the generated sample; `None` draws it from `density` as well.
    pub generated_density: Option<Density>,
    pub d: usize,
    pub m: usize,
    pub rho: f64,
    pub k: usize,
    pub mode: ExpectationMode,
    pub repetitions: usize,
    pub seed: u64,
    pub statistic: Statistic,
}

impl ExperimentSpec {
    /// 100 repetitions of `m` points in two dimensions.
    pub fn new(density: Density, m: usize, statistic: Statistic, seed: u64) -> Self {
        Self {
            density,
            generated_density: None,
            d: 2,
            m,
            rho: 0.5,
            k: 3,
            mode: ExpectationMode::ExactExpectation,
            repetitions: 100,
            seed,
            statistic,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
        }
        if self.d == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if self.m < 2 {
            return Err(Error::TooSmall { m: self.m });
        }
        Ok(())
    }

    fn generated(&self) -> Density {
        self.generated_density.unwrap_or(self.density)
    }

    /// Seed path of one repetition's samples. It does not depend on `rho`, `k`
    /// or the statistic, so those share draws.
    fn repetition_path(&self, rep: usize) -> SeedPath {
        sample_path(self.seed, self.density, self.generated(), self.d, self.m, rep)
    }
}

fn sample_path(seed: u64, e: Density, g: Density, d: usize, m: usize, rep: usize) -> SeedPath {
    SeedPath::new(seed)
        .experiment(&format!("{e}/{g}/d{d}/m{m}"))
        .repetition(rep as u64)
}

fn draw_pair(
    e: Density,
    g: Density,
    d: usize,
    m: usize,
    path: SeedPath,
) -> Result<(crate::PointSet, crate::PointSet)> {
    Ok((
        sample(e, d, m, path.role(Role::Empirical), Label::Empirical)?,
        sample(g, d, m, path.role(Role::Generated), Label::Generated)?,
    ))
}

/// Per-repetition values and their summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub statistic: Statistic,
    pub values: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation; `None` for a single repetition.
    pub std_dev: Option<f64>,
    /// `std_dev / sqrt(n)`.
    pub std_err: Option<f64>,
    /// Large-sample value under the null: `rho^d / (rho^d + 1)` for mr, 0 for nnc.
    pub reference: f64,
}

/// Mean, sample standard deviation and standard error, summed in input order.
pub fn summarize(values: &[f64]) -> (f64, Option<f64>, Option<f64>) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, None, None);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    (mean, Some(sd), Some(sd / n.sqrt()))
}

fn finish(spec: &ExperimentSpec, statistic: Statistic, values: Vec<f64>, reference: f64) -> ExperimentResult {
    let (mean, std_dev, std_err) = summarize(&values);
    ExperimentResult {
        spec: spec.clone(),
        statistic,
        values,
        mean,
        std_dev,
        std_err,
        reference,
    }
}

/// Memorizing ratio between two independent samples, repeated.
pub fn run_mr_convergence(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    if !spec.statistic.includes(Statistic::Mr) {
        return Err(Error::InvalidParameter("experiment does not select mr".into()));
    }
    let values = (0..spec.repetitions)
        .into_par_iter()
        .map(|rep| {
            let (e, g) = draw_pair(spec.density, spec.generated(), spec.d, spec.m, spec.repetition_path(rep))?;
            Ok(measures::memorizing_ratio(&e, &g, spec.rho)?.mr)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(finish(spec, Statistic::Mr, values, theory::mr_limit(spec.rho, spec.d)?))
}

/// Nearest neighbor coincidence between two independent samples, repeated.
pub fn run_nnc_null(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    if !spec.statistic.includes(Statistic::Nnc) {
        return Err(Error::InvalidParameter("experiment does not select nnc".into()));
    }
    let values = (0..spec.repetitions)
        .into_par_iter()
        .map(|rep| {
            let (e, g) = draw_pair(spec.density, spec.generated(), spec.d, spec.m, spec.repetition_path(rep))?;
            Ok(measures::nnc(&e, &g, spec.k, spec.mode)?.nnc)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(finish(spec, Statistic::Nnc, values, 0.0))
}

/// Runs whichever statistics `spec` selects.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentResult>> {
    let mut out = Vec::new();
    if spec.statistic.includes(Statistic::Mr) {
        out.push(run_mr_convergence(spec)?);
    }
    if spec.statistic.includes(Statistic::Nnc) {
        out.push(run_nnc_null(spec)?);
    }
    Ok(out)
}

pub const TABLE_RHOS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const TABLE_SIZES: [usize; 2] = [500, 5000];

/// One cell of the memorizing ratio convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MrTableCell {
    pub density: Density,
    pub d: usize,
    pub m: usize,
    pub rho: f64,
    pub repetitions: usize,
    pub mean: f64,
    pub std_err: Option<f64>,
    pub theoretical: f64,
}

/// Mean memorizing ratio for every `(density, m, rho)` combination in `d`
/// dimensions. Draws are shared across `rho` and match
/// [`run_mr_convergence`] for the same seed.
pub fn mr_table(
    densities: &[Density],
    sizes: &[usize],
    rhos: &[f64],
    d: usize,
    repetitions: usize,
    seed: u64,
) -> Result<Vec<MrTableCell>> {
    if repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
    }
    let mut jobs = Vec::new();
    for &density in densities {
        for &m in sizes {
            for rep in 0..repetitions {
                jobs.push((density, m, rep));
            }
        }
    }
    let ratios = jobs
        .into_par_iter()
        .map(|(density, m, rep)| {
            let (e, g) = draw_pair(density, density, d, m, sample_path(seed, density, density, d, m, rep))?;
            measures::memorizing_ratios(&e, &g, rhos)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;

    let mut cells = Vec::new();
    let mut chunks = ratios.chunks(repetitions);
    for &density in densities {
        for &m in sizes {
            let block = chunks.next().expect("one block per (density, m)");
            for (j, &rho) in rhos.iter().enumerate() {
                let values: Vec<f64> = block.iter().map(|r| r[j]).collect();
                let (mean, _, std_err) = summarize(&values);
                cells.push(MrTableCell {
                    density,
                    d,
                    m,
                    rho,
                    repetitions,
                    mean,
                    std_err,
                    theoretical: theory::mr_limit(rho, d)?,
                });
            }
        }
    }
    Ok(cells)
}
