//! Toy generators standing in for a trained scenario generator.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{Label, PointSet};
use crate::sampling::{open_uniform, sample, standard_normal_variate, Density, Role, SeedPath};

/// A law that fresh points can be drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// iid coordinates from one density.
    Product(Density),
    /// A common standard normal factor on every coordinate plus independent
    /// `noise * N(0, 1)` per coordinate: points scattered around `y = x`.
    CorrelatedLine { noise: f64 },
}

impl Source {
    pub fn draw(self, d: usize, m: usize, path: SeedPath) -> Result<PointSet> {
        match self {
            Source::Product(density) => sample(density, d, m, path, Label::Generated),
            Source::CorrelatedLine { noise } => {
                correlated_line(d, m, noise, path).map(|s| s.with_label(Label::Generated))
            }
        }
    }
}

/// `m` points near the diagonal of `R^d`, labelled empirical.
pub fn correlated_line(d: usize, m: usize, noise: f64, path: SeedPath) -> Result<PointSet> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise must be >= 0, got {noise}")));
    }
    let mut rng = path.rng();
    let mut coords = Vec::with_capacity(m * d);
    for _ in 0..m {
        let t = standard_normal_variate(&mut rng);
        for _ in 0..d {
            coords.push(t + noise * standard_normal_variate(&mut rng));
        }
    }
    PointSet::from_flat(coords, d, Label::Empirical)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Copies of the training points (drawn without replacement) plus
    /// Gaussian jitter; `jitter_sigma = 0` gives exact copies.
    Memorizer { jitter_sigma: f64 },
    /// Same mechanism as the memorizer with a strictly positive jitter.
    JitterResampler { sigma: f64 },
    /// Training copies with every coordinate column shuffled independently:
    /// marginals are kept, dependence between coordinates is destroyed.
    IndependenceBreaker,
    /// Fresh draws that ignore the training set.
    TrueSampler { source: Source },
}

impl GeneratorKind {
    /// Short label for reports, e.g. `jitter(0.25)`.
    pub fn tag(&self) -> String {
        match self {
            GeneratorKind::Memorizer { jitter_sigma } => format!("memorizer({jitter_sigma})"),
            GeneratorKind::JitterResampler { sigma } => format!("jitter({sigma})"),
            GeneratorKind::IndependenceBreaker => "breaker".into(),
            GeneratorKind::TrueSampler { source: Source::Product(d) } => format!("true({d})"),
            GeneratorKind::TrueSampler {
                source: Source::CorrelatedLine { noise },
            } => format!("true(line,{noise})"),
        }
    }

    pub fn sigma(&self) -> Option<f64> {
        match *self {
            GeneratorKind::Memorizer { jitter_sigma } => Some(jitter_sigma),
            GeneratorKind::JitterResampler { sigma } => Some(sigma),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GeneratorKind::Memorizer { jitter_sigma } if !(jitter_sigma >= 0.0 && jitter_sigma.is_finite()) => {
                Err(Error::InvalidParameter(format!("memorizer jitter must be >= 0, got {jitter_sigma}")))
            }
            GeneratorKind::JitterResampler { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidParameter(format!("resampler sigma must be > 0, got {sigma}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    /// Number of points to emit.
    pub m: usize,
    #[serde(skip)]
    pub seed: SeedPath,
}

/// Row indices covering the training set in random order, reshuffled for
/// every further pass when `m` exceeds the training size.
fn shuffled_rows<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(m);
    let mut order: Vec<usize> = (0..n).collect();
    while out.len() < m {
        order.shuffle(rng);
        out.extend(order.iter().take(m - out.len()));
    }
    out
}

fn jittered_copies<R: Rng>(rng: &mut R, training: &PointSet, m: usize, sigma: f64) -> Vec<f64> {
    let rows = shuffled_rows(rng, training.len(), m);
    let mut coords = Vec::with_capacity(m * training.dim());
    for &r in &rows {
        coords.extend_from_slice(training.point(r));
    }
    if sigma > 0.0 {
        for x in &mut coords {
            *x += sigma * standard_normal_variate(rng);
        }
    }
    coords
}

/// Draws `spec.m` generated points from the toy generator described by `spec`.
pub fn generate(spec: &GeneratorSpec, training: &PointSet) -> Result<PointSet> {
    spec.kind.validate()?;
    if spec.m < 2 {
        return Err(Error::TooSmall { m: spec.m });
    }
    let d = training.dim();
    let mut rng = spec.seed.role(Role::Generator).rng();
    let coords = match spec.kind {
        GeneratorKind::Memorizer { jitter_sigma } => jittered_copies(&mut rng, training, spec.m, jitter_sigma),
        GeneratorKind::JitterResampler { sigma } => jittered_copies(&mut rng, training, spec.m, sigma),
        GeneratorKind::IndependenceBreaker => {
            let mut coords = jittered_copies(&mut rng, training, spec.m, 0.0);
            for c in 0..d {
                let mut column: Vec<f64> = coords.iter().skip(c).step_by(d).copied().collect();
                column.shuffle(&mut rng);
                for (x, v) in coords.iter_mut().skip(c).step_by(d).zip(column) {
                    *x = v;
                }
            }
            coords
        }
        GeneratorKind::TrueSampler { source } => {
            // consume one variate so the source stream is distinct from the
            // generator's own stream
            let _ = open_uniform(&mut rng);
            return source.draw(d, spec.m, spec.seed.role(Role::Generated));
        }
    };
    PointSet::from_flat(coords, d, Label::Generated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::memorizing_ratio;

    fn training() -> PointSet {
        correlated_line(2, 200, 0.1, SeedPath::new(3).role(Role::Training)).unwrap()
    }

    fn spec(kind: GeneratorKind, m: usize) -> GeneratorSpec {
        GeneratorSpec {
            kind,
            m,
            seed: SeedPath::new(8),
        }
    }

    #[test]
    fn exact_memorizer_copies_every_point() {
        let t = training();
        let g = generate(&spec(GeneratorKind::Memorizer { jitter_sigma: 0.0 }, 200), &t).unwrap();
        let mut a = t.to_rows();
        let mut b = g.to_rows();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(a, b);
        for rho in [0.01, 0.5, 1.0] {
            assert_eq!(memorizing_ratio(&t, &g, rho).unwrap().mr, 1.0);
        }
    }

    #[test]
    fn breaker_preserves_marginals() {
        let t = training();
        let g = generate(&spec(GeneratorKind::IndependenceBreaker, 200), &t).unwrap();
        for c in 0..2 {
            let mut a: Vec<f64> = t.iter().map(|p| p[c]).collect();
            let mut b: Vec<f64> = g.iter().map(|p| p[c]).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            assert_eq!(a, b);
        }
        // correlation between the coordinates is gone
        let corr = |s: &PointSet| {
            let n = s.len() as f64;
            let mx = s.iter().map(|p| p[0]).sum::<f64>() / n;
            let my = s.iter().map(|p| p[1]).sum::<f64>() / n;
            let sxy: f64 = s.iter().map(|p| (p[0] - mx) * (p[1] - my)).sum();
            let sxx: f64 = s.iter().map(|p| (p[0] - mx).powi(2)).sum();
            let syy: f64 = s.iter().map(|p| (p[1] - my).powi(2)).sum();
            sxy / (sxx * syy).sqrt()
        };
        assert!(corr(&t) > 0.95);
        assert!(corr(&g).abs() < 0.3);
    }

    #[test]
    fn output_size_may_exceed_training() {
        let t = training();
        let g = generate(&spec(GeneratorKind::JitterResampler { sigma: 0.1 }, 450), &t).unwrap();
        assert_eq!(g.len(), 450);
        assert_eq!(g.dim(), 2);
    }

    #[test]
    fn parameters_validated() {
        let t = training();
        assert!(generate(&spec(GeneratorKind::JitterResampler { sigma: 0.0 }, 10), &t).is_err());
        assert!(generate(&spec(GeneratorKind::Memorizer { jitter_sigma: -1.0 }, 10), &t).is_err());
        assert!(generate(&spec(GeneratorKind::IndependenceBreaker, 1), &t).is_err());
    }

    #[test]
    fn true_sampler_matches_dimension() {
        let t = training();
        let kind = GeneratorKind::TrueSampler {
            source: Source::Product(Density::Pareto),
        };
        let g = generate(&spec(kind, 50), &t).unwrap();
        assert_eq!(g.dim(), 2);
        assert!(g.as_flat().iter().all(|&x| x >= 1.0));
    }

    #[test]
    fn deterministic_given_seed() {
        let t = training();
        let s = spec(GeneratorKind::JitterResampler { sigma: 0.3 }, 100);
        assert_eq!(generate(&s, &t).unwrap(), generate(&s, &t).unwrap());
    }
}
