//! Seeded, reproducible random variates for the five reference densities.
//!
//! Every random draw in the crate starts from a [`SeedPath`]: a root seed plus
//! a chain of path components that select an independent ChaCha stream. The
//! same path always produces the same numbers, regardless of thread count.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::point::{Label, PointSet};

/// Marginal law of each coordinate; multivariate samples are iid products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Density {
    StandardNormal,
    /// Exponential with mean 1.
    Exponential,
    /// Student's t with one degree of freedom.
    StudentT,
    /// Cauchy with location 1 and scale 1.
    Cauchy,
    /// Pareto with scale 1 and shape 1.
    Pareto,
}

impl Density {
    pub const ALL: [Density; 5] = [
        Density::StandardNormal,
        Density::Exponential,
        Density::StudentT,
        Density::Cauchy,
        Density::Pareto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Density::StandardNormal => "normal",
            Density::Exponential => "exponential",
            Density::StudentT => "student_t",
            Density::Cauchy => "cauchy",
            Density::Pareto => "pareto",
        }
    }

    pub fn marginal_pdf(self, x: f64) -> f64 {
        match self {
            Density::StandardNormal => (-0.5 * x * x).exp() / (2.0 * PI).sqrt(),
            Density::Exponential => {
                if x < 0.0 {
                    0.0
                } else {
                    (-x).exp()
                }
            }
            Density::StudentT => 1.0 / (PI * (1.0 + x * x)),
            Density::Cauchy => 1.0 / (PI * (1.0 + (x - 1.0) * (x - 1.0))),
            Density::Pareto => {
                if x < 1.0 {
                    0.0
                } else {
                    1.0 / (x * x)
                }
            }
        }
    }

    pub fn marginal_cdf(self, x: f64) -> f64 {
        match self {
            Density::StandardNormal => standard_normal().cdf(x),
            Density::Exponential => {
                if x < 0.0 {
                    0.0
                } else {
                    -(-x).exp_m1()
                }
            }
            Density::StudentT => 0.5 + x.atan() / PI,
            Density::Cauchy => 0.5 + (x - 1.0).atan() / PI,
            Density::Pareto => {
                if x < 1.0 {
                    0.0
                } else {
                    1.0 - 1.0 / x
                }
            }
        }
    }

    /// Inverse CDF for `u` in `(0, 1)`.
    pub fn quantile(self, u: f64) -> f64 {
        match self {
            Density::StandardNormal => standard_normal().inverse_cdf(u),
            Density::Exponential => -(-u).ln_1p(),
            Density::StudentT => (PI * (u - 0.5)).tan(),
            Density::Cauchy => 1.0 + (PI * (u - 0.5)).tan(),
            Density::Pareto => 1.0 / (1.0 - u),
        }
    }

    /// Product density at `x`.
    pub fn pdf(self, x: &[f64]) -> f64 {
        x.iter().map(|&xi| self.marginal_pdf(xi)).product()
    }

    /// Points where the marginal density jumps.
    pub fn breakpoints(self) -> &'static [f64] {
        match self {
            Density::Exponential => &[0.0],
            Density::Pareto => &[1.0],
            _ => &[],
        }
    }
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal is valid")
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Density {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" | "standard_normal" | "gaussian" => Ok(Density::StandardNormal),
            "exponential" | "exp" => Ok(Density::Exponential),
            "student_t" | "student-t" | "t" => Ok(Density::StudentT),
            "cauchy" => Ok(Density::Cauchy),
            "pareto" => Ok(Density::Pareto),
            other => Err(Error::InvalidParameter(format!("unknown density '{other}'"))),
        }
    }
}

/// Role of a draw inside one repetition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Empirical,
    Generated,
    Training,
    /// Generator-internal randomness (resampling, jitter).
    Generator,
}

impl Role {
    fn tag(self) -> u64 {
        match self {
            Role::Empirical => 1,
            Role::Generated => 2,
            Role::Training => 3,
            Role::Generator => 4,
        }
    }

    pub fn label(self) -> Label {
        match self {
            Role::Empirical | Role::Training => Label::Empirical,
            Role::Generated | Role::Generator => Label::Generated,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Root seed plus a derivation path selecting an independent substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedPath {
    pub root: u64,
    stream: u64,
}

impl SeedPath {
    pub fn new(root: u64) -> Self {
        Self { root, stream: 0 }
    }

    fn push(self, tag: u64, value: u64) -> Self {
        let stream = splitmix64(self.stream ^ splitmix64(value.wrapping_mul(31).wrapping_add(tag)));
        Self { stream, ..self }
    }

    /// Named experiment, e.g. `"mr/normal/d2/m500/rho0.5"`.
    pub fn experiment(self, id: &str) -> Self {
        self.push(0x11, fnv1a(id))
    }

    pub fn repetition(self, index: u64) -> Self {
        self.push(0x22, index)
    }

    pub fn role(self, role: Role) -> Self {
        self.push(0x33, role.tag())
    }

    pub fn step(self, index: u64) -> Self {
        self.push(0x44, index)
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.root);
        rng.set_stream(self.stream);
        rng
    }
}

/// Draws a uniform variate in the open interval `(0, 1)`.
pub fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

/// A standard normal variate by inversion.
pub fn standard_normal_variate<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Density::StandardNormal.quantile(open_uniform(rng))
}

/// `m` points in `R^d` with iid coordinates from `density`.
pub fn sample(density: Density, d: usize, m: usize, path: SeedPath, label: Label) -> Result<PointSet> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    if m < 2 {
        return Err(Error::TooSmall { m });
    }
    let mut rng = path.rng();
    let coords: Vec<f64> = (0..m * d)
        .map(|_| density.quantile(open_uniform(&mut rng)))
        .collect();
    PointSet::from_flat(coords, d, label)
}
