//! Local-hidden-variable models: deterministic `+-1` outcome functions
//! `A(r, lambda)`, `B(r, lambda) = -/+ A(r, lambda)`, averaged over a hidden
//! variable with total weight `w <= 1`.
//!
//! Monte Carlo draws come in fixed blocks of [`BLOCK`] samples. Block `j`
//! uses ChaCha8 seeded with the master seed on stream `j`, and per-block sums
//! are exact integers, so the merged estimate does not depend on how blocks
//! are spread over threads.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cat_state::Polarization;
use crate::error::{Error, Result};
use crate::spin::Direction;

pub const MIN_SAMPLES: u64 = 1_000;
pub const MAX_GRID_POINTS: usize = 1_000_000;
pub const BLOCK: u64 = 4096;
/// Slack on `w <= 1`.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    /// Sign of `x`, with `x = 0` counted as `+1`.
    #[inline]
    pub fn sign_of(x: f64) -> Self {
        if x >= 0.0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    #[inline]
    pub fn value(self) -> i64 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    #[inline]
    pub fn flip(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

/// A point of hidden-variable space. Models decide how many components they
/// use: a unit vector for the sign rule, a single angle for the phase rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda(pub [f64; 3]);

/// Pluggable LHV model.
pub trait HiddenVariableModel: Sync {
    fn id(&self) -> String;
    fn polarization(&self) -> Polarization;
    /// `integral rho(lambda) d lambda`, at most 1.
    fn weight(&self) -> f64 {
        1.0
    }
    /// One draw from the normalized density `rho / w`.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Lambda;
    fn outcome_a(&self, r: &Direction, lambda: &Lambda) -> Outcome;
    /// Equal-weight nodes discretizing the normalized density, when one exists.
    fn quadrature(&self, _points: usize) -> Option<Vec<Lambda>> {
        None
    }

    fn outcome_b(&self, r: &Direction, lambda: &Lambda) -> Outcome {
        let a = self.outcome_a(r, lambda);
        match self.polarization() {
            Polarization::Antiparallel => a.flip(),
            Polarization::Parallel => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "rule", rename_all = "lowercase"))]
pub enum OutcomeRule {
    /// `A = sign(lambda . r)`, `lambda` uniform on the sphere.
    Sign,
    /// `A = sign(cos(k phi_r - lambda))`, `lambda` uniform on `[0, 2pi)`.
    Phase { k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LhvModel {
    pub rule: OutcomeRule,
    pub polarization: Polarization,
    pub weight: f64,
}

impl LhvModel {
    pub fn new(rule: OutcomeRule, polarization: Polarization, weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight <= 1.0 + WEIGHT_TOL) {
            return Err(Error::InvalidParameter("LHV weight must be in (0, 1]"));
        }
        if let OutcomeRule::Phase { k: 0 } = rule {
            return Err(Error::InvalidParameter("phase rule needs k >= 1"));
        }
        Ok(Self {
            rule,
            polarization,
            weight,
        })
    }
}

impl HiddenVariableModel for LhvModel {
    fn id(&self) -> String {
        let pol = match self.polarization {
            Polarization::Antiparallel => "anti",
            Polarization::Parallel => "para",
        };
        match self.rule {
            OutcomeRule::Sign => format!("sign/{pol}/w={}", self.weight),
            OutcomeRule::Phase { k } => format!("phase-k{k}/{pol}/w={}", self.weight),
        }
    }

    fn polarization(&self) -> Polarization {
        self.polarization
    }

    fn weight(&self) -> f64 {
        self.weight
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Lambda {
        match self.rule {
            OutcomeRule::Sign => {
                let z = 2.0 * rng.gen::<f64>() - 1.0;
                let (s, c) = (2.0 * PI * rng.gen::<f64>()).sin_cos();
                let rho = (1.0 - z * z).max(0.0).sqrt();
                Lambda([rho * c, rho * s, z])
            }
            OutcomeRule::Phase { .. } => Lambda([2.0 * PI * rng.gen::<f64>(), 0.0, 0.0]),
        }
    }

    fn outcome_a(&self, r: &Direction, lambda: &Lambda) -> Outcome {
        match self.rule {
            OutcomeRule::Sign => {
                let u = r.unit_vector();
                let l = &lambda.0;
                Outcome::sign_of(u[0] * l[0] + u[1] * l[1] + u[2] * l[2])
            }
            OutcomeRule::Phase { k } => {
                Outcome::sign_of((f64::from(k) * r.phi() - lambda.0[0]).cos())
            }
        }
    }

    fn quadrature(&self, points: usize) -> Option<Vec<Lambda>> {
        match self.rule {
            OutcomeRule::Sign => None,
            OutcomeRule::Phase { .. } => Some(
                (0..points)
                    .map(|j| Lambda([(j as f64 + 0.5) * 2.0 * PI / points as f64, 0.0, 0.0]))
                    .collect(),
            ),
        }
    }
}

/// Sign model, phase models with `k = 1, 3`, and half-weight variants, each
/// for both polarizations.
pub fn builtin_models() -> Vec<LhvModel> {
    let rules = [
        (OutcomeRule::Sign, 1.0),
        (OutcomeRule::Phase { k: 1 }, 1.0),
        (OutcomeRule::Phase { k: 3 }, 1.0),
        (OutcomeRule::Sign, 0.5),
        (OutcomeRule::Phase { k: 1 }, 0.5),
    ];
    Polarization::ALL
        .iter()
        .flat_map(|&pol| {
            rules.iter().map(move |&(rule, w)| LhvModel {
                rule,
                polarization: pol,
                weight: w,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LhvEstimate {
    pub model: String,
    pub p_ab: f64,
    pub p_ac: f64,
    pub p_bc: f64,
    pub se_ab: f64,
    pub se_ac: f64,
    pub se_bc: f64,
    /// `p_ab p_ac - |p_bc|`
    pub p_s_lc: f64,
    /// Delta-method error of `p_s_lc` from the full covariance of the three
    /// correlation estimates.
    pub se_p_s: f64,
    pub samples: u64,
    pub rng_seed: u64,
}

/// Integer sums of the three products and their pairwise products.
#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    s: [i64; 3],
    cross: [i64; 3],
}

impl Sums {
    fn add(&mut self, o: &Sums) {
        for i in 0..3 {
            self.s[i] += o.s[i];
            self.cross[i] += o.cross[i];
        }
    }
}

fn block_sums<M: HiddenVariableModel + ?Sized>(
    model: &M,
    dirs: &[Direction; 3],
    seed: u64,
    block: u64,
    count: u64,
) -> Sums {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut out = Sums::default();
    for _ in 0..count {
        let l = model.sample(&mut rng);
        let [a, b, c] = dirs;
        let x = model.outcome_a(a, &l).value() * model.outcome_b(b, &l).value();
        let y = model.outcome_a(a, &l).value() * model.outcome_b(c, &l).value();
        let z = model.outcome_a(b, &l).value() * model.outcome_b(c, &l).value();
        out.s[0] += x;
        out.s[1] += y;
        out.s[2] += z;
        out.cross[0] += x * y;
        out.cross[1] += x * z;
        out.cross[2] += y * z;
    }
    out
}

/// Monte Carlo estimate of `p_lc(a,b)`, `p_lc(a,c)`, `p_lc(b,c)` and `p_s`.
pub fn estimate<M: HiddenVariableModel + ?Sized>(
    model: &M,
    a: &Direction,
    b: &Direction,
    c: &Direction,
    samples: u64,
    seed: u64,
) -> Result<LhvEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            samples,
            min: MIN_SAMPLES,
        });
    }
    let w = model.weight();
    if !(w > 0.0 && w <= 1.0 + WEIGHT_TOL) {
        return Err(Error::InvalidParameter("LHV weight must be in (0, 1]"));
    }
    let dirs = [*a, *b, *c];
    let blocks = samples.div_ceil(BLOCK);
    let partial = crate::par::map_range(blocks as usize, |j| {
        let j = j as u64;
        let count = BLOCK.min(samples - j * BLOCK);
        block_sums(model, &dirs, seed, j, count)
    });
    let mut tot = Sums::default();
    for p in &partial {
        tot.add(p);
    }

    let n = samples as f64;
    let mean = tot.s.map(|v| v as f64 / n);
    // each product is +-1, so E[x^2] = 1
    let cov = |i: usize, j: usize| -> f64 {
        let exy = if i == j {
            1.0
        } else {
            tot.cross[i + j - 1] as f64 / n
        };
        (exy - mean[i] * mean[j]) * n / (n - 1.0) / n
    };
    let p = mean.map(|m| w * m);
    let se = [0, 1, 2].map(|i| w * cov(i, i).max(0.0).sqrt());

    let grad = [p[1], p[0], -sign(p[2])];
    let mut var = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            var += grad[i] * grad[j] * w * w * cov(i, j);
        }
    }

    Ok(LhvEstimate {
        model: model.id(),
        p_ab: p[0],
        p_ac: p[1],
        p_bc: p[2],
        se_ab: se[0],
        se_ac: se[1],
        se_bc: se[2],
        p_s_lc: p[0] * p[1] - p[2].abs(),
        se_p_s: var.max(0.0).sqrt(),
        samples,
        rng_seed: seed,
    })
}

#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExhaustiveResult {
    pub p_ab: f64,
    pub p_ac: f64,
    pub p_bc: f64,
    pub p_s_lc: f64,
    pub grid_points: usize,
}

/// Exact midpoint quadrature over a discretizable hidden variable.
pub fn exhaustive_check<M: HiddenVariableModel + ?Sized>(
    model: &M,
    a: &Direction,
    b: &Direction,
    c: &Direction,
    grid_points: usize,
) -> Result<ExhaustiveResult> {
    if grid_points == 0 || grid_points > MAX_GRID_POINTS {
        return Err(Error::GridSize {
            points: grid_points,
            max: MAX_GRID_POINTS,
        });
    }
    let nodes = model
        .quadrature(grid_points)
        .ok_or(Error::Unsupported("model has no finite hidden-variable grid"))?;
    let mut s = [0i64; 3];
    for l in &nodes {
        s[0] += model.outcome_a(a, l).value() * model.outcome_b(b, l).value();
        s[1] += model.outcome_a(a, l).value() * model.outcome_b(c, l).value();
        s[2] += model.outcome_a(b, l).value() * model.outcome_b(c, l).value();
    }
    let w = model.weight() / nodes.len() as f64;
    let p = s.map(|v| v as f64 * w);
    Ok(ExhaustiveResult {
        p_ab: p[0],
        p_ac: p[1],
        p_bc: p[2],
        p_s_lc: p[0] * p[1] - p[2].abs(),
        grid_points: nodes.len(),
    })
}
