//! Deterministic search for the largest `p_s` over the three measuring
//! directions and the state parameters `(xi, eta)`.
//!
//! Stage one evaluates two grids: the equatorial slice `theta = pi/2` at full
//! azimuthal resolution, and a coarse grid over all eight parameters. The best
//! `top_candidates` cells (plus optional seeded random starts) are then
//! polished by coordinate descent with a halving step.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cat_state::{CatState, Polarization};
use crate::error::{Error, Result};
use crate::scs::DirFactors;
use crate::spin::{reduce_angle, Direction, Spin};
use crate::ubi::{fast_pair, ps, ubi_quantum};

/// Hard ceiling on any reported `p_s`.
pub const PS_CEILING: f64 = 1.0 + 1e-9;
/// Maxima closer than this are ties, broken lexicographically.
pub const TIE_TOL: f64 = 1e-12;
/// Below this `N` a scaled correlation is treated as undefined.
const SCALED_GUARD: f64 = 1e-250;
/// The equatorial grid has `n^3 (n/2)^2` cells.
pub const MAX_GRID_POINTS: usize = 48;
const TWO_PI: f64 = 2.0 * PI;

/// Whether correlations are divided by the subspace probability `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Normalization {
    Raw,
    Scaled,
}

impl Normalization {
    /// Scaled for half-integer spin, raw for integer spin.
    pub fn default_for(spin: Spin) -> Self {
        if spin.is_half_integer() {
            Normalization::Scaled
        } else {
            Normalization::Raw
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SearchConfig {
    /// Points per azimuth on the equatorial grid (`xi`, `eta` get half).
    pub grid_points: usize,
    pub refine_iterations: usize,
    /// Refinement stops once the step drops below this.
    pub tolerance: f64,
    pub top_candidates: usize,
    /// Extra seeded random starting points.
    pub restarts: usize,
    pub seed: u64,
    /// `None` picks [`Normalization::default_for`].
    pub normalization: Option<Normalization>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points: 24,
            refine_iterations: 200,
            tolerance: 1e-8,
            top_candidates: 8,
            restarts: 0,
            seed: 0,
            normalization: None,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if !(4..=MAX_GRID_POINTS).contains(&self.grid_points) || self.grid_points % 2 == 1 {
            return Err(Error::InvalidParameter("grid_points must be even and in 4..=48"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive"));
        }
        if self.top_candidates == 0 {
            return Err(Error::InvalidParameter("top_candidates must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ViolationSearchResult {
    pub best_p_s: f64,
    /// `(theta_a, phi_a, theta_b, phi_b, theta_c, phi_c)`
    pub best_angles: [f64; 6],
    /// `(xi, eta)`
    pub best_state_params: [f64; 2],
    pub evaluations: u64,
    pub converged: bool,
    pub scaled: bool,
    pub spin: Spin,
    pub polarization: Polarization,
}

impl ViolationSearchResult {
    pub fn directions(&self) -> [Direction; 3] {
        let a = &self.best_angles;
        [
            Direction::clamped(a[0], a[1]),
            Direction::clamped(a[2], a[3]),
            Direction::clamped(a[4], a[5]),
        ]
    }

    pub fn state(&self) -> CatState {
        CatState::new(
            self.spin,
            self.polarization,
            self.best_state_params[0],
            self.best_state_params[1],
        )
    }
}

type Params = [f64; 8];

struct Objective {
    spin: Spin,
    polarization: Polarization,
    scaled: bool,
}

impl Objective {
    fn eval(&self, x: &Params) -> f64 {
        let st = CatState::new(self.spin, self.polarization, x[6], x[7]);
        let f = |t: f64, p: f64| DirFactors::new(self.spin, &Direction::clamped(t, p));
        let (fa, fb, fc) = (f(x[0], x[1]), f(x[2], x[3]), f(x[4], x[5]));
        let mut corr = [0.0; 3];
        for (slot, (u, v)) in corr.iter_mut().zip([(&fa, &fb), (&fa, &fc), (&fb, &fc)]) {
            let (p, n) = fast_pair(&st, u, v);
            *slot = if self.scaled {
                if !(n > SCALED_GUARD) {
                    return f64::NEG_INFINITY;
                }
                p / n
            } else {
                p
            };
        }
        ps(corr[0], corr[1], corr[2])
    }
}

/// Canonical representative: `theta` clamped, every angle reduced to `[0, 2pi)`.
fn canonical(x: &Params) -> Params {
    let mut y = *x;
    for (i, v) in y.iter_mut().enumerate() {
        *v = if i < 6 && i % 2 == 0 {
            v.clamp(0.0, PI)
        } else {
            reduce_angle(*v)
        };
    }
    y
}

fn lex_cmp(a: &Params, b: &Params) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Larger value first, then lexicographically smaller parameters.
fn rank(a: &(f64, Params), b: &(f64, Params)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| lex_cmp(&a.1, &b.1))
}

fn equatorial_cell(n: usize, idx: usize) -> Params {
    let h = n / 2;
    let mut r = idx;
    let mut take = |m: usize| {
        let v = r % m;
        r /= m;
        v as f64
    };
    let eta = take(h) * PI / h as f64;
    let xi = take(h) * PI / h as f64;
    let pc = take(n) * TWO_PI / n as f64;
    let pb = take(n) * TWO_PI / n as f64;
    let pa = take(n) * TWO_PI / n as f64;
    [FRAC_PI_2, pa, FRAC_PI_2, pb, FRAC_PI_2, pc, xi, eta]
}

const COARSE_THETA: usize = 5;
const COARSE_PHI: usize = 6;
const COARSE_STATE: usize = 4;

fn coarse_cell(idx: usize) -> Params {
    let mut r = idx;
    let mut take = |m: usize| {
        let v = r % m;
        r /= m;
        v as f64
    };
    let mut x = [0.0; 8];
    for i in (0..8).rev() {
        x[i] = match i {
            6 | 7 => take(COARSE_STATE) * FRAC_PI_4,
            _ if i % 2 == 0 => take(COARSE_THETA) * PI / (COARSE_THETA - 1) as f64,
            _ => take(COARSE_PHI) * TWO_PI / COARSE_PHI as f64,
        };
    }
    x
}

enum Cell {
    Equatorial(usize),
    Coarse(usize),
}

struct Refined {
    value: f64,
    params: Params,
    evaluations: u64,
    converged: bool,
}

fn refine(obj: &Objective, start: Params, step0: f64, cfg: &SearchConfig) -> Refined {
    let mut x = start;
    let mut best = obj.eval(&x);
    let mut evaluations = 1;
    let mut step = step0;
    for _ in 0..cfg.refine_iterations {
        if step < cfg.tolerance {
            break;
        }
        let mut improved = false;
        for i in 0..8 {
            for dir in [1.0, -1.0] {
                let mut y = x;
                y[i] += dir * step;
                if i < 6 && i % 2 == 0 {
                    y[i] = y[i].clamp(0.0, PI);
                }
                let v = obj.eval(&y);
                evaluations += 1;
                if v > best {
                    best = v;
                    x = y;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Refined {
        value: best,
        params: canonical(&x),
        evaluations,
        converged: step < cfg.tolerance,
    }
}

/// Maximize `p_s` for one spin and polarization.
///
/// The winner is re-evaluated through the checked path ([`ubi_quantum`]); a
/// value above [`PS_CEILING`] is returned as [`Error::BoundExceeded`].
pub fn max_violation_search(
    spin: Spin,
    polarization: Polarization,
    config: &SearchConfig,
) -> Result<ViolationSearchResult> {
    config.validate()?;
    let norm = config.normalization.unwrap_or(Normalization::default_for(spin));
    let obj = Objective {
        spin,
        polarization,
        scaled: norm == Normalization::Scaled,
    };

    let n = config.grid_points;
    let h = n / 2;
    let n_eq = n * n * n * h * h;
    let n_coarse = COARSE_THETA.pow(3) * COARSE_PHI.pow(3) * COARSE_STATE.pow(2);

    // Values only; cells are decoded again for the few survivors.
    let eq_vals = crate::par::map_range(n_eq, |i| obj.eval(&equatorial_cell(n, i)));
    let coarse_vals = crate::par::map_range(n_coarse, |i| obj.eval(&coarse_cell(i)));
    let mut evaluations = (n_eq + n_coarse) as u64;

    let mut pool: Vec<(f64, Params)> = Vec::with_capacity(config.top_candidates + 1);
    let cells = eq_vals
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, Cell::Equatorial(i)))
        .chain(coarse_vals.iter().enumerate().map(|(i, v)| (*v, Cell::Coarse(i))));
    for (v, cell) in cells {
        if pool.len() == config.top_candidates && v < pool[pool.len() - 1].0 {
            continue;
        }
        let x = match cell {
            Cell::Equatorial(i) => equatorial_cell(n, i),
            Cell::Coarse(i) => coarse_cell(i),
        };
        pool.push((v, x));
        pool.sort_by(rank);
        pool.truncate(config.top_candidates);
    }

    let mut starts: Vec<Params> = pool.into_iter().map(|(_, x)| x).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.restarts {
        let mut x = [0.0; 8];
        for (i, v) in x.iter_mut().enumerate() {
            *v = if i < 6 && i % 2 == 0 {
                rng.gen::<f64>() * PI
            } else {
                rng.gen::<f64>() * TWO_PI
            };
        }
        starts.push(x);
    }

    let step0 = PI / n as f64;
    let refined = crate::par::map_range(starts.len(), |i| refine(&obj, starts[i], step0, config));
    evaluations += refined.iter().map(|r| r.evaluations).sum::<u64>();

    let top = refined
        .iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let winner = refined
        .iter()
        .filter(|r| r.value >= top - TIE_TOL)
        .min_by(|a, b| lex_cmp(&a.params, &b.params))
        .ok_or(Error::InvalidParameter("no finite objective value found"))?;

    let x = winner.params;
    let state = CatState::new(spin, polarization, x[6], x[7]);
    let d = |t: f64, p: f64| Direction::clamped(t, p);
    let checked = ubi_quantum(&state, &d(x[0], x[1]), &d(x[2], x[3]), &d(x[4], x[5]), obj.scaled)?;
    if checked.p_s > PS_CEILING {
        return Err(Error::BoundExceeded { p_s: checked.p_s });
    }

    Ok(ViolationSearchResult {
        best_p_s: checked.p_s,
        best_angles: [x[0], x[1], x[2], x[3], x[4], x[5]],
        best_state_params: [x[6], x[7]],
        evaluations,
        converged: winner.converged,
        scaled: obj.scaled,
        spin,
        polarization,
    })
}
