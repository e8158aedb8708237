//! The universal Bell-type inequality `p(a,b) p(a,c) <= |p(b,c)|` and its
//! violation quantity `p_s = p(a,b) p(a,c) - |p(b,c)|`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::cat_state::{CatState, Polarization};
use crate::error::{Error, Result};
use crate::scs::{scale_by_probability, subspace_correlation, DirFactors};
use crate::spin::{Direction, Spin};

/// `p_s` above this counts as a violation.
pub const VIOLATION_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UbiReport {
    pub p_ab: f64,
    pub p_ac: f64,
    pub p_bc: f64,
    pub p_s: f64,
    pub violated: bool,
    /// Correlations divided by the subspace probability `N`.
    pub scaled: bool,
}

impl UbiReport {
    pub fn from_correlations(p_ab: f64, p_ac: f64, p_bc: f64, scaled: bool) -> Self {
        let p_s = ps(p_ab, p_ac, p_bc);
        Self {
            p_ab,
            p_ac,
            p_bc,
            p_s,
            violated: p_s > VIOLATION_THRESHOLD,
            scaled,
        }
    }
}

#[inline]
pub(crate) fn ps(p_ab: f64, p_ac: f64, p_bc: f64) -> f64 {
    p_ab * p_ac - p_bc.abs()
}

/// Local (population) correlations only. These must never violate; a
/// violation is returned as [`Error::LocalViolation`].
pub fn ubi_local(state: &CatState, a: &Direction, b: &Direction, c: &Direction) -> Result<UbiReport> {
    let pl = |x: &Direction, y: &Direction| -> Result<f64> {
        Ok(subspace_correlation(state, x, y)?.p_local)
    };
    let rep = UbiReport::from_correlations(pl(a, b)?, pl(a, c)?, pl(b, c)?, false);
    if rep.violated {
        return Err(Error::LocalViolation { p_s: rep.p_s });
    }
    Ok(rep)
}

/// Total (local + nonlocal) subspace correlations, optionally scaled by `N`.
pub fn ubi_quantum(
    state: &CatState,
    a: &Direction,
    b: &Direction,
    c: &Direction,
    scaled: bool,
) -> Result<UbiReport> {
    let pt = |x: &Direction, y: &Direction| -> Result<f64> {
        let rep = subspace_correlation(state, x, y)?;
        if scaled {
            scale_by_probability(rep.p_total, rep.probability, x, y)
        } else {
            Ok(rep.p_total)
        }
    };
    Ok(UbiReport::from_correlations(pt(a, b)?, pt(a, c)?, pt(b, c)?, scaled))
}

/// Closed-form `p_total` (and `N`) without brute-force checking; the hot path
/// of the violation search.
#[inline]
pub(crate) fn fast_pair(state: &CatState, fa: &DirFactors, fb: &DirFactors) -> (f64, f64) {
    let (lc, nlc) = crate::scs::closed_form_rho(state, fa, fb);
    let p_local = state.polarization.local_sign() * fa.polarization() * fb.polarization();
    let p_nonlocal = 2.0 * (1.0 - state.spin.parity_sign()) * nlc[0];
    let n = lc.iter().chain(&nlc).sum();
    (p_local + p_nonlocal, n)
}

/// Scaled `p_s` at `xi = eta = pi/4`, all directions equatorial:
/// `sin[2s(pa -/+ pb)] sin[2s(pa -/+ pc)] - |sin[2s(pb -/+ pc)]|`.
///
/// Only half-integer spins reduce to this form; integer spins have no
/// interference term in the subspace and are rejected.
pub fn equatorial_ps(
    spin: Spin,
    polarization: Polarization,
    phi_a: f64,
    phi_b: f64,
    phi_c: f64,
) -> Result<f64> {
    if !spin.is_half_integer() {
        return Err(Error::RequiresHalfInteger(spin.twice()));
    }
    let n = f64::from(spin.twice());
    let sg = polarization.azimuth_sign();
    let f = |x: f64, y: f64| (n * (x + sg * y)).sin();
    Ok(ps(f(phi_a, phi_b), f(phi_a, phi_c), f(phi_b, phi_c)))
}

/// `K^{4s} - G^{4s}` at `theta = pi/2`; zero for every spin.
pub fn equatorial_polarization_factor(spin: Spin) -> f64 {
    let eq = Direction::clamped(core::f64::consts::FRAC_PI_2, 0.0);
    DirFactors::new(spin, &eq).polarization()
}
