//! Measuring-outcome correlation `P(a,b) = Tr[(s.a (x) s.b) rho]` over the
//! whole `(2s+1)^2`-dimensional space, normalized as `p = P / s^2`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::cat_state::CatState;
use crate::error::{Error, Result};
use crate::linalg::{eigensystem, ComplexMatrix};
use crate::spin::Direction;
use crate::spin_algebra::projection_operator;
use crate::C64;

/// Imaginary parts of traces above this are reported as errors.
pub const IMAG_TOL: f64 = 1e-12;
/// Slack on the extended-BI bound.
pub const VIOLATION_TOL: f64 = 1e-12;
/// The eigenbasis cross-check is O(d^6); it is capped at this `2s`.
pub const EIGENBASIS_MAX_TWICE_S: u32 = 15;

/// Local, nonlocal and total correlation for one direction pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationReport {
    pub p_local: f64,
    pub p_nonlocal: f64,
    pub p_total: f64,
    /// Divisor turning raw `P` into `p` (`s^2`).
    pub normalization_used: f64,
    #[cfg_attr(feature = "serde", serde(rename = "raw_P_local"))]
    pub raw_p_local: f64,
    #[cfg_attr(feature = "serde", serde(rename = "raw_P_nonlocal"))]
    pub raw_p_nonlocal: f64,
    /// Probability mass of the state inside the measured outcome set: 1 for
    /// the full space, `N` for the SCS subspace.
    pub probability: f64,
}

impl CorrelationReport {
    pub(crate) fn from_raw(raw_local: f64, raw_nonlocal: f64, s2: f64, probability: f64) -> Self {
        let p_local = raw_local / s2;
        let p_nonlocal = raw_nonlocal / s2;
        Self {
            p_local,
            p_nonlocal,
            p_total: p_local + p_nonlocal,
            normalization_used: s2,
            raw_p_local: raw_local,
            raw_p_nonlocal: raw_nonlocal,
            probability,
        }
    }
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::ComplexTrace { imag: z.im });
    }
    Ok(z.re)
}

/// Direct trace in the product Dicke basis.
pub fn full_correlation(state: &CatState, a: &Direction, b: &Direction) -> Result<CorrelationReport> {
    let opa = projection_operator(state.spin, a);
    let opb = projection_operator(state.spin, b);
    let dd = state.density_decomposition();
    let raw_local = real_part(dd.rho_local.trace_with_kron(&opa, &opb)?)?;
    let raw_nonlocal = real_part(dd.rho_nonlocal.trace_with_kron(&opa, &opb)?)?;
    let prob = real_part(dd.rho_total.trace())?;
    Ok(CorrelationReport::from_raw(
        raw_local,
        raw_nonlocal,
        state.spin.squared(),
        prob,
    ))
}

/// Same quantity, summed as `sum m m' <a_m, b_m'| rho |a_m, b_m'>` over the
/// product eigenbasis of `s.a (x) s.b`. Validation path only.
pub fn full_correlation_via_eigenbasis(
    state: &CatState,
    a: &Direction,
    b: &Direction,
) -> Result<CorrelationReport> {
    let twice_s = state.spin.twice();
    if twice_s > EIGENBASIS_MAX_TWICE_S {
        return Err(Error::SpinTooLarge {
            twice_s,
            max: EIGENBASIS_MAX_TWICE_S,
        });
    }
    let ea = eigensystem(&projection_operator(state.spin, a))?;
    let eb = eigensystem(&projection_operator(state.spin, b))?;
    let dd = state.density_decomposition();

    let mut raw = [0.0_f64; 2];
    let mut prob = 0.0;
    for (ma, va) in ea.eigenvalues.iter().zip(&ea.eigenvectors) {
        for (mb, vb) in eb.eigenvalues.iter().zip(&eb.eigenvectors) {
            let v = va.kron(vb);
            let w = ma * mb;
            let lc = real_part(dd.rho_local.expectation(&v)?)?;
            let nlc = real_part(dd.rho_nonlocal.expectation(&v)?)?;
            raw[0] += w * lc;
            raw[1] += w * nlc;
            prob += lc + nlc;
        }
    }
    Ok(CorrelationReport::from_raw(
        raw[0],
        raw[1],
        state.spin.squared(),
        prob,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtendedBiCheck {
    pub lhs: f64,
    pub violated: bool,
}

/// `|p(a,b) - p(a,c)| - |p(b,c)| <= 1` with full-space total correlations.
pub fn extended_bi_check(
    state: &CatState,
    a: &Direction,
    b: &Direction,
    c: &Direction,
) -> Result<ExtendedBiCheck> {
    let pab = full_correlation(state, a, b)?.p_total;
    let pac = full_correlation(state, a, c)?.p_total;
    let pbc = full_correlation(state, b, c)?.p_total;
    let lhs = (pab - pac).abs() - pbc.abs();
    Ok(ExtendedBiCheck {
        lhs,
        violated: lhs > 1.0 + VIOLATION_TOL,
    })
}

/// Dense `s.a (x) s.b`, for callers that want the operator itself.
pub fn correlation_operator(state: &CatState, a: &Direction, b: &Direction) -> ComplexMatrix {
    projection_operator(state.spin, a).kron(&projection_operator(state.spin, b))
}
