//! Measurement restricted to spin coherent states.
//!
//! For a direction `r` the two SCSs are
//!
//! ```text
//! |+r> = sum_m C(2s, s+m)^{1/2} K^{s+m} G^{s-m} e^{i(s-m) phi}      |m>
//! |-r> = sum_m C(2s, s+m)^{1/2} K^{s-m} G^{s+m} e^{i(s-m)(phi+pi)} |m>
//! ```
//!
//! with `K = cos(theta/2)`, `G = sin(theta/2)`. The extra `(s-m) pi` in the
//! south-pole gauge is what produces the `(-1)^{2s}` factor between the
//! same-direction and opposite-direction interference terms.
//!
//! Outcomes are post-selected onto the four products `|1> = |+a,+b>`,
//! `|2> = |+a,-b>`, `|3> = |-a,+b>`, `|4> = |-a,-b>`. Every quantity is
//! computed twice: from closed forms and from explicit inner products. The
//! inner products are authoritative.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cat_state::{CatState, Polarization};
use crate::error::{Error, Result};
use crate::full_space::CorrelationReport;
use crate::linalg::StateVector;
use crate::spin::{Direction, Spin};
use crate::C64;

/// Closed forms must match brute force to this or the call fails.
pub const CONSISTENCY_TOL: f64 = 1e-10;
/// Smallest subspace probability accepted for scaling.
pub const UNDERFLOW_GUARD: f64 = 1e-300;

/// Phase convention for `|-r>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SouthGauge {
    /// `e^{i(s-m)(phi+pi)}`, the physical south-pole gauge.
    Standard,
    /// `e^{i(s-m)phi}`: the pole phase removed. `|-r>` then stops being an
    /// eigenstate; only useful for showing where the parity factor comes from.
    PolePhaseRemoved,
}

/// `(cos(theta/2), sin(theta/2))`, exactly zero at the poles.
pub fn half_angle_factors(theta: f64) -> (f64, f64) {
    let (g, k) = (theta / 2.0).sin_cos();
    let k = if theta == PI { 0.0 } else { k };
    let g = if theta == 0.0 { 0.0 } else { g };
    (k, g)
}

/// `x^n` for `x >= 0` evaluated as `exp(n ln x)`.
#[inline]
pub(crate) fn pow_log(x: f64, n: f64) -> f64 {
    if n == 0.0 {
        1.0
    } else if x <= 0.0 {
        0.0
    } else {
        (n * x.ln()).exp()
    }
}

fn ln_binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (1..=k)
        .map(|i| (f64::from(n - k + i) / f64::from(i)).ln())
        .sum()
}

/// The two extremal eigenstates of `s.r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScsPair {
    pub plus: StateVector,
    pub minus: StateVector,
    pub direction: Direction,
    pub spin: Spin,
}

pub fn scs_pair(spin: Spin, r: &Direction) -> ScsPair {
    scs_pair_in_gauge(spin, r, SouthGauge::Standard)
}

pub fn scs_pair_in_gauge(spin: Spin, r: &Direction, gauge: SouthGauge) -> ScsPair {
    let n = spin.twice();
    let (k, g) = half_angle_factors(r.theta());
    let (ln_k, ln_g) = (k.ln(), g.ln());
    let phi = r.phi();

    // Dicke index j holds m = s - j, so s + m = 2s - j and s - m = j.
    let magnitude = |j: u32, k_pow: u32, g_pow: u32| -> f64 {
        if (k_pow > 0 && k == 0.0) || (g_pow > 0 && g == 0.0) {
            return 0.0;
        }
        let mut ln = 0.5 * ln_binomial(n, j);
        if k_pow > 0 {
            ln += f64::from(k_pow) * ln_k;
        }
        if g_pow > 0 {
            ln += f64::from(g_pow) * ln_g;
        }
        ln.exp()
    };

    let mut plus = Vec::with_capacity(spin.dim());
    let mut minus = Vec::with_capacity(spin.dim());
    for j in 0..=n {
        let phase = C64::from_polar(1.0, f64::from(j) * phi);
        plus.push(phase * magnitude(j, n - j, j));
        let pole = match gauge {
            SouthGauge::Standard if j % 2 == 1 => -1.0,
            _ => 1.0,
        };
        minus.push(phase * (pole * magnitude(j, j, n - j)));
    }
    ScsPair {
        plus: StateVector::from_amplitudes(plus),
        minus: StateVector::from_amplitudes(minus),
        direction: *r,
        spin,
    }
}

/// The four post-selection vectors in the product Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub vectors: [StateVector; 4],
}

impl SubspaceBasis {
    pub fn new(a: &ScsPair, b: &ScsPair) -> Self {
        Self {
            vectors: [
                a.plus.kron(&b.plus),
                a.plus.kron(&b.minus),
                a.minus.kron(&b.plus),
                a.minus.kron(&b.minus),
            ],
        }
    }
}

/// Diagonal density-matrix elements `rho_ii = <i|rho|i>` split into local and
/// nonlocal parts, plus the amplitude factors they are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubspaceElements {
    pub rho_lc: [f64; 4],
    pub rho_nlc: [f64; 4],
    /// `N = sum_i rho_ii`.
    pub total_probability: f64,
    /// `cos(theta_a/2)`
    pub k_a: f64,
    /// `sin(theta_a/2)`
    pub gamma_a: f64,
    pub k_b: f64,
    pub gamma_b: f64,
}

impl SubspaceElements {
    fn assemble(rho_lc: [f64; 4], rho_nlc: [f64; 4], a: &Direction, b: &Direction) -> Self {
        let (k_a, gamma_a) = half_angle_factors(a.theta());
        let (k_b, gamma_b) = half_angle_factors(b.theta());
        let total_probability = rho_lc.iter().chain(&rho_nlc).sum();
        Self {
            rho_lc,
            rho_nlc,
            total_probability,
            k_a,
            gamma_a,
            k_b,
            gamma_b,
        }
    }

    /// `rho_11 - rho_22 - rho_33 + rho_44` of the local part.
    pub fn local_correlation(&self) -> f64 {
        signed_sum(&self.rho_lc)
    }

    pub fn nonlocal_correlation(&self) -> f64 {
        signed_sum(&self.rho_nlc)
    }
}

#[inline]
fn signed_sum(r: &[f64; 4]) -> f64 {
    (r[0] + r[3]) - (r[1] + r[2])
}

/// Per-direction powers used by the closed forms: `k = K^{2s}`, `g = G^{2s}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DirFactors {
    pub k: f64,
    pub g: f64,
    pub phi: f64,
}

impl DirFactors {
    pub fn new(spin: Spin, r: &Direction) -> Self {
        let (k, g) = half_angle_factors(r.theta());
        let n = f64::from(spin.twice());
        Self {
            k: pow_log(k, n),
            g: pow_log(g, n),
            phi: r.phi(),
        }
    }

    /// `K^{4s} - G^{4s}`.
    #[inline]
    pub fn polarization(&self) -> f64 {
        self.k * self.k - self.g * self.g
    }
}

/// Closed-form `rho_ii` for both polarizations.
pub(crate) fn closed_form_rho(
    state: &CatState,
    fa: &DirFactors,
    fb: &DirFactors,
) -> ([f64; 4], [f64; 4]) {
    let (w1, w2) = state.weights();
    let (ka2, ga2) = (fa.k * fa.k, fa.g * fa.g);
    let (kb2, gb2) = (fb.k * fb.k, fb.g * fb.g);
    let two_s = f64::from(state.spin.twice());
    let sin2xi = (2.0 * state.xi).sin();

    let lc = match state.polarization {
        Polarization::Antiparallel => [
            w1 * ka2 * gb2 + w2 * ga2 * kb2,
            w1 * ka2 * kb2 + w2 * ga2 * gb2,
            w1 * ga2 * gb2 + w2 * ka2 * kb2,
            w1 * ga2 * kb2 + w2 * ka2 * gb2,
        ],
        Polarization::Parallel => [
            w1 * ka2 * kb2 + w2 * ga2 * gb2,
            w1 * ka2 * gb2 + w2 * ga2 * kb2,
            w1 * ga2 * kb2 + w2 * ka2 * gb2,
            w1 * ga2 * gb2 + w2 * ka2 * kb2,
        ],
    };
    let azimuth = fa.phi + state.polarization.azimuth_sign() * fb.phi;
    let r11 = sin2xi * fa.k * fa.g * fb.k * fb.g * (two_s * azimuth + 2.0 * state.eta).cos();
    let r22 = state.spin.parity_sign() * r11;
    (lc, [r11, r22, r22, r11])
}

/// Closed forms only; no brute-force cross-check.
pub fn closed_form_elements(state: &CatState, a: &Direction, b: &Direction) -> SubspaceElements {
    let fa = DirFactors::new(state.spin, a);
    let fb = DirFactors::new(state.spin, b);
    let (lc, nlc) = closed_form_rho(state, &fa, &fb);
    SubspaceElements::assemble(lc, nlc, a, b)
}

/// `rho_ii` from explicit inner products `<i|P1>`, `<i|P2>` with the product
/// components of the cat-state.
pub fn brute_force_elements(
    state: &CatState,
    a: &Direction,
    b: &Direction,
    gauge: SouthGauge,
) -> SubspaceElements {
    let pa = scs_pair_in_gauge(state.spin, a, gauge);
    let pb = scs_pair_in_gauge(state.spin, b, gauge);
    let basis = SubspaceBasis::new(&pa, &pb);
    let d2 = state.spin.dim() * state.spin.dim();
    let [s1, s2] = state.component_slots();
    let (p1, p2) = (StateVector::basis(d2, s1), StateVector::basis(d2, s2));
    let (w1, w2) = state.weights();
    let coh = state.coherence();

    let mut lc = [0.0; 4];
    let mut nlc = [0.0; 4];
    for (i, v) in basis.vectors.iter().enumerate() {
        let o1 = v.inner(&p1);
        let o2 = v.inner(&p2);
        lc[i] = w1 * o1.norm_sqr() + w2 * o2.norm_sqr();
        // <i|P1><P2|i> c1 c2^* + c.c.
        nlc[i] = 2.0 * (coh * o1 * o2.conj()).re;
    }
    SubspaceElements::assemble(lc, nlc, a, b)
}

fn check(what: &'static str, closed: f64, brute: f64) -> Result<()> {
    if (closed - brute).abs() > CONSISTENCY_TOL {
        return Err(Error::ClosedFormMismatch {
            what,
            closed,
            brute,
        });
    }
    Ok(())
}

/// Subspace density elements, brute force checked against the closed forms.
pub fn subspace_elements(
    state: &CatState,
    a: &Direction,
    b: &Direction,
) -> Result<SubspaceElements> {
    let closed = closed_form_elements(state, a, b);
    let brute = brute_force_elements(state, a, b, SouthGauge::Standard);
    for i in 0..4 {
        check("rho_lc", closed.rho_lc[i], brute.rho_lc[i])?;
        check("rho_nlc", closed.rho_nlc[i], brute.rho_nlc[i])?;
    }
    Ok(brute)
}

/// Normalized correlation of the post-selected outcomes.
///
/// `p_local = rho_11 - rho_22 - rho_33 + rho_44` of the local part, which
/// equals `-/+ (K_a^{4s} - G_a^{4s})(K_b^{4s} - G_b^{4s})`. The nonlocal part
/// is reported as `2[1 - (-1)^{2s}] rho_11^{nlc}`, exactly zero for integer
/// spin.
pub fn subspace_correlation(
    state: &CatState,
    a: &Direction,
    b: &Direction,
) -> Result<CorrelationReport> {
    let el = subspace_elements(state, a, b)?;
    let fa = DirFactors::new(state.spin, a);
    let fb = DirFactors::new(state.spin, b);

    let p_local = el.local_correlation();
    check(
        "p_local",
        state.polarization.local_sign() * fa.polarization() * fb.polarization(),
        p_local,
    )?;
    let p_nonlocal = 2.0 * (1.0 - state.spin.parity_sign()) * el.rho_nlc[0];
    check("p_nonlocal", p_nonlocal, el.nonlocal_correlation())?;

    let s2 = state.spin.squared();
    Ok(CorrelationReport::from_raw(
        p_local * s2,
        p_nonlocal * s2,
        s2,
        el.total_probability,
    ))
}

/// `p(a,b) / N`, the correlation conditioned on landing in the subspace.
pub fn scaled_subspace_correlation(state: &CatState, a: &Direction, b: &Direction) -> Result<f64> {
    let rep = subspace_correlation(state, a, b)?;
    scale_by_probability(rep.p_total, rep.probability, a, b)
}

pub(crate) fn scale_by_probability(p: f64, n: f64, a: &Direction, b: &Direction) -> Result<f64> {
    if !(n > UNDERFLOW_GUARD) {
        return Err(Error::Underflow {
            n,
            theta_a: a.theta(),
            phi_a: a.phi(),
            theta_b: b.theta(),
            phi_b: b.phi(),
        });
    }
    Ok(p / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigensystem;
    use crate::spin_algebra::{projection_operator, spin32_analytic_eigenstates};
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn dir(t: f64, p: f64) -> Direction {
        Direction::new(t, p).unwrap()
    }

    #[test]
    fn north_pole_pair_is_extremal_dicke_pair() {
        let s = Spin::new(5).unwrap();
        let pair = scs_pair(s, &Direction::north());
        assert_eq!(pair.plus, StateVector::basis(6, 0));
        // the pole gauge leaves (-1)^{2s} on |-s>
        assert_eq!(pair.minus, StateVector::basis(6, 5).scale(C64::new(-1.0, 0.0)));
    }

    #[test]
    fn scs_are_extremal_eigenstates() {
        for t in [1, 2, 3, 6, 11, 30, 60] {
            let s = Spin::new(t).unwrap();
            let r = dir(1.234, 4.321);
            let pair = scs_pair(s, &r);
            let op = projection_operator(s, &r);
            let sv = C64::new(s.value(), 0.0);
            let res_p = op.mul_vec(&pair.plus).unwrap().max_abs_diff(&pair.plus.scale(sv));
            let res_m = op.mul_vec(&pair.minus).unwrap().max_abs_diff(&pair.minus.scale(-sv));
            assert!(res_p <= 1e-11 && res_m <= 1e-11, "2s={t}: {res_p:e} {res_m:e}");
            assert!((pair.plus.norm_sqr() - 1.0).abs() <= 1e-12);
            assert!((pair.minus.norm_sqr() - 1.0).abs() <= 1e-12);
            assert!(pair.plus.inner(&pair.minus).norm() <= 1e-12);
        }
    }

    #[test]
    fn spin32_scs_match_analytic_table() {
        let s = Spin::new(3).unwrap();
        let r = dir(0.9, 2.2);
        let pair = scs_pair(s, &r);
        let table = spin32_analytic_eigenstates(&r);
        assert!(pair.plus.max_abs_diff(&table[0]) <= 1e-15);
        assert!(pair.minus.fidelity(&table[3]) >= 1.0 - 1e-14);
        // and both agree with the numerical eigenvectors up to phase
        let es = eigensystem(&projection_operator(s, &r)).unwrap();
        assert!(es.eigenvectors[0].fidelity(&pair.plus) >= 1.0 - 1e-12);
        assert!(es.eigenvectors[3].fidelity(&pair.minus) >= 1.0 - 1e-12);
    }

    #[test]
    fn worked_spin32_local_elements() {
        let st = CatState::new(Spin::new(3).unwrap(), Polarization::Antiparallel, FRAC_PI_4, 0.0);
        let a = dir(FRAC_PI_3, 0.0);
        let el = subspace_elements(&st, &a, &a).unwrap();
        assert!((el.rho_lc[0] - 27.0 / 4096.0).abs() <= 1e-15);
        let rep = subspace_correlation(&st, &a, &a).unwrap();
        assert!((rep.p_local + 169.0 / 1024.0).abs() <= 1e-14);
    }

    #[test]
    fn integer_spin_parity_factor_is_plus_one() {
        let st = CatState::new(Spin::new(4).unwrap(), Polarization::Antiparallel, 0.5, 0.2);
        let el = subspace_elements(&st, &dir(1.0, 0.3), &dir(2.0, 1.4)).unwrap();
        assert!(el.rho_nlc[0].abs() > 1e-6);
        assert!((el.rho_nlc[1] - el.rho_nlc[0]).abs() <= 1e-13);
        let rep = subspace_correlation(&st, &dir(1.0, 0.3), &dir(2.0, 1.4)).unwrap();
        assert_eq!(rep.p_nonlocal, 0.0);
    }

    #[test]
    fn equatorial_normalization() {
        for t in [1, 3, 5, 7] {
            let st = CatState::new(Spin::new(t).unwrap(), Polarization::Parallel, 0.3, 1.0);
            let el = subspace_elements(&st, &dir(FRAC_PI_2, 0.4), &dir(FRAC_PI_2, 2.9)).unwrap();
            let expect = 2f64.powi(-2 * (t as i32 - 1));
            assert!((el.total_probability - expect).abs() <= 1e-13);
        }
    }

    #[test]
    fn spin32_scaled_maximum() {
        let st = CatState::new(Spin::new(3).unwrap(), Polarization::Antiparallel, FRAC_PI_4, FRAC_PI_4);
        let p = scaled_subspace_correlation(&st, &dir(FRAC_PI_2, FRAC_PI_2), &dir(FRAC_PI_2, 0.0))
            .unwrap();
        assert!((p - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn underflow_is_reported() {
        // integer spin: destructive interference empties the subspace
        let st = CatState::new(Spin::new(2).unwrap(), Polarization::Antiparallel, FRAC_PI_4, FRAC_PI_2);
        let eq = dir(FRAC_PI_2, 0.0);
        let err = scaled_subspace_correlation(&st, &eq, &eq).unwrap_err();
        assert!(matches!(err, Error::Underflow { .. }));
    }

    #[test]
    fn large_spin_pole_has_no_underflow() {
        let st = CatState::new(Spin::new(60).unwrap(), Polarization::Antiparallel, 0.3, 0.1);
        let p = scaled_subspace_correlation(&st, &Direction::north(), &dir(1.0, 0.5)).unwrap();
        assert!(p.is_finite());
    }

    #[test]
    fn binomial_log_domain() {
        assert!((ln_binomial(60, 30).exp() - 118264581564861424.0).abs() / 1.18e17 < 1e-12);
        assert_eq!(ln_binomial(7, 0), 0.0);
        assert_eq!(ln_binomial(7, 7), 0.0);
    }
}
