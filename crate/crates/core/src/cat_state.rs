//! Two-spin Bell cat-states and the local/nonlocal split of their density
//! operator.
//!
//! The product Dicke basis is ordered `|m1, m2>` with index `k1 * d + k2`,
//! where `k` is the descending Dicke index of each factor.

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{ComplexMatrix, StateVector};
use crate::spin::{reduce_angle, Spin};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Polarization {
    /// `c1|+s,-s> + c2|-s,+s>`
    Antiparallel,
    /// `c1|+s,+s> + c2|-s,-s>`
    Parallel,
}

impl Polarization {
    /// Sign of the local correlation: `-1` antiparallel, `+1` parallel.
    #[inline]
    pub fn local_sign(self) -> f64 {
        match self {
            Polarization::Antiparallel => -1.0,
            Polarization::Parallel => 1.0,
        }
    }

    /// Sign combining the two azimuths in the interference phase
    /// (`phi_a - phi_b` antiparallel, `phi_a + phi_b` parallel).
    #[inline]
    pub fn azimuth_sign(self) -> f64 {
        self.local_sign()
    }

    pub const ALL: [Polarization; 2] = [Polarization::Antiparallel, Polarization::Parallel];
}

/// `c1 |P1> + c2 |P2>` with `c1 = e^{i eta} sin xi`, `c2 = e^{-i eta} cos xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CatState {
    pub spin: Spin,
    pub polarization: Polarization,
    pub xi: f64,
    pub eta: f64,
}

impl CatState {
    pub fn new(spin: Spin, polarization: Polarization, xi: f64, eta: f64) -> Self {
        Self {
            spin,
            polarization,
            xi,
            eta,
        }
    }

    pub fn coefficients(&self) -> (C64, C64) {
        let (s, c) = self.xi.sin_cos();
        (
            C64::from_polar(1.0, self.eta) * s,
            C64::from_polar(1.0, -self.eta) * c,
        )
    }

    /// `sin^2 xi` and `cos^2 xi`.
    pub fn weights(&self) -> (f64, f64) {
        let (s, c) = self.xi.sin_cos();
        (s * s, c * c)
    }

    /// `c1 c2^* = sin xi cos xi e^{2 i eta}`.
    pub fn coherence(&self) -> C64 {
        let (c1, c2) = self.coefficients();
        c1 * c2.conj()
    }

    /// Dicke indices `(k1, k2)` of the two product components.
    pub fn component_indices(&self) -> [(usize, usize); 2] {
        let top = self.spin.dim() - 1;
        match self.polarization {
            Polarization::Antiparallel => [(0, top), (top, 0)],
            Polarization::Parallel => [(0, 0), (top, top)],
        }
    }

    /// Flat product-basis slots of the two components.
    pub fn component_slots(&self) -> [usize; 2] {
        let d = self.spin.dim();
        self.component_indices().map(|(i, j)| i * d + j)
    }

    pub fn state_vector(&self) -> StateVector {
        let d = self.spin.dim();
        let (c1, c2) = self.coefficients();
        let [p1, p2] = self.component_slots();
        let mut v = StateVector::zeros(d * d);
        v.amplitudes_mut()[p1] = c1;
        v.amplitudes_mut()[p2] = c2;
        v
    }

    /// `xi` reduced into `[0, 2pi)`, for reporting.
    pub fn reduced_xi(&self) -> f64 {
        reduce_angle(self.xi)
    }

    pub fn reduced_eta(&self) -> f64 {
        reduce_angle(self.eta)
    }

    /// Dense density operator split into populations and coherences.
    ///
    /// Memory grows as `(2s+1)^4`: about 220 MB per matrix at `s = 30`.
    pub fn density_decomposition(&self) -> DensityDecomposition {
        let d = self.spin.dim();
        let n = d * d;
        let (w1, w2) = self.weights();
        let coh = self.coherence();
        let [p1, p2] = self.component_slots();

        let mut local = ComplexMatrix::zeros(n, n);
        local[(p1, p1)] = C64::new(w1, 0.0);
        local[(p2, p2)] = C64::new(w2, 0.0);

        let mut nonlocal = ComplexMatrix::zeros(n, n);
        nonlocal[(p1, p2)] = coh;
        nonlocal[(p2, p1)] = coh.conj();

        let total = &local + &nonlocal;
        DensityDecomposition {
            rho_total: total,
            rho_local: local,
            rho_nonlocal: nonlocal,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityDecomposition {
    pub rho_total: ComplexMatrix,
    pub rho_local: ComplexMatrix,
    pub rho_nonlocal: ComplexMatrix,
}

/// Free-function form of [`CatState::new`] returning the ket as well.
pub fn make_cat_state(
    spin: Spin,
    polarization: Polarization,
    xi: f64,
    eta: f64,
) -> (CatState, StateVector) {
    let st = CatState::new(spin, polarization, xi, eta);
    let v = st.state_vector();
    (st, v)
}
