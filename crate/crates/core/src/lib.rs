//! Quantum-probability analysis of two-spin Bell cat-states of arbitrary spin `s`.
//!
//! The crate covers:
//!
//! * spin matrices in the Dicke basis and eigen-decomposition of projection
//!   operators ([`spin_algebra`], [`linalg`]),
//! * antiparallel and parallel cat-states with their local/nonlocal density
//!   split ([`cat_state`]),
//! * measuring-outcome correlations over the full Hilbert space
//!   ([`full_space`]) and over the spin-coherent-state subspace ([`scs`]),
//! * the universal Bell-type inequality and a search for its maximum
//!   violation ([`ubi`], [`search`]),
//! * classical local-hidden-variable models used as an oracle for the
//!   inequality's classical side ([`lhv`]).
//!
//! Everything here is pure computation. The crate is `no_std` (with `alloc`)
//! when the default `std` feature is disabled; `std` only adds rayon-backed
//! parallel sweeps.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cat_state;
pub mod error;
pub mod full_space;
pub mod lhv;
pub mod linalg;
pub mod scs;
pub mod search;
pub mod spin;
pub mod spin_algebra;
pub mod ubi;

mod par;

pub use cat_state::{make_cat_state, CatState, DensityDecomposition, Polarization};
pub use error::{Error, Result};
pub use full_space::{
    extended_bi_check, full_correlation, full_correlation_via_eigenbasis, CorrelationReport,
    ExtendedBiCheck,
};
pub use lhv::{
    builtin_models, estimate, exhaustive_check, ExhaustiveResult, HiddenVariableModel, LhvEstimate,
    LhvModel, OutcomeRule,
};
pub use linalg::{eigensystem, ComplexMatrix, EigenSystem, StateVector};
pub use scs::{
    scaled_subspace_correlation, scs_pair, subspace_correlation, subspace_elements, ScsPair,
    SubspaceBasis, SubspaceElements,
};
pub use search::{max_violation_search, Normalization, SearchConfig, ViolationSearchResult};
pub use spin::{Direction, Spin};
pub use spin_algebra::{projection_operator, spin32_analytic_eigenstates, spin_operators};
pub use ubi::{equatorial_ps, ubi_local, ubi_quantum, UbiReport};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
