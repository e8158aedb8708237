use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin must be at least 1/2 (got 2s = {0})")]
    TrivialSpin(u32),
    #[error("2s = {twice_s} exceeds the supported maximum {max}")]
    SpinTooLarge { twice_s: u32, max: u32 },
    #[error("invalid spin literal `{0}`; expected `k/2` or an integer")]
    SpinParse(alloc::string::String),
    #[error("{name} = {value} is outside its valid range")]
    InvalidAngle { name: &'static str, value: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("eigenvalues closer than the degeneracy threshold (gap {gap:e})")]
    DegenerateEigenvalues { gap: f64 },
    #[error("eigenpair residual {residual:e} above tolerance")]
    EigenResidual { residual: f64 },
    #[error("eigensolver did not converge")]
    EigenNoConvergence,
    #[error("trace has a non-negligible imaginary part {imag:e}")]
    ComplexTrace { imag: f64 },
    #[error("closed form for {what} disagrees with brute force: {closed} vs {brute}")]
    ClosedFormMismatch {
        what: &'static str,
        closed: f64,
        brute: f64,
    },
    #[error(
        "subspace probability N = {n:e} underflows at a = ({theta_a}, {phi_a}), b = ({theta_b}, {phi_b})"
    )]
    Underflow {
        n: f64,
        theta_a: f64,
        phi_a: f64,
        theta_b: f64,
        phi_b: f64,
    },
    #[error("local correlations violate the UBI (p_s = {p_s:e}); this is an internal bug")]
    LocalViolation { p_s: f64 },
    #[error("p_s = {p_s} exceeds the ceiling 1 + 1e-9; this is an internal bug")]
    BoundExceeded { p_s: f64 },
    #[error("operation requires half-integer spin (got 2s = {0})")]
    RequiresHalfInteger(u32),
    #[error("{samples} samples requested, at least {min} required")]
    TooFewSamples { samples: u64, min: u64 },
    #[error("quadrature grid of {points} points is outside 1..={max}")]
    GridSize { points: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

impl Error {
    /// Errors caused by bad caller input rather than numerical trouble.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::TrivialSpin(_)
                | Error::SpinTooLarge { .. }
                | Error::SpinParse(_)
                | Error::InvalidAngle { .. }
                | Error::TooFewSamples { .. }
                | Error::GridSize { .. }
                | Error::InvalidParameter(_)
                | Error::RequiresHalfInteger(_)
                | Error::Unsupported(_)
        )
    }
}
