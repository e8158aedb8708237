//! Dense complex matrices and kets, plus a Hermitian eigen-decomposition with
//! a deterministic ordering and phase convention.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

/// Hermiticity tolerance, relative to `max(1, max |M_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-13;
/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Eigenpair residual ceiling `||M v - lambda v||`, relative to `max(1, ||M||_max)`.
pub const RESIDUAL_TOL: f64 = 1e-11;
/// Amplitudes below this magnitude are skipped when fixing the phase.
const PHASE_FLOOR: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A_ij - B_ij|`; infinite when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M^dagger|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_TOL * self.max_abs().max(1.0)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &StateVector) -> Result<StateVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.dim(),
            });
        }
        let amps = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.amplitudes())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(StateVector::from_amplitudes(amps))
    }

    /// Kronecker product `self (x) rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        Self::from_fn(rows, cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    /// `Tr[(A (x) B) self]` without materializing the Kronecker product.
    ///
    /// `self` must be `(da*db) x (da*db)`.
    pub fn trace_with_kron(&self, a: &Self, b: &Self) -> Result<C64> {
        let (da, db) = (a.rows, b.rows);
        if !a.is_square() || !b.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows,
                cols: a.cols,
            });
        }
        if self.rows != da * db || self.cols != da * db {
            return Err(Error::DimensionMismatch {
                left: self.rows,
                right: da * db,
            });
        }
        // Tr[(A(x)B) rho] = sum_{i,j,k,l} A_ik B_jl rho_{(k,l),(i,j)}
        let mut acc = ZERO;
        for k in 0..da {
            for l in 0..db {
                let row = &self.data[(k * db + l) * self.cols..(k * db + l + 1) * self.cols];
                for i in 0..da {
                    let aik = a[(i, k)];
                    if aik == ZERO {
                        continue;
                    }
                    for j in 0..db {
                        let r = row[i * db + j];
                        if r != ZERO {
                            acc += aik * b[(j, l)] * r;
                        }
                    }
                }
            }
        }
        Ok(acc)
    }

    /// `<v| self |v>`.
    pub fn expectation(&self, v: &StateVector) -> Result<C64> {
        let mv = self.mul_vec(v)?;
        Ok(v.inner(&mv))
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

/// A ket in some fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            amplitudes: vec![ZERO; dim],
        }
    }

    /// Unit vector `|k>` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amplitudes[k] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for z in &mut self.amplitudes {
                *z /= n;
            }
        }
        self
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        Self { amplitudes: amps }
    }

    /// `|self><other|`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), other.dim(), |i, j| {
            self.amplitudes[i] * other.amplitudes[j].conj()
        })
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `|<self|other>|`, the overlap modulo global phase for unit vectors.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// Rotates the global phase so the first amplitude with magnitude above
    /// `floor` is real and positive.
    pub fn with_canonical_phase(mut self, floor: f64) -> Self {
        if let Some(lead) = self.amplitudes.iter().find(|z| z.norm() > floor) {
            let rot = lead.conj() / lead.norm();
            for z in &mut self.amplitudes {
                *z *= rot;
            }
        }
        self
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
}

impl EigenSystem {
    /// `sum_k lambda_k |v_k><v_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let amps = v.amplitudes();
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += amps[i] * amps[j].conj() * *lam;
                }
            }
        }
        m
    }

    /// `max |<v_i|v_j> - delta_ij|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, u) in self.eigenvectors.iter().enumerate() {
            for (j, v) in self.eigenvectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((u.inner(v) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues come back in descending order. Each eigenvector's global phase
/// is fixed so its first non-negligible amplitude (scanning from index 0,
/// i.e. `m = +s` in the Dicke basis) is real and positive. Nearly degenerate
/// spectra are rejected because their eigenvectors are not unique.
pub fn eigensystem(op: &ComplexMatrix) -> Result<EigenSystem> {
    if !op.is_square() {
        return Err(Error::NotSquare {
            rows: op.rows(),
            cols: op.cols(),
        });
    }
    let scale = op.max_abs().max(1.0);
    let deviation = op.hermitian_deviation();
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }
    let n = op.rows();
    if n == 0 {
        return Ok(EigenSystem {
            eigenvalues: Vec::new(),
            eigenvectors: Vec::new(),
        });
    }

    let eig = SymmetricEigen::try_new(op.to_nalgebra(), f64::EPSILON, 0)
        .ok_or(Error::EigenNoConvergence)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if let Some(gap) = eigenvalues
        .windows(2)
        .map(|w| w[0] - w[1])
        .find(|&g| g < DEGENERACY_TOL)
    {
        return Err(Error::DegenerateEigenvalues { gap });
    }

    let eigenvectors: Vec<StateVector> = order
        .iter()
        .map(|&i| {
            let col = eig.eigenvectors.column(i);
            StateVector::from_amplitudes(col.iter().copied().collect())
                .normalized()
                .with_canonical_phase(PHASE_FLOOR)
        })
        .collect();

    let mut residual = 0.0_f64;
    for (lam, v) in eigenvalues.iter().zip(&eigenvectors) {
        let mv = op.mul_vec(v)?;
        let r = mv
            .amplitudes()
            .iter()
            .zip(v.amplitudes())
            .map(|(a, b)| (a - b * *lam).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r);
    }
    if residual > RESIDUAL_TOL * scale {
        return Err(Error::EigenResidual { residual });
    }

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(rng.gen_range(-2.0..2.0), 0.0);
            for j in i + 1..n {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn diagonal_matrix_gives_standard_basis() {
        let m = ComplexMatrix::from_diagonal(&[1.0, 0.0, -1.0]);
        let es = eigensystem(&m).unwrap();
        assert_eq!(es.eigenvalues.len(), 3);
        for (k, v) in es.eigenvectors.iter().enumerate() {
            assert!(v.max_abs_diff(&StateVector::basis(3, k)) <= 1e-15);
            assert!((es.eigenvalues[k] - (1.0 - k as f64)).abs() <= 1e-15);
        }
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 4, 4, 4, 7] {
            let m = random_hermitian(n, &mut rng);
            let es = eigensystem(&m).unwrap();
            assert!(es.reconstruct().max_abs_diff(&m) <= 1e-11);
            assert!(es.orthonormality_residual() <= 1e-12);
            assert!(es.eigenvalues.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = C64::new(0.5, 0.0);
        assert!(matches!(eigensystem(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn degenerate_rejected() {
        let m = ComplexMatrix::identity(3);
        assert!(matches!(
            eigensystem(&m),
            Err(Error::DegenerateEigenvalues { .. })
        ));
    }

    #[test]
    fn phase_convention_leading_amplitude_real_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_hermitian(5, &mut rng);
        for v in eigensystem(&m).unwrap().eigenvectors {
            let lead = v.amplitudes().iter().find(|z| z.norm() > 1e-10).unwrap();
            assert!(lead.re > 0.0);
            assert!(lead.im.abs() <= 1e-15);
        }
    }

    #[test]
    fn trace_with_kron_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(3, &mut rng);
        let b = random_hermitian(2, &mut rng);
        let rho = random_hermitian(6, &mut rng);
        let dense = (&a.kron(&b) * &rho).trace();
        let fast = rho.trace_with_kron(&a, &b).unwrap();
        assert!((dense - fast).norm() <= 1e-13);
    }
}
