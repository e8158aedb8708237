//! Spin matrices in the Dicke basis (`m = s, s-1, ..., -s`) and projection
//! operators along arbitrary directions.

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{ComplexMatrix, StateVector};
use crate::spin::{Direction, Spin};
use crate::C64;

/// Cartesian spin matrices `(Sx, Sy, Sz)` with Condon-Shortley phases.
pub fn spin_operators(spin: Spin) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let d = spin.dim();
    let twice_s = i64::from(spin.twice());
    let mut sx = ComplexMatrix::zeros(d, d);
    let mut sy = ComplexMatrix::zeros(d, d);
    let sz = ComplexMatrix::from_diagonal(&(0..d).map(|k| spin.m_at(k)).collect::<alloc::vec::Vec<_>>());

    // <m+1|S+|m> = sqrt((s-m)(s+m+1)); index k holds m = s - k, so S+ maps k -> k-1.
    for k in 1..d {
        let twice_m = twice_s - 2 * k as i64;
        let num = (twice_s - twice_m) * (twice_s + twice_m + 2);
        let elem = (num as f64 / 4.0).sqrt();
        // Sx = (S+ + S-)/2, Sy = (S+ - S-)/(2i)
        sx[(k - 1, k)] = C64::new(elem / 2.0, 0.0);
        sx[(k, k - 1)] = C64::new(elem / 2.0, 0.0);
        sy[(k - 1, k)] = C64::new(0.0, -elem / 2.0);
        sy[(k, k - 1)] = C64::new(0.0, elem / 2.0);
    }
    (sx, sy, sz)
}

/// `s . r = sin(theta)cos(phi) Sx + sin(theta)sin(phi) Sy + cos(theta) Sz`.
pub fn projection_operator(spin: Spin, r: &Direction) -> ComplexMatrix {
    let (sx, sy, sz) = spin_operators(spin);
    let [nx, ny, nz] = r.unit_vector();
    let d = spin.dim();
    ComplexMatrix::from_fn(d, d, |i, j| {
        sx[(i, j)] * nx + sy[(i, j)] * ny + sz[(i, j)] * nz
    })
}

/// Closed-form eigenstates of `s . r` for spin 3/2, ordered
/// `m = 3/2, 1/2, -1/2, -3/2`.
pub fn spin32_analytic_eigenstates(r: &Direction) -> [StateVector; 4] {
    let (s, c) = (r.theta() / 2.0).sin_cos();
    let e = |k: f64| C64::from_polar(1.0, k * r.phi());
    let r3 = 3.0_f64.sqrt();
    let ket = |a: [C64; 4]| StateVector::from_amplitudes(a.to_vec());
    let re = |x: f64| C64::new(x, 0.0);

    let up32 = ket([
        re(c * c * c),
        e(1.0) * (r3 * s * c * c),
        e(2.0) * (r3 * s * s * c),
        e(3.0) * (s * s * s),
    ]);
    let up12 = ket([
        re(r3 * s * c * c),
        e(1.0) * (-(1.0 - 3.0 * s * s) * c),
        e(2.0) * ((1.0 - 3.0 * c * c) * s),
        e(3.0) * (-r3 * s * s * c),
    ]);
    let dn12 = ket([
        re(r3 * s * s * c),
        e(1.0) * ((1.0 - 3.0 * c * c) * s),
        e(2.0) * ((1.0 - 3.0 * s * s) * c),
        e(3.0) * (r3 * s * c * c),
    ]);
    let dn32 = ket([
        re(s * s * s),
        e(1.0) * (-r3 * s * s * c),
        e(2.0) * (r3 * s * c * c),
        e(3.0) * (-c * c * c),
    ]);
    [up32, up12, dn12, dn32]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigensystem;
    use core::f64::consts::PI;

    fn spin(t: u32) -> Spin {
        Spin::new(t).unwrap()
    }

    #[test]
    fn sz_is_descending_diagonal() {
        let (_, _, sz) = spin_operators(spin(1));
        assert_eq!(sz, ComplexMatrix::from_diagonal(&[0.5, -0.5]));
        let (_, _, sz) = spin_operators(spin(3));
        assert_eq!(sz, ComplexMatrix::from_diagonal(&[1.5, 0.5, -0.5, -1.5]));
    }

    #[test]
    fn commutator_and_casimir() {
        for t in 1..=12 {
            let s = spin(t);
            let (sx, sy, sz) = spin_operators(s);
            let comm = &(&sx * &sy) - &(&sy * &sx);
            let isz = sz.scale(C64::new(0.0, 1.0));
            assert!(comm.max_abs_diff(&isz) <= 1e-12, "2s={t}");
            let cas = &(&(&sx * &sx) + &(&sy * &sy)) + &(&sz * &sz);
            let target = ComplexMatrix::identity(s.dim()).scale_real(s.value() * (s.value() + 1.0));
            assert!(cas.max_abs_diff(&target) <= 1e-11, "2s={t}");
            assert!(sx.is_hermitian() && sy.is_hermitian() && sz.is_hermitian());
        }
    }

    #[test]
    fn poles() {
        let s = spin(3);
        let (_, _, sz) = spin_operators(s);
        assert_eq!(projection_operator(s, &Direction::north()), sz);
        let south = projection_operator(s, &Direction::new(PI, 0.3).unwrap());
        assert!(south.max_abs_diff(&sz.scale_real(-1.0)) <= 1e-15);
    }

    #[test]
    fn spin32_equator_spectrum() {
        let op = projection_operator(spin(3), &Direction::new(PI / 2.0, 0.0).unwrap());
        let es = eigensystem(&op).unwrap();
        for (l, m) in es.eigenvalues.iter().zip([1.5, 0.5, -0.5, -1.5]) {
            assert!((l - m).abs() <= 1e-12);
        }
    }

    #[test]
    fn analytic_states_at_pole_and_equator() {
        let north = spin32_analytic_eigenstates(&Direction::north());
        assert_eq!(north[0], StateVector::basis(4, 0));

        let eq = Direction::new(PI / 2.0, 0.0).unwrap();
        let states = spin32_analytic_eigenstates(&eq);
        let k = 2.0_f64.powf(-1.5);
        let expect = StateVector::from_amplitudes(
            [1.0, 3f64.sqrt(), 3f64.sqrt(), 1.0]
                .iter()
                .map(|x| C64::new(x * k, 0.0))
                .collect(),
        );
        assert!(states[0].max_abs_diff(&expect) <= 1e-15);
        let numeric = eigensystem(&projection_operator(spin(3), &eq)).unwrap();
        assert!(numeric.eigenvectors[0].fidelity(&expect) >= 1.0 - 1e-12);
    }

    #[test]
    fn analytic_states_are_eigenvectors() {
        let s = spin(3);
        for i in 0..20 {
            let r = Direction::new(i as f64 * 0.157, i as f64 * 0.71).unwrap();
            let op = projection_operator(s, &r);
            for (v, m) in spin32_analytic_eigenstates(&r).iter().zip([1.5, 0.5, -0.5, -1.5]) {
                let res = op.mul_vec(v).unwrap().max_abs_diff(&v.scale(C64::new(m, 0.0)));
                assert!(res <= 1e-12);
            }
        }
    }
}
