//! Values checked against independent computations: hand-built Pauli
//! algebra, closed forms derived separately from the library's, and
//! analytic averages for the classical models.

mod common;

use bellcat_core::lhv::{estimate, exhaustive_check, LhvModel, OutcomeRule};
use bellcat_core::scs::{brute_force_elements, SouthGauge};
use bellcat_core::*;
use common::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

type M4 = [[C64; 4]; 4];

fn pauli_along(d: &Direction) -> [[C64; 2]; 2] {
    let [x, y, z] = d.unit_vector();
    [
        [C64::new(z, 0.0), C64::new(x, -y)],
        [C64::new(x, y), C64::new(-z, 0.0)],
    ]
}

fn kron2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> M4 {
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[i / 2][j / 2] * b[i % 2][j % 2];
        }
    }
    m
}

/// `<psi| sigma.a (x) sigma.b |psi>` for spin 1/2, built without the library.
fn pauli_correlation(st: &CatState, a: &Direction, b: &Direction) -> f64 {
    let (s, c) = st.xi.sin_cos();
    let c1 = C64::from_polar(s, st.eta);
    let c2 = C64::from_polar(c, -st.eta);
    let mut psi = [C64::new(0.0, 0.0); 4];
    match st.polarization {
        Polarization::Antiparallel => {
            psi[1] = c1;
            psi[2] = c2;
        }
        Polarization::Parallel => {
            psi[0] = c1;
            psi[3] = c2;
        }
    }
    let m = kron2(&pauli_along(a), &pauli_along(b));
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += psi[i].conj() * m[i][j] * psi[j];
        }
    }
    acc.re
}

fn qc_half(st: &CatState, a: &Direction, b: &Direction) -> f64 {
    let sg = st.polarization.local_sign();
    sg * a.theta().cos() * b.theta().cos()
        + (2.0 * st.xi).sin()
            * a.theta().sin()
            * b.theta().sin()
            * (a.phi() + sg * b.phi() + 2.0 * st.eta).cos()
}

#[test]
fn spin_half_full_space_equals_pauli_algebra() {
    let mut r = rng(11);
    for pol in Polarization::ALL {
        for _ in 0..200 {
            let st = random_state(&mut r, Spin::half(), pol);
            let (a, b) = (random_direction(&mut r), random_direction(&mut r));
            let want = pauli_correlation(&st, &a, &b);
            let got = full_correlation(&st, &a, &b).unwrap();
            assert!((got.p_total - want).abs() <= 1e-13);
            assert!((want - qc_half(&st, &a, &b)).abs() <= 1e-13);
        }
    }
}

#[test]
fn spin_half_subspace_is_whole_space() {
    let mut r = rng(12);
    for pol in Polarization::ALL {
        for _ in 0..200 {
            let st = random_state(&mut r, Spin::half(), pol);
            let (a, b) = (random_direction(&mut r), random_direction(&mut r));
            let sub = subspace_correlation(&st, &a, &b).unwrap();
            assert!((sub.probability - 1.0).abs() <= 1e-13);
            assert!((sub.p_total - pauli_correlation(&st, &a, &b)).abs() <= 1e-13);
            let scaled = scaled_subspace_correlation(&st, &a, &b).unwrap();
            assert!((scaled - sub.p_total).abs() <= 1e-13);
        }
    }
}

#[test]
fn spin32_worked_values() {
    let st = CatState::new(spin(3), Polarization::Antiparallel, 0.4, 1.1);
    let r = full_correlation(&st, &Direction::north(), &Direction::north()).unwrap();
    assert!((r.raw_p_local + 9.0 / 4.0).abs() <= 1e-14);

    let st = CatState::new(spin(3), Polarization::Antiparallel, FRAC_PI_4, 0.0);
    let a = dir(FRAC_PI_3, 0.0);
    let el = subspace_elements(&st, &a, &a).unwrap();
    // K = sqrt(3)/2, G = 1/2: (1/2)(K^6 G^6 + G^6 K^6) = (27/64)(1/64)
    assert!((el.rho_lc[0] - 27.0 / 4096.0).abs() <= 1e-16);
    let rep = subspace_correlation(&st, &a, &a).unwrap();
    assert!((rep.p_local + (13.0f64 / 32.0).powi(2)).abs() <= 1e-15);
}

#[test]
fn full_space_local_part_is_cosine_product() {
    let mut r = rng(13);
    for t in 1..=8 {
        for pol in Polarization::ALL {
            for _ in 0..10 {
                let st = random_state(&mut r, spin(t), pol);
                let (a, b) = (random_direction(&mut r), random_direction(&mut r));
                let rep = full_correlation(&st, &a, &b).unwrap();
                let want = pol.local_sign() * a.theta().cos() * b.theta().cos();
                assert!((rep.p_local - want).abs() <= 1e-12);
            }
        }
    }
}

/// `|<i|P>|^2` products written directly from the SCS amplitudes at the two
/// extreme Dicke slots: only `K^{2s}` and `G^{2s}` survive.
#[test]
fn subspace_local_part_matches_pole_amplitudes() {
    let mut r = rng(14);
    for t in 1..=7 {
        for pol in Polarization::ALL {
            let st = random_state(&mut r, spin(t), pol);
            let (a, b) = (random_direction(&mut r), random_direction(&mut r));
            let n = f64::from(t);
            let ka = (a.theta() / 2.0).cos().powf(2.0 * n);
            let ga = (a.theta() / 2.0).sin().powf(2.0 * n);
            let kb = (b.theta() / 2.0).cos().powf(2.0 * n);
            let gb = (b.theta() / 2.0).sin().powf(2.0 * n);
            let want = pol.local_sign() * (ka - ga) * (kb - gb);
            let got = subspace_correlation(&st, &a, &b).unwrap().p_local;
            assert!((got - want).abs() <= 1e-13);
        }
    }
}

#[test]
fn equatorial_unscaled_correlation() {
    let mut r = rng(15);
    for t in [1, 3, 5, 7, 9] {
        for pol in Polarization::ALL {
            let st = random_state(&mut r, spin(t), pol);
            let (a, b) = (random_equatorial(&mut r), random_equatorial(&mut r));
            let n = f64::from(t);
            let phase = n * (a.phi() + pol.azimuth_sign() * b.phi()) + 2.0 * st.eta;
            let want = 2f64.powf(-2.0 * (n - 1.0)) * (2.0 * st.xi).sin() * phase.cos();
            let got = subspace_correlation(&st, &a, &b).unwrap().p_total;
            assert!((got - want).abs() <= 1e-14, "2s={t}");
        }
    }
}

#[test]
fn equatorial_scaled_is_negative_sine() {
    let mut r = rng(16);
    for t in [1, 3, 5, 7] {
        for pol in Polarization::ALL {
            let st = CatState::new(spin(t), pol, FRAC_PI_4, FRAC_PI_4);
            for _ in 0..20 {
                let (a, b) = (random_equatorial(&mut r), random_equatorial(&mut r));
                let x = f64::from(t) * (a.phi() + pol.azimuth_sign() * b.phi());
                let got = scaled_subspace_correlation(&st, &a, &b).unwrap();
                assert!((got + x.sin()).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn spin32_scaled_example() {
    let st = CatState::new(spin(3), Polarization::Antiparallel, FRAC_PI_4, FRAC_PI_4);
    let v = scaled_subspace_correlation(&st, &dir(FRAC_PI_2, FRAC_PI_2), &dir(FRAC_PI_2, 0.0))
        .unwrap();
    assert!((v - (3.0 * FRAC_PI_2 + FRAC_PI_2).cos()).abs() <= 1e-12);
}

#[test]
fn integer_spin_equatorial_probability() {
    let mut r = rng(17);
    for t in [2, 4, 6] {
        for pol in Polarization::ALL {
            let st = random_state(&mut r, spin(t), pol);
            let (a, b) = (random_equatorial(&mut r), random_equatorial(&mut r));
            let n = f64::from(t);
            let phase = n * (a.phi() + pol.azimuth_sign() * b.phi()) + 2.0 * st.eta;
            let want = 2f64.powf(2.0 - 2.0 * n) * (1.0 + (2.0 * st.xi).sin() * phase.cos());
            let el = subspace_elements(&st, &a, &b).unwrap();
            assert!((el.total_probability - want).abs() <= 1e-14);
        }
    }
}

#[test]
fn pole_phase_removal_flips_half_integer_parity_only() {
    let mut r = rng(18);
    for t in 1..=6 {
        let st = CatState::new(spin(t), Polarization::Antiparallel, 0.6, 0.3);
        let (a, b) = (random_direction(&mut r), random_direction(&mut r));
        let std = brute_force_elements(&st, &a, &b, SouthGauge::Standard);
        let alt = brute_force_elements(&st, &a, &b, SouthGauge::PolePhaseRemoved);
        let parity = if t % 2 == 1 { -1.0 } else { 1.0 };
        assert!((std.rho_nlc[1] - parity * std.rho_nlc[0]).abs() <= 1e-13);
        // without the pole phase the relative sign is always +1
        assert!((alt.rho_nlc[1] - alt.rho_nlc[0]).abs() <= 1e-13);
    }
}

#[test]
fn max_violating_states() {
    let a = dir(FRAC_PI_2, FRAC_PI_2);
    let b = dir(FRAC_PI_2, 0.0);
    for pol in Polarization::ALL {
        let (st, v) = make_cat_state(Spin::half(), pol, FRAC_PI_4, FRAC_PI_4);
        let slots = st.component_slots();
        let h = 0.5f64.sqrt();
        assert!((v.amplitudes()[slots[0]] - C64::from_polar(h, FRAC_PI_4)).norm() <= 1e-15);
        assert!((v.amplitudes()[slots[1]] - C64::from_polar(h, -FRAC_PI_4)).norm() <= 1e-15);
        let rep = ubi_quantum(&st, &a, &b, &b, true).unwrap();
        assert!((rep.p_s - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn spin_half_full_space_breaks_extended_bi() {
    let mut r = rng(19);
    let st = CatState::new(Spin::half(), Polarization::Antiparallel, FRAC_PI_4, FRAC_PI_4);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..20_000 {
        let (a, b, c) = (
            random_direction(&mut r),
            random_direction(&mut r),
            random_direction(&mut r),
        );
        best = best.max(extended_bi_check(&st, &a, &b, &c).unwrap().lhs);
    }
    assert!(best > 1.2, "{best}");
}

#[test]
fn sign_model_great_circle_average() {
    let mut r = rng(20);
    for pol in Polarization::ALL {
        let m = LhvModel::new(OutcomeRule::Sign, pol, 1.0).unwrap();
        for seed in 0..5 {
            let (a, b, c) = (
                random_direction(&mut r),
                random_direction(&mut r),
                random_direction(&mut r),
            );
            let e = estimate(&m, &a, &b, &c, 100_000, seed).unwrap();
            let want =
                |x: &Direction, y: &Direction| pol.local_sign() * (1.0 - 2.0 * x.angle_to(y) / PI);
            assert!((e.p_ab - want(&a, &b)).abs() <= 4.0 * e.se_ab.max(1e-3));
            assert!((e.p_bc - want(&b, &c)).abs() <= 4.0 * e.se_bc.max(1e-3));
        }
    }
}

#[test]
fn phase_model_triangle_wave() {
    let mut r = rng(21);
    for k in [1u32, 3] {
        let m = LhvModel::new(OutcomeRule::Phase { k }, Polarization::Parallel, 1.0).unwrap();
        for _ in 0..20 {
            let (a, b) = (random_direction(&mut r), random_direction(&mut r));
            let ex = exhaustive_check(&m, &a, &b, &b, 1 << 16).unwrap();
            let mut d = (f64::from(k) * (a.phi() - b.phi())).rem_euclid(2.0 * PI);
            if d > PI {
                d = 2.0 * PI - d;
            }
            let want = 1.0 - 2.0 * d / PI;
            assert!((ex.p_ab - want).abs() <= 2.0 / f64::from(1 << 16) * 2.0);
        }
    }
}
