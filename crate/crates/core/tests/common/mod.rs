#![allow(dead_code)]

use bellcat_core::{CatState, Direction, Polarization, Spin};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn spin(twice: u32) -> Spin {
    Spin::new(twice).unwrap()
}

pub fn dir(theta: f64, phi: f64) -> Direction {
    Direction::new(theta, phi).unwrap()
}

/// Uniform on the sphere.
pub fn random_direction(r: &mut ChaCha8Rng) -> Direction {
    let z: f64 = r.gen_range(-1.0..=1.0);
    Direction::new(z.acos(), r.gen_range(0.0..2.0 * PI)).unwrap()
}

pub fn random_state(r: &mut ChaCha8Rng, s: Spin, pol: Polarization) -> CatState {
    CatState::new(s, pol, r.gen_range(0.0..2.0 * PI), r.gen_range(0.0..2.0 * PI))
}

pub fn random_equatorial(r: &mut ChaCha8Rng) -> Direction {
    Direction::new(PI / 2.0, r.gen_range(0.0..2.0 * PI)).unwrap()
}
