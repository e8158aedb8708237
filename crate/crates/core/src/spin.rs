use core::f64::consts::{PI, TAU};
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest supported `2s`.
pub const MAX_TWICE_S: u32 = 60;

/// A spin quantum number, stored as the integer `2s` so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "alloc::string::String", into = "alloc::string::String"))]
pub struct Spin {
    twice_s: u32,
}

impl Spin {
    pub fn new(twice_s: u32) -> Result<Self> {
        if twice_s == 0 {
            return Err(Error::TrivialSpin(0));
        }
        if twice_s > MAX_TWICE_S {
            return Err(Error::SpinTooLarge {
                twice_s,
                max: MAX_TWICE_S,
            });
        }
        Ok(Self { twice_s })
    }

    pub const fn half() -> Self {
        Self { twice_s: 1 }
    }

    #[inline]
    pub fn twice(self) -> u32 {
        self.twice_s
    }

    /// Hilbert-space dimension `2s + 1`.
    #[inline]
    pub fn dim(self) -> usize {
        self.twice_s as usize + 1
    }

    #[inline]
    pub fn value(self) -> f64 {
        f64::from(self.twice_s) / 2.0
    }

    /// `s^2`, formed from the exact integer `(2s)^2 / 4`.
    #[inline]
    pub fn squared(self) -> f64 {
        f64::from(self.twice_s * self.twice_s) / 4.0
    }

    #[inline]
    pub fn is_half_integer(self) -> bool {
        self.twice_s % 2 == 1
    }

    /// The gauge factor `(-1)^{2s}`.
    #[inline]
    pub fn parity_sign(self) -> f64 {
        if self.is_half_integer() {
            -1.0
        } else {
            1.0
        }
    }

    /// Magnetic quantum number at Dicke index `k` (`m = s - k`, descending).
    #[inline]
    pub fn m_at(self, k: usize) -> f64 {
        self.value() - k as f64
    }
}

impl TryFrom<u32> for Spin {
    type Error = Error;

    fn try_from(twice_s: u32) -> Result<Self> {
        Spin::new(twice_s)
    }
}

impl From<Spin> for u32 {
    fn from(s: Spin) -> u32 {
        s.twice_s
    }
}

impl TryFrom<alloc::string::String> for Spin {
    type Error = Error;

    fn try_from(s: alloc::string::String) -> Result<Self> {
        s.parse()
    }
}

impl From<Spin> for alloc::string::String {
    fn from(s: Spin) -> Self {
        alloc::string::ToString::to_string(&s)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_half_integer() {
            write!(f, "{}/2", self.twice_s)
        } else {
            write!(f, "{}", self.twice_s / 2)
        }
    }
}

/// Accepts `"k/2"` or an integer literal.
impl FromStr for Spin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::SpinParse(t.into());
        let twice = match t.split_once('/') {
            Some((num, den)) => {
                let num: u32 = num.trim().parse().map_err(|_| bad())?;
                match den.trim() {
                    "2" => num,
                    "1" => num.checked_mul(2).ok_or_else(bad)?,
                    _ => return Err(bad()),
                }
            }
            None => {
                let n: u32 = t.parse().map_err(|_| bad())?;
                n.checked_mul(2).ok_or_else(bad)?
            }
        };
        Spin::new(twice)
    }
}

/// A measurement direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// `theta` must lie in `[0, pi]`; `phi` is reduced into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidAngle {
                name: "theta",
                value: theta,
            });
        }
        if !phi.is_finite() {
            return Err(Error::InvalidAngle {
                name: "phi",
                value: phi,
            });
        }
        Ok(Self {
            theta,
            phi: reduce_angle(phi),
        })
    }

    /// Like [`Direction::new`] but clamps `theta` into `[0, pi]`.
    pub fn clamped(theta: f64, phi: f64) -> Self {
        Self {
            theta: theta.clamp(0.0, PI),
            phi: reduce_angle(phi),
        }
    }

    pub const fn north() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Great-circle angle to `other`, in `[0, pi]`.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let u = self.unit_vector();
        let v = other.unit_vector();
        let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// Reduces an angle into `[0, 2pi)`.
pub fn reduce_angle(x: f64) -> f64 {
    let mut r = x % TAU;
    if r < 0.0 {
        r += TAU;
    }
    // tiny negative inputs round up to exactly TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_parses_fractions_and_integers() {
        assert_eq!("3/2".parse::<Spin>().unwrap().twice(), 3);
        assert_eq!("2".parse::<Spin>().unwrap().twice(), 4);
        assert_eq!(" 1/2 ".parse::<Spin>().unwrap().twice(), 1);
        assert_eq!("4/2".parse::<Spin>().unwrap().twice(), 4);
        assert!("0".parse::<Spin>().is_err());
        assert!("3/4".parse::<Spin>().is_err());
        assert!("1.5".parse::<Spin>().is_err());
        assert!("31".parse::<Spin>().is_err());
    }

    #[test]
    fn spin_value_is_exact() {
        let s = Spin::new(7).unwrap();
        assert_eq!(s.value(), 3.5);
        assert_eq!(s.squared(), 12.25);
        assert_eq!(s.dim(), 8);
        assert!(s.is_half_integer());
        assert_eq!(s.parity_sign(), -1.0);
        assert_eq!(Spin::new(4).unwrap().parity_sign(), 1.0);
        assert_eq!(s.to_string(), "7/2");
        assert_eq!(Spin::new(6).unwrap().to_string(), "3");
    }

    #[test]
    fn trivial_spin_rejected() {
        assert_eq!(Spin::new(0), Err(Error::TrivialSpin(0)));
    }

    #[test]
    fn direction_rejects_out_of_range_theta() {
        assert!(Direction::new(-0.1, 0.0).is_err());
        assert!(Direction::new(3.2, 0.0).is_err());
        assert!(Direction::new(f64::NAN, 0.0).is_err());
        assert!(Direction::new(1.0, f64::INFINITY).is_err());
        let d = Direction::new(1.0, -PI / 2.0).unwrap();
        assert!((d.phi() - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn unit_vector_normalized() {
        for i in 0..50 {
            let d = Direction::new(i as f64 * PI / 49.0, i as f64 * 0.37).unwrap();
            let v = d.unit_vector();
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            assert!((n - 1.0).abs() <= 1e-15);
        }
    }
}
