use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

/// Angular-momentum quantum number stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct HalfInt(i32);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HalfIntError {
    #[error("`{0}` is not an integer or half-integer")]
    NotHalfInteger(String),
    #[error("`{0}` is not a number")]
    Unparseable(String),
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value, if there is one.
    pub const fn as_int(self) -> Option<i32> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Exact conversion from a float; fails unless `x` is a multiple of 1/2.
    pub fn try_from_f64(x: f64) -> Result<Self, HalfIntError> {
        let t = 2.0 * x;
        if !t.is_finite() || t.fract() != 0.0 || t.abs() > f64::from(i32::MAX) {
            return Err(HalfIntError::NotHalfInteger(x.to_string()));
        }
        Ok(HalfInt(t as i32))
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// True when `m` is a valid projection of `self`: |m| ≤ j, same parity.
    pub const fn admits_projection(self, m: HalfInt) -> bool {
        self.0 >= 0 && m.0.abs() <= self.0 && (self.0 - m.0) % 2 == 0
    }

    /// `(-1)^self` for integer-valued `self`; panics otherwise.
    pub fn parity_sign(self) -> i32 {
        let n = self.as_int().expect("phase exponent must be an integer");
        if n.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Triangle rule for three angular momenta, including integer perimeter.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    a >= 0 && b >= 0 && c >= 0 && c <= a + b && c >= (a - b).abs() && (a + b + c) % 2 == 0
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i32> for HalfInt {
    fn from(n: i32) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Accepts `3`, `-1.5`, `3/2`, `-7/2`.
impl FromStr for HalfInt {
    type Err = HalfIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i32 = num
                .trim()
                .parse()
                .map_err(|_| HalfIntError::Unparseable(s.to_string()))?;
            let den: i32 = den
                .trim()
                .parse()
                .map_err(|_| HalfIntError::Unparseable(s.to_string()))?;
            return match den {
                1 => Ok(HalfInt::from_int(num)),
                2 => Ok(HalfInt(num)),
                _ if den != 0 && (2 * num) % den == 0 => Ok(HalfInt(2 * num / den)),
                _ => Err(HalfIntError::NotHalfInteger(s.to_string())),
            };
        }
        let x: f64 = t
            .parse()
            .map_err(|_| HalfIntError::Unparseable(s.to_string()))?;
        HalfInt::try_from_f64(x).map_err(|_| HalfIntError::NotHalfInteger(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert_eq!("-1.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(-3));
        assert_eq!("2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert!(matches!(
            "0.25".parse::<HalfInt>(),
            Err(HalfIntError::NotHalfInteger(_))
        ));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("abc".parse::<HalfInt>().is_err());
    }

    #[test]
    fn projections_and_triangles() {
        let j = HalfInt::from_twice(3);
        assert!(j.admits_projection(HalfInt::from_twice(-1)));
        assert!(!j.admits_projection(HalfInt::from_int(1)));
        assert!(!j.admits_projection(HalfInt::from_twice(5)));
        assert!(triangle(HalfInt::HALF, HalfInt::HALF, HalfInt::ONE));
        assert!(!triangle(HalfInt::HALF, HalfInt::HALF, HalfInt::HALF));
        assert!(!triangle(1.into(), 1.into(), 3.into()));
    }

    #[test]
    fn display_round_trips() {
        for t in -9..=9 {
            let h = HalfInt::from_twice(t);
            assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        }
    }
}
