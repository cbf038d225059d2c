use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact number of the form `sign * sqrt(radicand)` with a rational radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        SqrtRational {
            sign: 1,
            radicand: BigRational::one(),
        }
    }

    /// `sign * sqrt(radicand)`; `radicand` must be non-negative.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if radicand.is_zero() || sign == 0 {
            return SqrtRational::zero();
        }
        SqrtRational {
            sign: sign.signum(),
            radicand,
        }
    }

    pub fn from_ratio(sign: i8, num: i64, den: i64) -> Self {
        SqrtRational::new(
            sign,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    /// The exact value `r` itself, written as `sign(r) * sqrt(r^2)`.
    pub fn from_rational(r: &BigRational) -> Self {
        let sign = if r.is_negative() { -1 } else { 1 };
        SqrtRational::new(sign, r * r)
    }

    /// `sign * s * sqrt(radicand)` for a rational `s`.
    pub fn scaled(sign: i8, s: &BigRational, radicand: &BigRational) -> Self {
        let sign = if s.is_negative() { -sign } else { sign };
        SqrtRational::new(sign, radicand * s * s)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The square of the value, which is always rational.
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        f64::from(self.sign) * ratio_to_f64(&self.radicand).sqrt()
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        SqrtRational::new(self.sign * rhs.sign, &self.radicand * &rhs.radicand)
    }
}

impl Mul for SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: SqrtRational) -> SqrtRational {
        &self * &rhs
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let pre = if s < 0 { "-" } else { "" };
                write!(f, "{pre}sqrt({})", self.radicand)
            }
        }
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Scale both sides down to f64 range.
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let shift_n = (nb - 900).max(0) as u64;
        let shift_d = (db - 900).max(0) as u64;
        let n = (r.numer() >> shift_n).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift_d).to_f64().unwrap_or(f64::NAN);
        n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
    })
}

const CACHED_FACTORIALS: usize = 256;

fn factorial_table() -> &'static [BigInt] {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(CACHED_FACTORIALS);
        let mut acc = BigInt::one();
        v.push(acc.clone());
        for n in 1..CACHED_FACTORIALS {
            acc *= n;
            v.push(acc.clone());
        }
        v
    })
}

/// Exact `n!`.
pub fn factorial(n: u32) -> BigInt {
    let table = factorial_table();
    if (n as usize) < table.len() {
        return table[n as usize].clone();
    }
    let mut acc = table[table.len() - 1].clone();
    for k in table.len() as u32..=n {
        acc *= k;
    }
    acc
}

/// Exact `n!!`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub(crate) fn float_factorial(n: i64) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut v = vec![1.0f64; 171];
        for k in 1..171 {
            v[k] = v[k - 1] * k as f64;
        }
        v
    });
    t.get(n as usize).copied().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(10), BigInt::from(3_628_800));
        assert_eq!(factorial(300) / factorial(299), BigInt::from(300));
        assert_eq!(double_factorial(7), BigInt::from(105));
        assert_eq!(double_factorial(-1), BigInt::one());
        assert_eq!(float_factorial(5), 120.0);
    }

    #[test]
    fn sqrt_rational_arithmetic() {
        let a = SqrtRational::from_ratio(-1, 2, 3);
        let b = SqrtRational::from_ratio(1, 3, 8);
        let p = &a * &b;
        assert_eq!(p, SqrtRational::from_ratio(-1, 1, 4));
        assert!((p.to_f64() + 0.5).abs() < 1e-16);
        assert_eq!(SqrtRational::from_ratio(1, 0, 5), SqrtRational::zero());
        assert_eq!(a.to_string(), "-sqrt(2/3)");
    }

    #[test]
    fn huge_ratio_converts() {
        let r = BigRational::new(factorial(400), factorial(399));
        assert!((ratio_to_f64(&r) - 400.0).abs() < 1e-9);
    }
}
