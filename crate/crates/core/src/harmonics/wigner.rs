//! Wigner 3j symbols by the Racah formula in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A real number `sign · sqrt(square)` with `square` an exact rational.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedSqrt {
    pub negative: bool,
    pub square: BigRational,
}

impl SignedSqrt {
    pub fn zero() -> Self {
        SignedSqrt {
            negative: false,
            square: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }

    pub fn mul(&self, other: &SignedSqrt) -> SignedSqrt {
        SignedSqrt {
            negative: self.negative != other.negative,
            square: &self.square * &other.square,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.square.to_f64().unwrap_or(f64::NAN).sqrt();
        if self.negative {
            -v
        } else {
            v
        }
    }
}

fn factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn ratio(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `(j1 j2 j3; m1 m2 m3)` for integer angular momenta.
pub fn wigner_3j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> SignedSqrt {
    if m1 + m2 + m3 != 0
        || j1 < 0
        || j2 < 0
        || j3 < 0
        || m1.abs() > j1
        || m2.abs() > j2
        || m3.abs() > j3
        || j3 > j1 + j2
        || j3 < (j1 - j2).abs()
    {
        return SignedSqrt::zero();
    }

    let t_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let t_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = BigRational::zero();
    for t in t_min..=t_max {
        let denom = factorial(t)
            * factorial(j3 - j2 + t + m1)
            * factorial(j3 - j1 + t - m2)
            * factorial(j1 + j2 - j3 - t)
            * factorial(j1 - t - m1)
            * factorial(j2 - t + m2);
        let term = BigRational::new(BigInt::one(), denom);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return SignedSqrt::zero();
    }

    let triangle = BigRational::new(
        factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3),
        factorial(j1 + j2 + j3 + 1),
    );
    let projections = factorial(j1 + m1)
        * factorial(j1 - m1)
        * factorial(j2 + m2)
        * factorial(j2 - m2)
        * factorial(j3 + m3)
        * factorial(j3 - m3);
    let square = triangle * ratio(projections) * &sum * &sum;
    let phase_odd = (j1 - j2 - m3).rem_euclid(2) == 1;
    SignedSqrt {
        negative: phase_odd != sum.is_negative(),
        square,
    }
}
