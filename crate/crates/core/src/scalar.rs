//! Exact rational scalars and deterministic generic sample points.
//!
//! Every identity in this crate is an equality of rational functions. We check
//! them by evaluating both sides at random rational points and comparing the
//! results exactly; a nonzero rational function vanishes at a random point of
//! a large grid only with tiny probability.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exact rational number in canonical form (positive denominator, reduced).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`, reduced.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(numer, denom)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(&self.0 / &rhs.0))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 {
            return self.inv()?.pow(-exp);
        }
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        Ok(acc)
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar(self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

/// Numerators and denominators are drawn uniformly from `1..=SAMPLE_RANGE`.
pub const SAMPLE_RANGE: i64 = 10_000;

/// Hard cap on rejection-sampling redraws inside one [`sample_point`] call.
pub const SAMPLE_RETRY_CAP: usize = 10_000;

/// A generic assignment of `q`, the evaluation parameters and the Bethe
/// variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePoint {
    pub q: Scalar,
    pub z: Vec<Scalar>,
    pub t: Vec<Scalar>,
    pub seed: u64,
}

impl SamplePoint {
    /// `q ∉ {0, ±1}` and all of `z ∪ t` nonzero and pairwise distinct.
    pub fn is_valid(&self) -> bool {
        if self.q.is_zero() || self.q.abs().is_one() {
            return false;
        }
        let mut all: Vec<&Scalar> = self.z.iter().chain(self.t.iter()).collect();
        if all.iter().any(|x| x.is_zero()) {
            return false;
        }
        all.sort();
        all.windows(2).all(|w| w[0] != w[1])
    }
}

fn draw(rng: &mut ChaCha8Rng) -> Scalar {
    let p = rng.gen_range(1..=SAMPLE_RANGE);
    let r = rng.gen_range(1..=SAMPLE_RANGE);
    Scalar(BigRational::new(BigInt::from(p), BigInt::from(r)))
}

/// Deterministic sample point: `q`, then `num_factors` values of `z`, then
/// `multiset_size` values of `t`, each `p/r` with `p, r` uniform in
/// `[1, 10^4]` and redrawn until the [`SamplePoint`] invariants hold.
pub fn sample_point(seed: u64, num_factors: usize, multiset_size: usize) -> Result<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut retries = 0usize;
    let bump = |retries: &mut usize| -> Result<()> {
        *retries += 1;
        if *retries > SAMPLE_RETRY_CAP {
            Err(Error::SamplingExhausted(SAMPLE_RETRY_CAP))
        } else {
            Ok(())
        }
    };

    let q = loop {
        let q = draw(&mut rng);
        if !q.is_one() {
            break q;
        }
        bump(&mut retries)?;
    };

    let mut taken: Vec<Scalar> = Vec::with_capacity(num_factors + multiset_size);
    for _ in 0..num_factors + multiset_size {
        let x = loop {
            let x = draw(&mut rng);
            if !taken.contains(&x) {
                break x;
            }
            bump(&mut retries)?;
        };
        taken.push(x);
    }
    let t = taken.split_off(num_factors);
    Ok(SamplePoint { q, z: taken, t, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d).unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(s(1, 2) + s(1, 3), s(5, 6));
        assert_eq!(s(3, 4) * s(4, 3), Scalar::one());
        assert_eq!(s(1, 2) - s(1, 2), Scalar::zero());
        assert_eq!(-s(2, 4), s(-1, 2));
        assert_eq!(s(2, 3).checked_div(&s(4, 9)).unwrap(), s(3, 2));
    }

    #[test]
    fn canonical_form() {
        let x = s(6, -8);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(4));
        assert_eq!(x.to_string(), "-3/4");
        assert_eq!(s(10, 5).to_string(), "2");
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(s(1, 2).checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
        assert_eq!(Scalar::new(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn powers() {
        assert_eq!(s(2, 3).pow(3).unwrap(), s(8, 27));
        assert_eq!(s(2, 3).pow(-2).unwrap(), s(9, 4));
        assert_eq!(s(2, 3).pow(0).unwrap(), Scalar::one());
        assert!(Scalar::zero().pow(-1).is_err());
    }

    #[test]
    fn sample_is_deterministic() {
        let a = sample_point(42, 2, 3).unwrap();
        let b = sample_point(42, 2, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_point(43, 2, 3).unwrap());
    }

    #[test]
    fn sample_shape() {
        let p = sample_point(7, 2, 3).unwrap();
        assert_eq!(p.z.len(), 2);
        assert_eq!(p.t.len(), 3);
        assert_eq!(p.seed, 7);
        assert!(p.is_valid());
    }

    #[test]
    fn thousand_samples_are_valid() {
        for seed in 0..1000u64 {
            let p = sample_point(seed, 3, 4).unwrap();
            assert!(p.is_valid(), "seed {seed}");
        }
    }

    #[test]
    fn empty_sample() {
        let p = sample_point(1, 0, 0).unwrap();
        assert!(p.z.is_empty() && p.t.is_empty());
        assert!(p.is_valid());
    }

    #[test]
    fn validator_rejects_bad_points() {
        let mut p = sample_point(3, 1, 1).unwrap();
        p.t[0] = p.z[0].clone();
        assert!(!p.is_valid());
        let mut p = sample_point(3, 1, 1).unwrap();
        p.q = Scalar::from_int(-1);
        assert!(!p.is_valid());
    }
}
