//! Exponents in ℤ[1/p]≥0.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::PrimeChar;

/// The rational `numerator / p^level`, normalized so that `p ∤ numerator`
/// whenever `level > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PExponent {
    numerator: BigUint,
    level: u32,
}

pub(crate) fn p_pow(p: PrimeChar, k: u32) -> BigUint {
    BigUint::from(p.get()).pow(k)
}

impl PExponent {
    pub fn zero() -> Self {
        PExponent {
            numerator: BigUint::zero(),
            level: 0,
        }
    }

    pub fn from_int(n: u64) -> Self {
        PExponent {
            numerator: BigUint::from(n),
            level: 0,
        }
    }

    /// `numerator / p^level`, normalized.
    pub fn new(numerator: BigUint, level: u32, p: PrimeChar) -> Self {
        let mut e = PExponent { numerator, level };
        e.normalize(p);
        e
    }

    /// Build from an arbitrary fraction whose reduced denominator must be a power of `p`.
    pub fn from_fraction(num: &BigUint, den: &BigUint, p: PrimeChar) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NonPPowerDenominator("0".into()));
        }
        let g = num.gcd(den);
        let (num, mut den) = if g.is_zero() {
            (BigUint::zero(), BigUint::one())
        } else {
            (num / &g, den / &g)
        };
        let pb = BigUint::from(p.get());
        let mut level = 0u32;
        while !den.is_one() {
            let (q, r) = den.div_rem(&pb);
            if !r.is_zero() {
                return Err(Error::NonPPowerDenominator(den.to_string()));
            }
            den = q;
            level += 1;
        }
        Ok(PExponent::new(num, level, p))
    }

    fn normalize(&mut self, p: PrimeChar) {
        if self.numerator.is_zero() {
            self.level = 0;
            return;
        }
        let pb = BigUint::from(p.get());
        while self.level > 0 {
            let (q, r) = self.numerator.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            self.numerator = q;
            self.level -= 1;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.level == 0
    }

    /// Numerator over the common denominator `p^level` (requires `level >= self.level`).
    pub fn numerator_at(&self, level: u32, p: PrimeChar) -> BigUint {
        debug_assert!(level >= self.level);
        &self.numerator * p_pow(p, level - self.level)
    }

    pub fn add(&self, other: &PExponent, p: PrimeChar) -> PExponent {
        let level = self.level.max(other.level);
        PExponent::new(
            self.numerator_at(level, p) + other.numerator_at(level, p),
            level,
            p,
        )
    }

    /// `self - other`, or `None` when negative.
    pub fn checked_sub(&self, other: &PExponent, p: PrimeChar) -> Option<PExponent> {
        let level = self.level.max(other.level);
        let a = self.numerator_at(level, p);
        let b = other.numerator_at(level, p);
        (a >= b).then(|| PExponent::new(a - b, level, p))
    }

    pub fn mul_int(&self, k: &BigUint, p: PrimeChar) -> PExponent {
        PExponent::new(&self.numerator * k, self.level, p)
    }

    /// Multiply by `p^k`.
    pub fn scale_up(&self, k: u32, p: PrimeChar) -> PExponent {
        if self.is_zero() {
            return self.clone();
        }
        if self.level >= k {
            PExponent {
                numerator: self.numerator.clone(),
                level: self.level - k,
            }
        } else {
            PExponent {
                numerator: &self.numerator * p_pow(p, k - self.level),
                level: 0,
            }
        }
    }

    /// Divide by `p^k`.
    pub fn scale_down(&self, k: u32, p: PrimeChar) -> PExponent {
        PExponent::new(self.numerator.clone(), self.level + k, p)
    }

    pub fn cmp_value(&self, other: &PExponent, p: PrimeChar) -> Ordering {
        match self.level.cmp(&other.level) {
            Ordering::Equal => self.numerator.cmp(&other.numerator),
            _ => {
                let level = self.level.max(other.level);
                self.numerator_at(level, p)
                    .cmp(&other.numerator_at(level, p))
            }
        }
    }

    pub fn to_rational(&self, p: PrimeChar) -> BigRational {
        BigRational::new(
            self.numerator.clone().into(),
            p_pow(p, self.level).into(),
        )
    }

    /// Integer value as `u32` when the exponent is integral and small.
    pub fn to_u32(&self) -> Option<u32> {
        if self.level == 0 {
            self.numerator.to_u32()
        } else {
            None
        }
    }

    pub fn to_text(&self, p: PrimeChar) -> String {
        if self.level == 0 {
            self.numerator.to_string()
        } else {
            format!("({}/{})", self.numerator, p_pow(p, self.level))
        }
    }
}
