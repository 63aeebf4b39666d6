//! The prime field 𝔽_p.

use std::fmt;

use crate::error::{Error, Result};

/// A prime characteristic `p`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeChar(u64);

impl PrimeChar {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeChar(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.add(a, self.0 - b % self.0)
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.0;
        a %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.0), "inverse of zero");
        self.pow(a, self.0 - 2)
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn reduce_i128(self, v: i128) -> u64 {
        v.rem_euclid(self.0 as i128) as u64
    }

    /// If `n` is a power of `p`, return the exponent.
    pub fn log_p(self, mut n: u64) -> Option<u32> {
        if n == 0 {
            return None;
        }
        let mut k = 0;
        while n.is_multiple_of(self.0) {
            n /= self.0;
            k += 1;
        }
        (n == 1).then_some(k)
    }
}

impl fmt::Display for PrimeChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of 𝔽_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    char: PrimeChar,
}

impl FpElem {
    pub fn new(value: i128, char: PrimeChar) -> Self {
        FpElem {
            value: char.reduce_i128(value),
            char,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn char(self) -> PrimeChar {
        self.char
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Self {
        FpElem {
            value: self.char.pow(self.value, e),
            char: self.char,
        }
    }

    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| FpElem {
            value: self.char.inv(self.value),
            char: self.char,
        })
    }
}

impl std::ops::Add for FpElem {
    type Output = FpElem;
    fn add(self, rhs: FpElem) -> FpElem {
        FpElem {
            value: self.char.add(self.value, rhs.value),
            char: self.char,
        }
    }
}

impl std::ops::Sub for FpElem {
    type Output = FpElem;
    fn sub(self, rhs: FpElem) -> FpElem {
        FpElem {
            value: self.char.sub(self.value, rhs.value),
            char: self.char,
        }
    }
}

impl std::ops::Mul for FpElem {
    type Output = FpElem;
    fn mul(self, rhs: FpElem) -> FpElem {
        FpElem {
            value: self.char.mul(self.value, rhs.value),
            char: self.char,
        }
    }
}

impl std::ops::Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        FpElem {
            value: self.char.neg(self.value),
            char: self.char,
        }
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..2000u64 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(18446744073709551555));
    }

    #[test]
    fn fermat_holds() {
        for p in [2u64, 3, 5, 7, 13] {
            let c = PrimeChar::new(p).unwrap();
            for v in 0..p {
                let a = FpElem::new(v as i128, c);
                assert_eq!(a.pow(p), a);
            }
        }
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeChar::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeChar::new(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn log_p_detects_powers() {
        let c = PrimeChar::new(3).unwrap();
        assert_eq!(c.log_p(1), Some(0));
        assert_eq!(c.log_p(27), Some(3));
        assert_eq!(c.log_p(6), None);
        assert_eq!(c.log_p(0), None);
    }
}
