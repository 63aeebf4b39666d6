//! Sparse polynomials over 𝔽_p with exponents in ℤ[1/p]≥0: the elements of
//! perfect closures of polynomial rings.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exponent::PExponent;
use crate::field::PrimeChar;

/// Shared, ordered variable names.
pub type Vars = Arc<[String]>;

pub fn vars_from<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// A monomial `∏ x_i^{e_i}` with `e_i ∈ ℤ[1/p]`; only nonzero exponents are stored,
/// sorted by variable index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PerfMonomial {
    exps: Vec<(usize, PExponent)>,
    degree: PExponent,
}

impl PerfMonomial {
    pub fn one() -> Self {
        PerfMonomial {
            exps: Vec::new(),
            degree: PExponent::zero(),
        }
    }

    pub fn var_power(index: usize, e: PExponent) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        PerfMonomial {
            degree: e.clone(),
            exps: vec![(index, e)],
        }
    }

    pub fn from_exponents(mut exps: Vec<(usize, PExponent)>, p: PrimeChar) -> Self {
        exps.retain(|(_, e)| !e.is_zero());
        exps.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, PExponent)> = Vec::with_capacity(exps.len());
        for (i, e) in exps {
            match merged.last_mut() {
                Some((j, f)) if *j == i => *f = f.add(&e, p),
                _ => merged.push((i, e)),
            }
        }
        let degree = merged
            .iter()
            .fold(PExponent::zero(), |acc, (_, e)| acc.add(e, p));
        PerfMonomial {
            exps: merged,
            degree,
        }
    }

    pub fn exponents(&self) -> &[(usize, PExponent)] {
        &self.exps
    }

    pub fn exponent(&self, index: usize) -> PExponent {
        self.exps
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, e)| e.clone())
            .unwrap_or_else(PExponent::zero)
    }

    pub fn degree(&self) -> &PExponent {
        &self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn level(&self) -> u32 {
        self.exps.iter().map(|(_, e)| e.level()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &PerfMonomial, p: PrimeChar) -> PerfMonomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut a, mut b) = (0, 0);
        while a < self.exps.len() && b < other.exps.len() {
            let (i, ei) = &self.exps[a];
            let (j, ej) = &other.exps[b];
            match i.cmp(j) {
                Ordering::Less => {
                    out.push((*i, ei.clone()));
                    a += 1;
                }
                Ordering::Greater => {
                    out.push((*j, ej.clone()));
                    b += 1;
                }
                Ordering::Equal => {
                    out.push((*i, ei.add(ej, p)));
                    a += 1;
                    b += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[a..]);
        out.extend_from_slice(&other.exps[b..]);
        PerfMonomial {
            exps: out,
            degree: self.degree.add(&other.degree, p),
        }
    }

    /// `self / other` when every exponent of `other` is at most that of `self`.
    pub fn checked_div(&self, other: &PerfMonomial, p: PrimeChar) -> Option<PerfMonomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut b = 0;
        for (i, e) in &self.exps {
            if b < other.exps.len() && other.exps[b].0 < *i {
                return None;
            }
            if b < other.exps.len() && other.exps[b].0 == *i {
                let d = e.checked_sub(&other.exps[b].1, p)?;
                if !d.is_zero() {
                    out.push((*i, d));
                }
                b += 1;
            } else {
                out.push((*i, e.clone()));
            }
        }
        if b < other.exps.len() {
            return None;
        }
        Some(PerfMonomial::from_exponents(out, p))
    }

    fn map_exponents(&self, f: impl Fn(&PExponent) -> PExponent) -> PerfMonomial {
        PerfMonomial {
            exps: self.exps.iter().map(|(i, e)| (*i, f(e))).collect(),
            degree: f(&self.degree),
        }
    }

    /// Degree-reverse-lexicographic comparison on exact rational exponents.
    pub fn cmp_drevlex(&self, other: &PerfMonomial, p: PrimeChar) -> Ordering {
        match self.degree.cmp_value(&other.degree, p) {
            Ordering::Equal => {}
            o => return o,
        }
        // walk from the last variable; the smaller exponent there wins
        let (mut a, mut b) = (self.exps.len(), other.exps.len());
        while a > 0 || b > 0 {
            let ia = if a > 0 { Some(self.exps[a - 1].0) } else { None };
            let ib = if b > 0 { Some(other.exps[b - 1].0) } else { None };
            match (ia, ib) {
                (Some(i), Some(j)) if i == j => {
                    match self.exps[a - 1].1.cmp_value(&other.exps[b - 1].1, p) {
                        Ordering::Equal => {
                            a -= 1;
                            b -= 1;
                        }
                        o => return o.reverse(),
                    }
                }
                (Some(i), Some(j)) => {
                    // the larger index is absent (exponent 0) on the other side
                    return if i > j {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (None, None) => unreachable!(),
            }
        }
        Ordering::Equal
    }

    fn write(&self, vars: &[String], p: PrimeChar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            f.write_str(&vars[*i])?;
            if *e != PExponent::from_int(1) {
                write!(f, "^{}", e.to_text(p))?;
            }
        }
        Ok(())
    }
}

/// A polynomial over 𝔽_p whose exponents lie in ℤ[1/p]≥0.
///
/// Terms are kept in strictly descending degree-reverse-lexicographic order
/// with nonzero coefficients in `[1, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PerfPoly {
    char: PrimeChar,
    vars: Vars,
    terms: Vec<(PerfMonomial, u64)>,
}

impl PerfPoly {
    pub fn zero(char: PrimeChar, vars: &Vars) -> Self {
        PerfPoly {
            char,
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(c: i128, char: PrimeChar, vars: &Vars) -> Self {
        let c = char.reduce_i128(c);
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![(PerfMonomial::one(), c)]
        };
        PerfPoly {
            char,
            vars: vars.clone(),
            terms,
        }
    }

    pub fn one(char: PrimeChar, vars: &Vars) -> Self {
        Self::constant(1, char, vars)
    }

    pub fn variable(name: &str, char: PrimeChar, vars: &Vars) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::monomial(
            PerfMonomial::var_power(i, PExponent::from_int(1)),
            1,
            char,
            vars,
        ))
    }

    pub fn monomial(m: PerfMonomial, c: u64, char: PrimeChar, vars: &Vars) -> Self {
        Self::from_terms(vec![(m, c)], char, vars)
    }

    /// Canonicalize an arbitrary list of terms (combines duplicates, drops zeros, sorts).
    pub fn from_terms(mut terms: Vec<(PerfMonomial, u64)>, char: PrimeChar, vars: &Vars) -> Self {
        terms.sort_by(|a, b| b.0.cmp_drevlex(&a.0, char));
        let mut out: Vec<(PerfMonomial, u64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % char.get();
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = char.add(*lc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        PerfPoly {
            char,
            vars: vars.clone(),
            terms: out,
        }
    }

    pub fn char(&self) -> PrimeChar {
        self.char
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &[(PerfMonomial, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> u64 {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<&(PerfMonomial, u64)> {
        self.terms.first()
    }

    /// Whether this polynomial lives in the same ring as `other`.
    pub fn check_compatible(&self, other: &PerfPoly) -> Result<()> {
        if self.char != other.char {
            return Err(Error::CharMismatch(self.char.get(), other.char.get()));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &PerfPoly) -> Result<PerfPoly> {
        self.check_compatible(other)?;
        Ok(self.merge(other, 1))
    }

    pub fn checked_sub(&self, other: &PerfPoly) -> Result<PerfPoly> {
        self.check_compatible(other)?;
        Ok(self.merge(other, self.char.get() - 1))
    }

    pub fn checked_mul(&self, other: &PerfPoly) -> Result<PerfPoly> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn merge(&self, other: &PerfPoly, scale: u64) -> PerfPoly {
        let p = self.char;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (0, 0);
        while a < self.terms.len() || b < other.terms.len() {
            let ord = match (self.terms.get(a), other.terms.get(b)) {
                (Some(x), Some(y)) => x.0.cmp_drevlex(&y.0, p),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[a].clone());
                    a += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[b];
                    out.push((m.clone(), p.mul(*c, scale)));
                    b += 1;
                }
                Ordering::Equal => {
                    let c = p.add(self.terms[a].1, p.mul(other.terms[b].1, scale));
                    if c != 0 {
                        out.push((self.terms[a].0.clone(), c));
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
        PerfPoly {
            char: p,
            vars: self.vars.clone(),
            terms: out,
        }
    }

    fn mul_unchecked(&self, other: &PerfPoly) -> PerfPoly {
        let p = self.char;
        if self.is_zero() || other.is_zero() {
            return PerfPoly::zero(p, &self.vars);
        }
        let mut acc: HashMap<PerfMonomial, u64> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(mb, p)).or_insert(0);
                *e = p.add(*e, p.mul(*ca, *cb));
            }
        }
        PerfPoly::from_terms(acc.into_iter().collect(), p, &self.vars)
    }

    pub fn scale(&self, c: u64) -> PerfPoly {
        let p = self.char;
        let c = c % p.get();
        if c == 0 {
            return PerfPoly::zero(p, &self.vars);
        }
        PerfPoly {
            char: p,
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), p.mul(*a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &PerfMonomial, c: u64) -> PerfPoly {
        let p = self.char;
        let c = c % p.get();
        if c == 0 {
            return PerfPoly::zero(p, &self.vars);
        }
        // multiplication by a monomial preserves the order
        PerfPoly {
            char: p,
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (n.mul(m, p), p.mul(*a, c)))
                .collect(),
        }
    }

    /// `self^e`, using `f^{p^j} = frobenius(f, j)` on the base-p digits of `e`.
    pub fn pow(&self, e: &BigUint) -> PerfPoly {
        let p = self.char;
        let mut acc = PerfPoly::one(p, &self.vars);
        let mut e = e.clone();
        let pb = BigUint::from(p.get());
        let mut j = 0u32;
        while !e.is_zero() {
            let (q, d) = e.div_rem(&pb);
            let d = d.to_u64().unwrap_or(0);
            if d > 0 {
                let base = self.frobenius(j);
                for _ in 0..d {
                    acc = &acc * &base;
                }
            }
            e = q;
            j += 1;
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> PerfPoly {
        self.pow(&BigUint::from(e))
    }

    /// `f^{p^k}`: exponents scale by `p^k`, coefficients are fixed since `c^p = c` in 𝔽_p.
    pub fn frobenius(&self, k: u32) -> PerfPoly {
        let p = self.char;
        PerfPoly {
            char: p,
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.map_exponents(|e| e.scale_up(k, p)), *c))
                .collect(),
        }
    }

    /// The unique `g` with `g^{p^k} = f`.
    pub fn pth_root(&self, k: u32) -> PerfPoly {
        let p = self.char;
        PerfPoly {
            char: p,
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.map_exponents(|e| e.scale_down(k, p)), *c))
                .collect(),
        }
    }

    /// Least `n` such that `f^{p^n}` has integer exponents.
    pub fn level_of(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.level()).max().unwrap_or(0)
    }

    /// Rewrite in the root variables `u_i = x_i^{1/p^n}`; the result has integer
    /// exponents and its variable `x_i` stands for `u_i`.
    pub fn rescale(&self, n: u32) -> Result<PerfPoly> {
        let have = self.level_of();
        if have > n {
            return Err(Error::LevelTooLow { have, ring: n });
        }
        Ok(self.frobenius(n))
    }

    /// Inverse of [`PerfPoly::rescale`].
    pub fn unrescale(&self, n: u32) -> PerfPoly {
        self.pth_root(n)
    }

    /// Substitute `images[i]` for variable `i`; all exponents must be integers.
    pub fn substitute_integer(&self, images: &[PerfPoly], target_vars: &Vars) -> Result<PerfPoly> {
        let p = self.char;
        let mut out = PerfPoly::zero(p, target_vars);
        for (m, c) in &self.terms {
            let mut t = PerfPoly::constant(*c as i128, p, target_vars);
            for (i, e) in m.exponents() {
                if !e.is_integer() {
                    return Err(Error::Invalid("substitution needs integer exponents".into()));
                }
                t = &t * &images[*i].pow(e.numerator());
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Evaluate the perfection of a ring map: `f ↦ hom(f^{p^n})^{1/p^n}` with
    /// `n = level_of(f)`. Variables missing from `hom` must exist in the target
    /// and are sent to themselves.
    pub fn map_perfection(&self, hom: &[(String, PerfPoly)], target_vars: &Vars) -> Result<PerfPoly> {
        self.map_perfection_at(hom, target_vars, self.level_of())
    }

    /// As [`PerfPoly::map_perfection`] but through level `n ≥ level_of(f)`.
    pub fn map_perfection_at(
        &self,
        hom: &[(String, PerfPoly)],
        target_vars: &Vars,
        n: u32,
    ) -> Result<PerfPoly> {
        let images = self
            .vars
            .iter()
            .map(|v| match hom.iter().find(|(name, _)| name == v) {
                Some((_, img)) => {
                    if img.vars() != target_vars || img.char() != self.char {
                        Err(Error::VariableMismatch)
                    } else {
                        Ok(img.clone())
                    }
                }
                None => PerfPoly::variable(v, self.char, target_vars),
            })
            .collect::<Result<Vec<_>>>()?;
        let lifted = self.rescale(n)?;
        Ok(lifted.substitute_integer(&images, target_vars)?.pth_root(n))
    }

    /// Re-express over a larger variable list (names must all appear in `vars`).
    pub fn embed(&self, vars: &Vars) -> Result<PerfPoly> {
        let map = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let exps = m.exponents().iter().map(|(i, e)| (map[*i], e.clone())).collect();
                (PerfMonomial::from_exponents(exps, self.char), *c)
            })
            .collect();
        Ok(PerfPoly::from_terms(terms, self.char, vars))
    }

    /// Variables that occur with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.exponents().iter().map(|(i, _)| *i))
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

impl fmt::Display for PerfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                if *c != 1 {
                    write!(f, "{c}*")?;
                }
                m.write(&self.vars, self.char, f)?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> std::ops::$tr<&'a PerfPoly> for &'a PerfPoly {
            type Output = PerfPoly;
            /// Panics when the operands live in different rings; use the
            /// `checked_*` methods for fallible arithmetic.
            fn $m(self, rhs: &'a PerfPoly) -> PerfPoly {
                self.check_compatible(rhs).expect("ring mismatch");
                $body(self, rhs)
            }
        }
        impl std::ops::$tr<PerfPoly> for PerfPoly {
            type Output = PerfPoly;
            fn $m(self, rhs: PerfPoly) -> PerfPoly {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &PerfPoly, b: &PerfPoly| a.merge(b, 1));
binop!(Sub, sub, |a: &PerfPoly, b: &PerfPoly| a.merge(b, a.char.get() - 1));
binop!(Mul, mul, |a: &PerfPoly, b: &PerfPoly| a.mul_unchecked(b));

impl std::ops::Neg for &PerfPoly {
    type Output = PerfPoly;
    fn neg(self) -> PerfPoly {
        self.scale(self.char.get() - 1)
    }
}
